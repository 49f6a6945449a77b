// Copyright 2026 The permflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "permflow/slicer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace permflow::slicer {

ConstraintSet::ConstraintSet(std::size_t n) : n_(n) {
    if (n == 0) {
        throw InvalidSizeError("constraint set size must be positive");
    }
}

ConstraintSet::ConstraintSet(std::size_t n, const std::vector<Constraint>& constraints) : ConstraintSet(n) {
    for (const Constraint& c : constraints) {
        add(c);
    }
}

bool ConstraintSet::add(Constraint c) {
    if (c.lo == c.hi) {
        throw DomainError("constraint " + std::to_string(c.lo) + "<" + std::to_string(c.hi) + " compares an index with itself");
    }
    if (c.lo == 0 || c.hi == 0 || c.lo > n_ || c.hi > n_) {
        throw DomainError("constraint " + std::to_string(c.lo) + "<" + std::to_string(c.hi) + " outside 1.." +
                          std::to_string(n_));
    }
    if (std::find(constraints_.begin(), constraints_.end(), c) != constraints_.end()) {
        return false;
    }
    constraints_.push_back(c);
    return true;
}

bool ConstraintSet::satisfied_by(const Permutation& p) const {
    return std::all_of(constraints_.begin(), constraints_.end(),
                       [&](const Constraint& c) { return p.rank(c.lo) < p.rank(c.hi); });
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::size_t parse_index(std::string_view token, std::string_view pair) {
    token = trim(token);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError("bad index in constraint \"" + std::string(pair) + "\"");
    }
    return value;
}

void require_at_most(const ConstraintSet& s, std::size_t limit, const char* what) {
    if (s.n() > limit) {
        throw SizeLimitError(std::string(what) + ": n = " + std::to_string(s.n()) + " exceeds limit " +
                             std::to_string(limit));
    }
}

}  // namespace

ConstraintSet parse_constraints(std::size_t n, std::string_view text) {
    ConstraintSet set(n);
    if (trim(text).empty()) {
        return set;
    }
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string_view pair = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        const std::size_t lt = pair.find('<');
        if (lt == std::string_view::npos) {
            throw ParseError("constraint \"" + std::string(trim(pair)) + "\" is not of the form i<j");
        }
        const Constraint c{parse_index(pair.substr(0, lt), pair), parse_index(pair.substr(lt + 1), pair)};
        try {
            set.add(c);
        } catch (const DomainError& e) {
            throw ParseError(e.what());
        }
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return set;
}

std::string format_constraints(const ConstraintSet& s) {
    std::string out;
    for (const Constraint& c : s.constraints()) {
        if (!out.empty()) {
            out += ',';
        }
        out += std::to_string(c.lo) + "<" + std::to_string(c.hi);
    }
    return out;
}

ConstraintSet full_chain(std::size_t n) {
    ConstraintSet s(n);
    for (std::size_t i = 1; i < n; ++i) {
        s.add({i, i + 1});
    }
    return s;
}

std::uint64_t feasible_count_brute(const ConstraintSet& s) {
    require_at_most(s, kBruteCountLimit, "feasible_count_brute");
    std::vector<int> ranks(s.n());
    std::iota(ranks.begin(), ranks.end(), 1);
    std::uint64_t count = 0;
    do {
        bool ok = true;
        for (const Constraint& c : s.constraints()) {
            if (ranks[c.lo - 1] >= ranks[c.hi - 1]) {
                ok = false;
                break;
            }
        }
        count += ok ? 1 : 0;
    } while (std::next_permutation(ranks.begin(), ranks.end()));
    return count;
}

std::uint64_t feasible_count_subsets(const ConstraintSet& s) {
    require_at_most(s, kSubsetCountLimit, "feasible_count_subsets");
    const std::size_t n = s.n();
    // must_precede[e]: positions whose rank has to be below e's rank.
    std::vector<std::uint32_t> must_precede(n, 0);
    for (const Constraint& c : s.constraints()) {
        must_precede[c.hi - 1] |= std::uint32_t{1} << (c.lo - 1);
    }
    // ways[mask]: assignments of ranks 1..|mask| to the positions in mask.
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    std::vector<std::uint64_t> ways(std::size_t{full} + 1, 0);
    ways[0] = 1;
    for (std::uint32_t mask = 0; mask < full; ++mask) {
        if (ways[mask] == 0) {
            continue;
        }
        for (std::size_t e = 0; e < n; ++e) {
            const std::uint32_t bit = std::uint32_t{1} << e;
            if ((mask & bit) == 0 && (must_precede[e] & ~mask) == 0) {
                ways[mask | bit] += ways[mask];
            }
        }
    }
    return ways[full];
}

std::uint64_t feasible_count(const ConstraintSet& s) { return feasible_count_subsets(s); }

bool is_contradictory(const ConstraintSet& s) {
    // Kahn's algorithm; leftover vertices lie on or behind a cycle.
    const std::size_t n = s.n();
    std::vector<std::vector<std::size_t>> out(n);
    std::vector<std::size_t> indegree(n, 0);
    for (const Constraint& c : s.constraints()) {
        out[c.lo - 1].push_back(c.hi - 1);
        ++indegree[c.hi - 1];
    }
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v) {
        if (indegree[v] == 0) {
            ready.push_back(v);
        }
    }
    std::size_t removed = 0;
    while (!ready.empty()) {
        const std::size_t v = ready.back();
        ready.pop_back();
        ++removed;
        for (std::size_t w : out[v]) {
            if (--indegree[w] == 0) {
                ready.push_back(w);
            }
        }
    }
    return removed != n;
}

bool isolates_sorted(const ConstraintSet& s) {
    return s.satisfied_by(Permutation::identity(s.n())) && feasible_count(s) == 1;
}

ConstraintSet relabel_by_rank(const ConstraintSet& s, const Permutation& input) {
    if (input.size() != s.n()) {
        throw DomainError("relabel_by_rank: permutation size does not match constraint set");
    }
    ConstraintSet out(s.n());
    for (const Constraint& c : s.constraints()) {
        out.add({static_cast<std::size_t>(input.rank(c.lo)), static_cast<std::size_t>(input.rank(c.hi))});
    }
    return out;
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "insertion") {
        return Algorithm::insertion;
    }
    if (name == "merge") {
        return Algorithm::merge;
    }
    if (name == "quick") {
        return Algorithm::quick;
    }
    if (name == "heap") {
        return Algorithm::heap;
    }
    throw ParseError("unknown algorithm \"" + std::string(name) + "\" (expected insertion|merge|quick|heap)");
}

std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::insertion:
            return "insertion";
        case Algorithm::merge:
            return "merge";
        case Algorithm::quick:
            return "quick";
        case Algorithm::heap:
            return "heap";
    }
    return "unknown";
}

namespace {

// Items are 0-based input positions; every comparison goes through less().
class Recorder {
  public:
    explicit Recorder(const Permutation& input)
        : input_(input), constraints_(input.size()), current_(feasible_count(constraints_)) {}

    bool less(std::size_t a, std::size_t b) {
        const bool result = input_.rank(a + 1) < input_.rank(b + 1);
        const Constraint c = result ? Constraint{a + 1, b + 1} : Constraint{b + 1, a + 1};
        const std::uint64_t before = current_;
        if (constraints_.add(c)) {
            current_ = feasible_count(constraints_);
        }
        trace_.push_back({c, before, current_,
                          std::log2(static_cast<double>(before) / static_cast<double>(current_))});
        return result;
    }

    std::vector<TraceStep>& trace() { return trace_; }
    ConstraintSet& constraints() { return constraints_; }

  private:
    const Permutation& input_;
    ConstraintSet constraints_;
    std::uint64_t current_;
    std::vector<TraceStep> trace_;
};

void insertion_sort(std::vector<std::size_t>& a, Recorder& rec) {
    for (std::size_t i = 1; i < a.size(); ++i) {
        for (std::size_t j = i; j > 0 && rec.less(a[j], a[j - 1]); --j) {
            std::swap(a[j], a[j - 1]);
        }
    }
}

void merge_sort(std::vector<std::size_t>& a, std::size_t begin, std::size_t end, Recorder& rec) {
    if (end - begin < 2) {
        return;
    }
    const std::size_t mid = begin + (end - begin) / 2;
    merge_sort(a, begin, mid, rec);
    merge_sort(a, mid, end, rec);
    std::vector<std::size_t> merged;
    merged.reserve(end - begin);
    std::size_t i = begin;
    std::size_t j = mid;
    while (i < mid && j < end) {
        merged.push_back(rec.less(a[j], a[i]) ? a[j++] : a[i++]);
    }
    merged.insert(merged.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.begin() + static_cast<std::ptrdiff_t>(mid));
    merged.insert(merged.end(), a.begin() + static_cast<std::ptrdiff_t>(j), a.begin() + static_cast<std::ptrdiff_t>(end));
    std::copy(merged.begin(), merged.end(), a.begin() + static_cast<std::ptrdiff_t>(begin));
}

std::vector<std::size_t> quick_sort(const std::vector<std::size_t>& a, Recorder& rec) {
    if (a.size() < 2) {
        return a;
    }
    const std::size_t pivot = a.front();
    std::vector<std::size_t> below;
    std::vector<std::size_t> above;
    for (std::size_t k = 1; k < a.size(); ++k) {
        (rec.less(a[k], pivot) ? below : above).push_back(a[k]);
    }
    std::vector<std::size_t> out = quick_sort(below, rec);
    out.push_back(pivot);
    const std::vector<std::size_t> rest = quick_sort(above, rec);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

void sift_down(std::vector<std::size_t>& a, std::size_t root, std::size_t end, Recorder& rec) {
    while (2 * root + 1 < end) {
        std::size_t child = 2 * root + 1;
        if (child + 1 < end && rec.less(a[child], a[child + 1])) {
            ++child;
        }
        if (!rec.less(a[root], a[child])) {
            return;
        }
        std::swap(a[root], a[child]);
        root = child;
    }
}

void heap_sort(std::vector<std::size_t>& a, Recorder& rec) {
    const std::size_t n = a.size();
    for (std::size_t start = n / 2; start-- > 0;) {
        sift_down(a, start, n, rec);
    }
    for (std::size_t end = n; end-- > 1;) {
        std::swap(a[0], a[end]);
        sift_down(a, 0, end, rec);
    }
}

}  // namespace

InstrumentedRun instrument(Algorithm algorithm, const Permutation& input) {
    if (input.size() > kInstrumentLimit) {
        throw SizeLimitError("instrument: n = " + std::to_string(input.size()) + " exceeds limit " +
                             std::to_string(kInstrumentLimit));
    }
    Recorder rec(input);
    std::vector<std::size_t> items(input.size());
    std::iota(items.begin(), items.end(), std::size_t{0});
    switch (algorithm) {
        case Algorithm::insertion:
            insertion_sort(items, rec);
            break;
        case Algorithm::merge:
            merge_sort(items, 0, items.size(), rec);
            break;
        case Algorithm::quick:
            items = quick_sort(items, rec);
            break;
        case Algorithm::heap:
            heap_sort(items, rec);
            break;
    }

    std::vector<int> output;
    output.reserve(items.size());
    for (std::size_t pos : items) {
        output.push_back(input.rank(pos + 1));
    }
    const std::vector<int> values(input.ranks().begin(), input.ranks().end());
    const bool sorted = values.size() <= kBruteForceSortLimit ? output == brute_force_sort(values)
                                                               : std::is_sorted(output.begin(), output.end());
    if (!sorted) {
        throw std::logic_error("instrument: " + std::string(algorithm_name(algorithm)) + " did not sort its input");
    }
    return InstrumentedRun{algorithm, input, std::move(rec.trace()), std::move(rec.constraints()), std::move(output)};
}

ReductionReport reduction_report(const InstrumentedRun& run) {
    ReductionReport report;
    report.comparisons = run.trace.size();
    std::size_t halving = 0;
    for (const TraceStep& step : run.trace) {
        report.total_bits += step.bits;
        report.max_bits = std::max(report.max_bits, step.bits);
        if (step.bits >= 1.0 - 1e-9) {
            ++halving;
        }
    }
    report.halving_fraction =
        run.trace.empty() ? 0.0 : static_cast<double>(halving) / static_cast<double>(run.trace.size());
    report.final_count = run.trace.empty() ? feasible_count(run.constraints) : run.trace.back().feasible_after;
    return report;
}

}  // namespace permflow::slicer
