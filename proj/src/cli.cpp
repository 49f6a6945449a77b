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

#include "permflow/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "permflow/dtree.hpp"
#include "permflow/flow.hpp"
#include "permflow/projected_flow.hpp"
#include "permflow/slicer.hpp"

namespace permflow::cli {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kDefaultPrecision = 6;
constexpr std::uint64_t kBenchMax = 1'000'000;

// Raised for command-level usage problems that CLI11 cannot catch itself.
class UsageError : public Error {
  public:
    using Error::Error;
};

struct Common {
    std::size_t n = 0;
    CLI::Option* n_opt = nullptr;
    std::string start = "reverse";
    double epsilon = 1.0;
    double c = 1.0;
    std::string format = "json";
    std::string output;
    int precision = kDefaultPrecision;
    CLI::Option* precision_opt = nullptr;

    std::optional<std::size_t> size() const {
        return n_opt->count() > 0 ? std::optional<std::size_t>(n) : std::nullopt;
    }
};

void add_common(CLI::App* sub, Common& o, bool with_start, std::string default_format = "json") {
    o.format = default_format;
    o.n_opt = sub->add_option("--n", o.n, "problem size");
    if (with_start) {
        sub->add_option("--start", o.start, "reverse | sorted | random:SEED | explicit list such as 3,1,2");
        sub->add_option("--epsilon", o.epsilon, "sortedness threshold (rank units)")->check(CLI::PositiveNumber);
        sub->add_option("--c", o.c, "comparison time-step constant, dt = c/n")->check(CLI::PositiveNumber);
    }
    std::vector<std::string> formats{"json", "csv"};
    if (default_format == "text") {
        formats.insert(formats.begin(), "text");
    }
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember(formats));
    sub->add_option("--output", o.output, "write to this file instead of standard output");
    o.precision_opt =
        sub->add_option("--precision", o.precision, "significant digits for reals")->check(CLI::Range(1, 17));
}

int resolve_precision(const Common& o) {
    if (o.precision_opt->count() > 0) {
        return o.precision;
    }
    if (const char* env = std::getenv("PERMFLOW_PRECISION")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || value < 1 || value > 17) {
            throw UsageError("PERMFLOW_PRECISION must be an integer in 1..17");
        }
        return static_cast<int>(value);
    }
    return kDefaultPrecision;
}

// Reals in JSON go through the same rounding as text output so golden files
// stay stable.
double rounded(double value, int precision) { return std::strtod(format_real(value, precision).c_str(), nullptr); }

std::vector<int> ranks_of(const Permutation& p) { return {p.ranks().begin(), p.ranks().end()}; }

std::size_t require_size(const Common& o) {
    if (!o.size()) {
        throw UsageError("--n is required");
    }
    if (*o.size() == 0) {
        throw UsageError("--n must be positive");
    }
    return *o.size();
}

Permutation start_of(const Common& o) {
    try {
        return parse_start(o.start, o.size());
    } catch (const InvalidPermutationError& e) {
        throw UsageError(e.what());
    } catch (const InvalidSizeError& e) {
        throw UsageError(e.what());
    }
}

// ---------------------------------------------------------------------------
// flow events

void flow_events(const Common& o, std::ostream& os) {
    const Permutation start = start_of(o);
    const int prec = resolve_precision(o);
    const std::size_t n = start.size();
    const StateVector x0 = vertex_of(start);
    const auto events = crossing_events(x0);
    const SortingEstimate est = estimate_sorting(start, o.epsilon, o.c);
    const double estimate_ceil = std::ceil(est.discrete_estimate);

    if (o.format == "csv") {
        os << "key,value\n";
        os << "n," << n << "\n";
        os << "d0," << format_real(est.d0, prec) << "\n";
        os << "crossings," << events.size() << "\n";
        os << "t_eps," << format_real(est.continuous_time, prec) << "\n";
        os << "estimate," << format_real(est.discrete_estimate, prec) << "\n";
        os << "estimate_ceil," << format_real(estimate_ceil, prec) << "\n";
        os << "lemma_lb," << format_real(est.lemma_lower_bound, prec) << "\n";
        os << "\ni,j,t,value\n";
        for (const auto& e : events) {
            os << e.i << ',' << e.j << ',' << format_real(e.time, prec) << ',' << format_real(e.meeting_value, prec)
               << "\n";
        }
        return;
    }
    ordered_json j;
    j["n"] = n;
    j["start"] = ranks_of(start);
    j["d0"] = rounded(est.d0, prec);
    j["crossings"] = events.size();
    j["events"] = ordered_json::array();
    for (const auto& e : events) {
        j["events"].push_back(
            {{"i", e.i}, {"j", e.j}, {"t", rounded(e.time, prec)}, {"value", rounded(e.meeting_value, prec)}});
    }
    j["t_eps"] = rounded(est.continuous_time, prec);
    j["estimate"] = rounded(est.discrete_estimate, prec);
    j["estimate_ceil"] = rounded(estimate_ceil, prec);
    j["lemma_lb"] = rounded(est.lemma_lower_bound, prec);
    os << j.dump() << "\n";
}

// ---------------------------------------------------------------------------
// flow trace

struct TraceOptions {
    std::size_t samples = 11;
    std::string t_end = "5";
    bool projected = false;
    double step = 1e-3;
};

void flow_trace(const Common& o, const TraceOptions& t, std::ostream& os) {
    const Permutation start = start_of(o);
    const int prec = resolve_precision(o);
    if (t.samples < 2) {
        throw UsageError("--samples must be at least 2");
    }
    double t_end = 0.0;
    try {
        t_end = parse_time(t.t_end);
    } catch (const ParseError& e) {
        throw UsageError(e.what());
    }
    if (!(t_end > 0.0)) {
        throw UsageError("--t-end must be positive");
    }
    const std::size_t n = start.size();
    const StateVector x0 = vertex_of(start);
    const double interval = t_end / static_cast<double>(t.samples - 1);

    struct Row {
        double t;
        std::vector<double> x;
        double disorder;
    };
    std::vector<Row> rows;
    if (t.projected) {
        if (!(t.step > 0.0) || t.step > kMaxProjectedStep) {
            throw StepSizeError("--step must lie in (0, 1e-2]");
        }
        // Land samples on integration steps: step divides the sample interval.
        const double per_sample = std::ceil(interval / t.step - 1e-9);
        const ProjectedTrace trace =
            integrate_projected(x0, t_end, interval / per_sample, default_tie_tolerance(n));
        for (std::size_t k = 0; k < t.samples; ++k) {
            const double target = static_cast<double>(k) * interval;
            const auto idx = std::min(trace.samples.size() - 1,
                                      static_cast<std::size_t>(std::llround(target / trace.step)));
            const auto& s = trace.samples[idx];
            rows.push_back({s.t, {s.state.coords().begin(), s.state.coords().end()}, 2.0 * s.potential});
        }
    } else {
        std::vector<double> times(t.samples);
        for (std::size_t k = 0; k < t.samples; ++k) {
            times[k] = k + 1 == t.samples ? t_end : static_cast<double>(k) * interval;
        }
        for (const auto& s : sample_flow(x0, times).samples) {
            rows.push_back({s.t, {s.state.coords().begin(), s.state.coords().end()}, s.disorder});
        }
    }

    if (o.format == "csv") {
        os << 't';
        for (std::size_t i = 1; i <= n; ++i) {
            os << ",x" << i;
        }
        os << ",disorder\n";
        for (const auto& r : rows) {
            os << format_real(r.t, prec);
            for (double v : r.x) {
                os << ',' << format_real(v, prec);
            }
            os << ',' << format_real(r.disorder, prec) << "\n";
        }
        return;
    }
    ordered_json j;
    j["n"] = n;
    j["start"] = ranks_of(start);
    j["projected"] = t.projected;
    j["samples"] = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json x = ordered_json::array();
        for (double v : r.x) {
            x.push_back(rounded(v, prec));
        }
        j["samples"].push_back({{"t", rounded(r.t, prec)}, {"x", x}, {"disorder", rounded(r.disorder, prec)}});
    }
    os << j.dump() << "\n";
}

// ---------------------------------------------------------------------------
// dtree

struct DtreeOptions {
    bool allow_slow = false;
    std::string emit_tree;
};

void dtree_cmd(const Common& o, const DtreeOptions& d, std::ostream& os) {
    const std::size_t n = require_size(o);
    if (n > dtree::kFastBuildLimit && n <= dtree::kSlowBuildLimit && !d.allow_slow) {
        throw UsageError("--n " + std::to_string(n) + " requires --allow-slow");
    }
    const auto tree = dtree::build_optimal(n, d.allow_slow);
    const bool verified = dtree::verify_tree(*tree.root, n).ok;
    const std::size_t bound = dtree::info_lower_bound(n);
    if (!d.emit_tree.empty()) {
        std::ofstream file(d.emit_tree);
        if (!file) {
            throw UsageError("cannot write " + d.emit_tree);
        }
        file << dtree::to_json(*tree.root).dump() << "\n";
    }
    if (o.format == "csv") {
        os << "n,info_bound,height,leaf_count,verified\n";
        os << n << ',' << bound << ',' << tree.stats.height << ',' << tree.stats.leaf_count << ','
           << (verified ? "true" : "false") << "\n";
        return;
    }
    ordered_json j;
    j["n"] = n;
    j["info_bound"] = bound;
    j["height"] = tree.stats.height;
    j["leaf_count"] = tree.stats.leaf_count;
    j["verified"] = verified;
    os << j.dump() << "\n";
}

// ---------------------------------------------------------------------------
// slice

struct SliceOptions {
    std::string constraints;
    CLI::Option* constraints_opt = nullptr;
    std::string algorithm;
    CLI::Option* algorithm_opt = nullptr;
    std::string input;
};

void slice_constraints(const Common& o, const SliceOptions& s, std::ostream& os) {
    const std::size_t n = require_size(o);
    if (n > slicer::kSubsetCountLimit) {
        throw SizeLimitError("slice: n = " + std::to_string(n) + " exceeds limit " +
                             std::to_string(slicer::kSubsetCountLimit));
    }
    const slicer::ConstraintSet set = slicer::parse_constraints(n, s.constraints);
    const std::uint64_t count = slicer::feasible_count(set);
    const bool contradictory = slicer::is_contradictory(set);
    const bool isolates = slicer::isolates_sorted(set);
    if (o.format == "csv") {
        os << "n,constraints,feasible_count,contradictory,isolates_sorted\n";
        os << n << ",\"" << slicer::format_constraints(set) << "\"," << count << ','
           << (contradictory ? "true" : "false") << ',' << (isolates ? "true" : "false") << "\n";
        return;
    }
    ordered_json j;
    j["n"] = n;
    j["constraints"] = slicer::format_constraints(set);
    j["feasible_count"] = count;
    j["contradictory"] = contradictory;
    j["isolates_sorted"] = isolates;
    os << j.dump() << "\n";
}

void slice_instrument(const Common& o, const SliceOptions& s, std::ostream& os) {
    const slicer::Algorithm algorithm = slicer::parse_algorithm(s.algorithm);
    if (s.input.empty()) {
        throw UsageError("--instrument requires --input");
    }
    Permutation input = Permutation::identity(1);
    try {
        input = parse_start(s.input, o.size());
    } catch (const InvalidPermutationError& e) {
        throw UsageError(e.what());
    }
    const int prec = resolve_precision(o);
    const slicer::InstrumentedRun run = slicer::instrument(algorithm, input);
    const slicer::ReductionReport report = slicer::reduction_report(run);
    const bool isolates = slicer::isolates_sorted(slicer::relabel_by_rank(run.constraints, input));

    if (o.format == "csv") {
        os << "step,lo,hi,feasible_before,feasible_after,bits\n";
        for (std::size_t k = 0; k < run.trace.size(); ++k) {
            const auto& st = run.trace[k];
            os << k + 1 << ',' << st.constraint.lo << ',' << st.constraint.hi << ',' << st.feasible_before << ','
               << st.feasible_after << ',' << format_real(st.bits, prec) << "\n";
        }
        os << "\ncomparisons,total_bits,max_bits,halving_fraction,final_count,isolates_sorted\n";
        os << report.comparisons << ',' << format_real(report.total_bits, prec) << ','
           << format_real(report.max_bits, prec) << ',' << format_real(report.halving_fraction, prec) << ','
           << report.final_count << ',' << (isolates ? "true" : "false") << "\n";
        return;
    }
    ordered_json j;
    j["algorithm"] = std::string(slicer::algorithm_name(algorithm));
    j["n"] = input.size();
    j["input"] = ranks_of(input);
    j["trace"] = ordered_json::array();
    for (std::size_t k = 0; k < run.trace.size(); ++k) {
        const auto& st = run.trace[k];
        j["trace"].push_back({{"step", k + 1},
                              {"lo", st.constraint.lo},
                              {"hi", st.constraint.hi},
                              {"feasible_before", st.feasible_before},
                              {"feasible_after", st.feasible_after},
                              {"bits", rounded(st.bits, prec)}});
    }
    j["summary"] = {{"comparisons", report.comparisons},
                    {"total_bits", rounded(report.total_bits, prec)},
                    {"max_bits", rounded(report.max_bits, prec)},
                    {"halving_fraction", rounded(report.halving_fraction, prec)},
                    {"final_count", report.final_count},
                    {"isolates_sorted", isolates}};
    os << j.dump() << "\n";
}

// ---------------------------------------------------------------------------
// report

void report_worked_example(const Common& o, std::ostream& os) {
    const int prec = resolve_precision(o);
    const Permutation start = Permutation::reversed(3);
    const StateVector x0 = vertex_of(start);
    const auto events = crossing_events(x0);
    const SortingEstimate est = estimate_sorting(start, o.epsilon, o.c);
    const std::size_t bound = dtree::info_lower_bound(3);
    const std::size_t height = dtree::build_optimal(3).stats.height;
    const double t1 = events.front().time;
    const double claimed_total = 1.5 * std::log(2.0);
    const double claimed_estimate = claimed_total / (1.0 / 3.0);

    const std::string note_t2 = "NOTED-DEVIATION: the global flow from (3,2,1) meets all three faces at t = ln 2 = " +
                                format_real(t1, prec) + "; sequential intervals of ln 2 would end at 3 ln 2 = " +
                                format_real(3.0 * std::log(2.0), prec) + ", not (3/2) ln 2 = " +
                                format_real(claimed_total, prec);
    const std::string note_t = "NOTED-DEVIATION: t/dt with t = (3/2) ln 2 and dt = 1/3 is " +
                               format_real(claimed_estimate, prec) +
                               " (natural log), not 3; the value 3 is the information bound ceil(log2 3!)";

    if (o.format == "text") {
        os << "worked example: n = 3, start = " << to_string(start) << "\n";
        os << "d0 = " << format_real(est.d0, prec) << "\n";
        os << "t1 = " << format_real(t1, prec) << "\n";
        os << "crossings = " << events.size() << "\n";
        for (const auto& e : events) {
            os << "event (" << e.i << "," << e.j << ") t = " << format_real(e.time, prec)
               << " value = " << format_real(e.meeting_value, prec) << "\n";
        }
        os << "t_eps = " << format_real(est.continuous_time, prec) << "\n";
        os << "estimate = " << format_real(est.discrete_estimate, prec) << " (ceil "
           << format_real(std::ceil(est.discrete_estimate), prec) << ")\n";
        os << "lemma_lb = " << format_real(est.lemma_lower_bound, prec) << "\n";
        os << "info_bound = " << bound << "\n";
        os << "optimal_height = " << height << "\n";
        os << note_t2 << "\n";
        os << note_t << "\n";
        return;
    }
    if (o.format == "csv") {
        os << "key,value\n";
        os << "d0," << format_real(est.d0, prec) << "\n";
        os << "t1," << format_real(t1, prec) << "\n";
        os << "crossings," << events.size() << "\n";
        os << "t_eps," << format_real(est.continuous_time, prec) << "\n";
        os << "estimate," << format_real(est.discrete_estimate, prec) << "\n";
        os << "lemma_lb," << format_real(est.lemma_lower_bound, prec) << "\n";
        os << "info_bound," << bound << "\n";
        os << "optimal_height," << height << "\n";
        return;
    }
    ordered_json j;
    j["n"] = 3;
    j["start"] = ranks_of(start);
    j["d0"] = rounded(est.d0, prec);
    j["t1"] = rounded(t1, prec);
    j["crossings"] = events.size();
    j["t_eps"] = rounded(est.continuous_time, prec);
    j["estimate"] = rounded(est.discrete_estimate, prec);
    j["lemma_lb"] = rounded(est.lemma_lower_bound, prec);
    j["info_bound"] = bound;
    j["optimal_height"] = height;
    j["notes"] = {note_t2, note_t};
    os << j.dump() << "\n";
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
    std::uint64_t n_min = 2;
    std::uint64_t n_max = 100;
    bool log_spaced = false;
};

void bench_bounds(const Common& o, const BenchOptions& b, std::ostream& os) {
    if (b.n_min < 2 || b.n_min > b.n_max || b.n_max > kBenchMax) {
        throw UsageError("bench requires 2 <= n-min <= n-max <= 1000000");
    }
    const int prec = resolve_precision(o);
    std::vector<std::uint64_t> sizes;
    if (b.log_spaced) {
        sizes.push_back(b.n_min);
        for (std::uint64_t p = 10; p < b.n_max; p *= 10) {
            if (p > b.n_min) {
                sizes.push_back(p);
            }
        }
        if (b.n_max != b.n_min) {
            sizes.push_back(b.n_max);
        }
    } else {
        for (std::uint64_t n = b.n_min; n <= b.n_max; ++n) {
            sizes.push_back(n);
        }
    }

    ordered_json rows = ordered_json::array();
    if (o.format == "csv") {
        os << "n,d0,t,n_t,asymptote,ratio\n";
    }
    for (std::uint64_t n : sizes) {
        const std::uint64_t d0 = reverse_disorder(n);
        const double t = time_to_epsilon(static_cast<double>(d0), o.epsilon);
        const double nd = static_cast<double>(n);
        const double nt = nd * t;
        const double asymptote = 1.5 * nd * std::log(nd);
        const double ratio = nt / asymptote;
        if (o.format == "csv") {
            os << n << ',' << d0 << ',' << format_real(t, prec) << ',' << format_real(nt, prec) << ','
               << format_real(asymptote, prec) << ',' << format_real(ratio, prec) << "\n";
        } else {
            rows.push_back({{"n", n},
                            {"d0", d0},
                            {"t", rounded(t, prec)},
                            {"n_t", rounded(nt, prec)},
                            {"asymptote", rounded(asymptote, prec)},
                            {"ratio", rounded(ratio, prec)}});
        }
    }
    if (o.format != "csv") {
        ordered_json j;
        j["epsilon"] = rounded(o.epsilon, prec);
        j["rows"] = std::move(rows);
        os << j.dump() << "\n";
    }
}

int emit(const std::string& path, const std::string& text, std::ostream& out, std::ostream& err) {
    if (path.empty()) {
        out << text;
        return kExitOk;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << text)) {
        err << "error: cannot write " << path << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace

std::string format_real(double value, int precision) {
    if (value == 0.0) {
        value = 0.0;  // folds -0
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, value);
    std::string s(buf);
    if (s == "-0") {
        s = "0";
    }
    return s;
}

Permutation lcg_shuffle(std::size_t n, std::uint64_t seed) {
    std::vector<int> ranks(n);
    for (std::size_t k = 0; k < n; ++k) {
        ranks[k] = static_cast<int>(k + 1);
    }
    std::uint64_t state = seed;
    for (std::size_t i = n; i-- > 1;) {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        const std::uint64_t draw = state >> 33;
        std::swap(ranks[i], ranks[draw % (i + 1)]);
    }
    return Permutation(std::move(ranks));
}

Permutation parse_start(std::string_view spec, std::optional<std::size_t> n) {
    auto need_n = [&]() -> std::size_t {
        if (!n || *n == 0) {
            throw InvalidSizeError("start \"" + std::string(spec) + "\" needs a positive --n");
        }
        return *n;
    };
    if (spec == "reverse") {
        return Permutation::reversed(need_n());
    }
    if (spec == "sorted") {
        return Permutation::identity(need_n());
    }
    if (spec.starts_with("random:")) {
        const std::string_view digits = spec.substr(7);
        std::uint64_t seed = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
        if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
            throw InvalidPermutationError("bad seed in \"" + std::string(spec) + "\"");
        }
        return lcg_shuffle(need_n(), seed);
    }
    std::vector<int> ranks;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const std::size_t comma = std::min(spec.find(',', pos), spec.size());
        std::string_view token = spec.substr(pos, comma - pos);
        while (!token.empty() && token.front() == ' ') {
            token.remove_prefix(1);
        }
        while (!token.empty() && token.back() == ' ') {
            token.remove_suffix(1);
        }
        int value = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
        if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
            throw InvalidPermutationError("bad start spec \"" + std::string(spec) + "\"");
        }
        ranks.push_back(value);
        pos = comma + 1;
    }
    Permutation p(std::move(ranks));
    if (n && *n != p.size()) {
        throw InvalidPermutationError("start list has " + std::to_string(p.size()) + " entries but --n is " +
                                      std::to_string(*n));
    }
    return p;
}

double parse_time(std::string_view text) {
    auto number = [&](std::string_view s, double fallback) {
        if (s.empty()) {
            return fallback;
        }
        const std::string copy(s);
        char* end = nullptr;
        const double v = std::strtod(copy.c_str(), &end);
        if (end != copy.c_str() + copy.size()) {
            throw ParseError("bad time \"" + std::string(text) + "\"");
        }
        return v;
    };
    const std::size_t ln = text.find("ln");
    if (ln == std::string_view::npos) {
        if (text.empty()) {
            throw ParseError("empty time");
        }
        return number(text, 0.0);
    }
    const double arg = number(text.substr(ln + 2), 2.0);
    if (!(arg > 0.0)) {
        throw ParseError("logarithm argument must be positive in \"" + std::string(text) + "\"");
    }
    return number(text.substr(0, ln), 1.0) * std::log(arg);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sorting as gradient flow on the permutohedron", "permflow"};
    app.require_subcommand(1);

    auto* flow = app.add_subcommand("flow", "closed-form and projected gradient flow");
    flow->require_subcommand(1);
    auto* events = flow->add_subcommand("events", "crossing events and operation-count estimates");
    Common events_opts;
    add_common(events, events_opts, true);
    auto* trace = flow->add_subcommand("trace", "sampled trajectory with disorder");
    Common trace_opts;
    TraceOptions trace_extra;
    add_common(trace, trace_opts, true);
    trace->add_option("--samples", trace_extra.samples, "number of samples (>= 2)");
    trace->add_option("--t-end", trace_extra.t_end, "final time, e.g. 5, 2ln2");
    trace->add_flag("--projected", trace_extra.projected, "integrate the projected flow numerically");
    trace->add_option("--step", trace_extra.step, "maximum integration step for --projected");

    auto* dt = app.add_subcommand("dtree", "optimal comparison decision trees");
    Common dtree_opts;
    DtreeOptions dtree_extra;
    add_common(dt, dtree_opts, false);
    dt->add_flag("--allow-slow", dtree_extra.allow_slow, "permit n = 5");
    dt->add_option("--emit-tree", dtree_extra.emit_tree, "write the tree as JSON to this path");

    auto* slice = app.add_subcommand("slice", "comparison constraints on the permutohedron");
    Common slice_opts;
    SliceOptions slice_extra;
    add_common(slice, slice_opts, false);
    slice_extra.constraints_opt = slice->add_option("--constraints", slice_extra.constraints, "e.g. \"1<2,2<3\"");
    slice_extra.algorithm_opt =
        slice->add_option("--instrument", slice_extra.algorithm, "insertion | merge | quick | heap");
    slice->add_option("--input", slice_extra.input, "input permutation, e.g. 4,3,2,1");
    slice_extra.constraints_opt->excludes(slice_extra.algorithm_opt);

    auto* report = app.add_subcommand("report", "the n = 3 worked example");
    Common report_opts;
    add_common(report, report_opts, false, "text");

    auto* bench = app.add_subcommand("bench", "growth of the continuous-time bound with n");
    Common bench_opts;
    BenchOptions bench_extra;
    add_common(bench, bench_opts, false);
    bench->add_option("--n-min", bench_extra.n_min, "smallest n (>= 2)");
    bench->add_option("--n-max", bench_extra.n_max, "largest n (<= 1000000)");
    bench->add_option("--epsilon", bench_opts.epsilon, "sortedness threshold")->check(CLI::PositiveNumber);
    bench->add_flag("--log-spaced", bench_extra.log_spaced, "only n-min, powers of ten, and n-max");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::ostringstream buffer;
    const Common* selected = nullptr;
    try {
        if (events->parsed()) {
            selected = &events_opts;
            flow_events(events_opts, buffer);
        } else if (trace->parsed()) {
            selected = &trace_opts;
            flow_trace(trace_opts, trace_extra, buffer);
        } else if (dt->parsed()) {
            selected = &dtree_opts;
            dtree_cmd(dtree_opts, dtree_extra, buffer);
        } else if (slice->parsed()) {
            selected = &slice_opts;
            if (slice_extra.algorithm_opt->count() > 0) {
                slice_instrument(slice_opts, slice_extra, buffer);
            } else if (slice_extra.constraints_opt->count() > 0) {
                slice_constraints(slice_opts, slice_extra, buffer);
            } else {
                throw UsageError("slice needs --constraints or --instrument");
            }
        } else if (report->parsed()) {
            selected = &report_opts;
            report_worked_example(report_opts, buffer);
        } else if (bench->parsed()) {
            selected = &bench_opts;
            bench_bounds(bench_opts, bench_extra, buffer);
        }
    } catch (const SizeLimitError& e) {
        err << "error: " << e.what() << "\n";
        return kExitSizeLimit;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return emit(selected ? selected->output : std::string(), buffer.str(), out, err);
}

}  // namespace permflow::cli
