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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "permflow/permutation.hpp"

namespace permflow::slicer {

/// x_lo < x_hi, 1-based positions.
struct Constraint {
    std::size_t lo = 0;
    std::size_t hi = 0;

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Comparison outcomes in the order they were made. Duplicates are dropped on
/// insertion; the set may be contradictory.
class ConstraintSet {
  public:
    explicit ConstraintSet(std::size_t n);
    ConstraintSet(std::size_t n, const std::vector<Constraint>& constraints);

    /// Returns false (and does nothing) when the constraint is already
    /// present. Throws DomainError for lo == hi or indices outside 1..n.
    bool add(Constraint c);

    std::size_t n() const { return n_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    std::size_t size() const { return constraints_.size(); }

    /// Whether the rank assignment p satisfies p.rank(lo) < p.rank(hi) for
    /// every constraint.
    bool satisfied_by(const Permutation& p) const;

  private:
    std::size_t n_;
    std::vector<Constraint> constraints_;
};

/// Grammar: pair ("," pair)*, pair = int "<" int. Empty text is the empty set.
ConstraintSet parse_constraints(std::size_t n, std::string_view text);
std::string format_constraints(const ConstraintSet& s);

/// 1<2, 2<3, ..., (n-1)<n.
ConstraintSet full_chain(std::size_t n);

inline constexpr std::size_t kBruteCountLimit = 10;
inline constexpr std::size_t kSubsetCountLimit = 18;

/// Enumerates all n! rank assignments. n <= 10.
std::uint64_t feasible_count_brute(const ConstraintSet& s);

/// Linear extensions by dynamic programming over downward-closed subsets.
/// n <= 18.
std::uint64_t feasible_count_subsets(const ConstraintSet& s);

/// Number of permutations consistent with every constraint.
std::uint64_t feasible_count(const ConstraintSet& s);

/// True iff the constraint digraph has a directed cycle.
bool is_contradictory(const ConstraintSet& s);

/// True iff exactly one permutation is feasible and it is the identity.
bool isolates_sorted(const ConstraintSet& s);

/// Renames every position of `input` to the rank it holds, so constraints
/// recorded on input positions become constraints on the sorted vertex.
ConstraintSet relabel_by_rank(const ConstraintSet& s, const Permutation& input);

enum class Algorithm { insertion, merge, quick, heap };

/// Throws ParseError for names other than insertion|merge|quick|heap.
Algorithm parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm a);

struct TraceStep {
    Constraint constraint;
    std::uint64_t feasible_before = 0;
    std::uint64_t feasible_after = 0;
    double bits = 0.0;  // log2(before / after)
};

struct InstrumentedRun {
    Algorithm algorithm = Algorithm::merge;
    Permutation input;
    std::vector<TraceStep> trace;
    ConstraintSet constraints;
    std::vector<int> output;  // input values in the order the sort produced
};

inline constexpr std::size_t kInstrumentLimit = 10;

/// Runs the sort on `input`, recording each comparison as a constraint on
/// input positions oriented by its outcome, with feasible counts before and
/// after. Quicksort pivots on the first element, mergesort splits top-down
/// with a left half of floor(n/2), heapsort sifts down a binary max-heap.
InstrumentedRun instrument(Algorithm algorithm, const Permutation& input);

struct ReductionReport {
    std::size_t comparisons = 0;
    double total_bits = 0.0;
    double max_bits = 0.0;
    double halving_fraction = 0.0;  // share of comparisons with bits >= 1 - 1e-9
    std::uint64_t final_count = 0;
};

ReductionReport reduction_report(const InstrumentedRun& run);

}  // namespace permflow::slicer
