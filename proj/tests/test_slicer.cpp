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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "permflow/dtree.hpp"
#include "permflow/slicer.hpp"

using namespace permflow;
using namespace permflow::slicer;

namespace {

constexpr Algorithm kAlgorithms[] = {Algorithm::insertion, Algorithm::merge, Algorithm::quick, Algorithm::heap};

ConstraintSet random_constraints(std::size_t n, std::size_t count, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> index(1, n);
    ConstraintSet s(n);
    while (s.size() < count) {
        const std::size_t a = index(rng);
        const std::size_t b = index(rng);
        if (a != b) {
            s.add({a, b});
        }
    }
    return s;
}

}  // namespace

TEST(slicer, feasible_count_examples) {
    for (auto count : {feasible_count_brute, feasible_count_subsets, feasible_count}) {
        EXPECT_EQ(count(ConstraintSet(3)), 6u);
        EXPECT_EQ(count(full_chain(3)), 1u);
        EXPECT_EQ(count(ConstraintSet(3, {{1, 2}})), 3u);
        EXPECT_EQ(count(ConstraintSet(3, {{1, 2}, {2, 1}})), 0u);
        EXPECT_EQ(count(ConstraintSet(1)), 1u);
    }
    EXPECT_EQ(feasible_count(ConstraintSet(18)), 6402373705728000ULL);
}

TEST(slicer, feasible_count_size_limits) {
    EXPECT_THROW(feasible_count_brute(ConstraintSet(11)), SizeLimitError);
    EXPECT_THROW(feasible_count_subsets(ConstraintSet(19)), SizeLimitError);
    EXPECT_THROW(feasible_count(ConstraintSet(19)), SizeLimitError);
}

TEST(slicer, brute_force_and_subset_counts_agree) {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial) % 8;
        const std::size_t max_pairs = n * (n - 1);
        const std::size_t count = max_pairs == 0 ? 0 : static_cast<std::size_t>(trial) % (std::min<std::size_t>(max_pairs, 12) + 1);
        const ConstraintSet s = random_constraints(n, count, rng);
        ASSERT_EQ(feasible_count_brute(s), feasible_count_subsets(s)) << format_constraints(s);
        ASSERT_EQ(is_contradictory(s), feasible_count(s) == 0) << format_constraints(s);
    }
}

TEST(slicer, constraint_validation) {
    ConstraintSet s(3);
    EXPECT_TRUE(s.add({1, 2}));
    EXPECT_FALSE(s.add({1, 2}));
    EXPECT_EQ(s.size(), 1u);
    EXPECT_THROW(s.add({2, 2}), DomainError);
    EXPECT_THROW(s.add({0, 2}), DomainError);
    EXPECT_THROW(s.add({1, 4}), DomainError);
    EXPECT_THROW(ConstraintSet(0), InvalidSizeError);
}

TEST(slicer, parse_and_format_constraints) {
    const ConstraintSet s = parse_constraints(3, "1<2,2<3");
    EXPECT_EQ(s.constraints(), (std::vector<Constraint>{{1, 2}, {2, 3}}));
    EXPECT_EQ(format_constraints(s), "1<2,2<3");
    EXPECT_EQ(parse_constraints(3, "").size(), 0u);
    EXPECT_EQ(parse_constraints(3, "  ").size(), 0u);
    EXPECT_EQ(format_constraints(parse_constraints(4, " 3 < 1 , 2<4,3<1")), "3<1,2<4");
    for (const char* bad : {"1<", "<2", "a<b", "1<1", "1<4", "1-2", "1<2,", "1<2<3"}) {
        EXPECT_THROW(parse_constraints(3, bad), ParseError) << bad;
    }
}

TEST(slicer, is_contradictory_examples) {
    EXPECT_TRUE(is_contradictory(ConstraintSet(2, {{1, 2}, {2, 1}})));
    EXPECT_FALSE(is_contradictory(full_chain(3)));
    EXPECT_TRUE(is_contradictory(ConstraintSet(3, {{1, 2}, {2, 3}, {3, 1}})));
    EXPECT_FALSE(is_contradictory(ConstraintSet(4)));
}

TEST(slicer, isolates_sorted_examples) {
    EXPECT_TRUE(isolates_sorted(full_chain(5)));
    EXPECT_FALSE(isolates_sorted(ConstraintSet(2)));
    EXPECT_FALSE(isolates_sorted(ConstraintSet(4)));
    EXPECT_TRUE(isolates_sorted(ConstraintSet(1)));
    // A total order other than the identity is isolated but is not sorted.
    EXPECT_FALSE(isolates_sorted(ConstraintSet(3, {{2, 1}, {1, 3}})));

    const InstrumentedRun run = instrument(Algorithm::merge, Permutation({3, 1, 2}));
    EXPECT_TRUE(isolates_sorted(relabel_by_rank(run.constraints, run.input)));
    EXPECT_FALSE(isolates_sorted(run.constraints));
    EXPECT_EQ(feasible_count(run.constraints), 1u);
    EXPECT_TRUE(run.constraints.satisfied_by(run.input));
}

TEST(slicer, chain_isolates_identity_for_all_small_n) {
    for (std::size_t n = 1; n <= 12; ++n) {
        EXPECT_EQ(feasible_count(full_chain(n)), 1u);
        EXPECT_TRUE(isolates_sorted(full_chain(n)));
    }
}

TEST(slicer, instrument_examples) {
    const InstrumentedRun two = instrument(Algorithm::merge, Permutation({2, 1}));
    ASSERT_EQ(two.trace.size(), 1u);
    EXPECT_EQ(two.trace[0].feasible_before, 2u);
    EXPECT_EQ(two.trace[0].feasible_after, 1u);
    EXPECT_EQ(two.trace[0].bits, 1.0);
    EXPECT_EQ(two.trace[0].constraint, (Constraint{2, 1}));
    EXPECT_EQ(two.output, (std::vector<int>{1, 2}));

    const InstrumentedRun three = instrument(Algorithm::merge, Permutation({3, 1, 2}));
    EXPECT_EQ(three.trace.back().feasible_after, 1u);
    EXPECT_NEAR(reduction_report(three).total_bits, std::log2(6.0), 1e-12);

    const InstrumentedRun quick7 = instrument(Algorithm::quick, Permutation::reversed(7));
    EXPECT_GE(quick7.trace.size(), dtree::info_lower_bound(7));
    EXPECT_EQ(dtree::info_lower_bound(7), 13u);
    EXPECT_EQ(quick7.trace.size(), 21u);
    EXPECT_EQ(quick7.trace.back().feasible_after, 1u);

    EXPECT_THROW(instrument(Algorithm::merge, Permutation::identity(11)), SizeLimitError);
    EXPECT_THROW(parse_algorithm("bubble"), ParseError);
    for (Algorithm a : kAlgorithms) {
        EXPECT_EQ(parse_algorithm(algorithm_name(a)), a);
    }
}

TEST(slicer, reduction_report_examples) {
    const ReductionReport two = reduction_report(instrument(Algorithm::merge, Permutation({2, 1})));
    EXPECT_EQ(two.comparisons, 1u);
    EXPECT_EQ(two.total_bits, 1.0);
    EXPECT_EQ(two.max_bits, 1.0);
    EXPECT_EQ(two.halving_fraction, 1.0);
    EXPECT_EQ(two.final_count, 1u);

    for (const Permutation& p : all_permutations(4)) {
        EXPECT_NEAR(reduction_report(instrument(Algorithm::merge, p)).total_bits, std::log2(24.0), 1e-12);
    }

    const ReductionReport quick6 = reduction_report(instrument(Algorithm::quick, Permutation::identity(6)));
    EXPECT_EQ(quick6.comparisons, 15u);
    EXPECT_EQ(quick6.final_count, 1u);

    const ReductionReport single = reduction_report(instrument(Algorithm::heap, Permutation::identity(1)));
    EXPECT_EQ(single.comparisons, 0u);
    EXPECT_EQ(single.final_count, 1u);
}

TEST(slicer, trace_invariants_for_every_algorithm_and_input) {
    for (Algorithm algorithm : kAlgorithms) {
        for (std::size_t n = 1; n <= 6; ++n) {
            const double total = log2_factorial(n);
            std::size_t worst = 0;
            for (const Permutation& p : all_permutations(n)) {
                const InstrumentedRun run = instrument(algorithm, p);
                ConstraintSet prefix(n);
                std::uint64_t previous = feasible_count(prefix);
                double bits = 0.0;
                for (const TraceStep& step : run.trace) {
                    ASSERT_EQ(step.feasible_before, previous);
                    ASSERT_LE(step.feasible_after, step.feasible_before);
                    ASSERT_GE(step.feasible_after, 1u);
                    // The two possible outcomes split the feasible set, so one
                    // of them conveys at most a single bit.
                    ConstraintSet other = prefix;
                    const bool fresh = other.add({step.constraint.hi, step.constraint.lo});
                    const std::uint64_t alternative = fresh ? feasible_count(other) : 0;
                    if (prefix.add(step.constraint)) {
                        ASSERT_EQ(step.feasible_after + alternative, step.feasible_before);
                    }
                    if (alternative > 0) {
                        const double alt_bits = std::log2(static_cast<double>(step.feasible_before) / alternative);
                        ASSERT_LE(std::min(step.bits, alt_bits), 1.0 + 1e-12);
                    }
                    bits += step.bits;
                    previous = step.feasible_after;
                }
                const ReductionReport report = reduction_report(run);
                ASSERT_EQ(report.final_count, 1u);
                ASSERT_NEAR(report.total_bits, total, 1e-9);
                ASSERT_NEAR(bits, total, 1e-9);
                ASSERT_TRUE(isolates_sorted(relabel_by_rank(run.constraints, p)));
                worst = std::max(worst, report.comparisons);
            }
            EXPECT_GE(worst, dtree::info_lower_bound(n)) << algorithm_name(algorithm) << " n=" << n;
        }
    }
}

TEST(slicer, mergesort_worst_case_matches_recurrence) {
    for (std::size_t n = 1; n <= 7; ++n) {
        std::size_t worst = 0;
        for (const Permutation& p : all_permutations(n)) {
            worst = std::max(worst, instrument(Algorithm::merge, p).trace.size());
        }
        EXPECT_EQ(worst, oracle::merge_worst_case(n)) << n;
    }
    EXPECT_EQ(oracle::merge_worst_case(7), 14u);
}

TEST(slicer, instrument_sorts_larger_inputs) {
    for (Algorithm a : kAlgorithms) {
        const InstrumentedRun run = instrument(a, Permutation({7, 2, 10, 4, 1, 9, 3, 8, 6, 5}));
        EXPECT_EQ(run.output, (std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}));
        EXPECT_EQ(reduction_report(run).final_count, 1u);
    }
}
