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
#include <numeric>
#include <random>
#include <vector>

#include "permflow/flow.hpp"
#include "permflow/projected_flow.hpp"

using namespace permflow;

namespace {

using Blocks = std::vector<std::vector<std::size_t>>;

StateVector state(std::vector<double> c) { return StateVector(std::move(c)); }

// Random point with some coordinates forced into ties.
StateVector tied_state(std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> level(0, static_cast<int>(n / 2));
    std::vector<double> c(n);
    for (double& v : c) {
        v = static_cast<double>(level(rng));
    }
    return StateVector(std::move(c));
}

std::vector<double> tangent_velocity(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    std::vector<double> g(n);
    for (double& v : g) {
        v = dist(rng);
    }
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(n);
    for (double& v : g) {
        v -= mean;
    }
    return g;
}

}  // namespace

TEST(projected_flow, active_ties_examples) {
    EXPECT_EQ(active_ties(state({2, 2, 2}), 1e-9).blocks, (Blocks{{1, 2, 3}}));
    EXPECT_EQ(active_ties(state({1, 2, 3}), 1e-9).blocks, (Blocks{{1}, {2}, {3}}));
    EXPECT_EQ(active_ties(state({2, 2, 3}), 1e-9).blocks, (Blocks{{1, 2}, {3}}));
    EXPECT_EQ(active_ties(state({3, 1, 3, 1}), 1e-9).blocks, (Blocks{{2, 4}, {1, 3}}));
    EXPECT_EQ(active_ties(state({2, 2, 2}), 1e-9).active_count(), 1u);
    EXPECT_THROW(active_ties(state({1, 2}), 0.0), DomainError);
}

TEST(projected_flow, tie_blocks_partition_indices_within_tolerance) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 1e-10);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + trial % 7;
        const StateVector base = tied_state(n, rng);
        std::vector<double> c(base.coords().begin(), base.coords().end());
        for (double& v : c) {
            v += noise(rng);
        }
        const StateVector x(c);
        const double tol = 1e-9;
        const TieBlocks ties = active_ties(x, tol);
        std::vector<int> seen(n + 1, 0);
        double previous_max = -1e300;
        for (const auto& block : ties.blocks) {
            double lo = 1e300;
            double hi = -1e300;
            for (std::size_t idx : block) {
                ++seen[idx];
                lo = std::min(lo, x.coord(idx));
                hi = std::max(hi, x.coord(idx));
            }
            ASSERT_LE(hi - lo, tol);
            ASSERT_GT(lo, previous_max);
            previous_max = hi;
        }
        for (std::size_t i = 1; i <= n; ++i) {
            ASSERT_EQ(seen[i], 1);
        }
    }
}

TEST(projected_flow, project_velocity_examples) {
    const std::vector<double> g{-0.3, 0.1, 0.2};
    const StateVector interior = state({1.2, 2.1, 2.7});
    EXPECT_EQ(project_velocity(interior, g, active_ties(interior, 1e-9)), g);

    const StateVector center = state({2, 2, 2});
    const std::vector<double> spread{-1, 0, 1};
    EXPECT_EQ(project_velocity(center, spread, active_ties(center, 1e-9)), spread);

    const StateVector pair = state({2, 2, 3});
    const std::vector<double> violating{0.5, -0.5, 0};
    EXPECT_EQ(project_velocity(pair, violating, active_ties(pair, 1e-9)), (std::vector<double>{0, 0, 0}));

    // Pools only the violating prefix, keeps the rest.
    const std::vector<double> partial{1.0, -1.0, 0.5, -0.5};
    const StateVector flat = state({2.5, 2.5, 2.5, 2.5});
    EXPECT_EQ(project_velocity(flat, partial, active_ties(flat, 1e-9)), (std::vector<double>{0, 0, 0, 0}));
    const std::vector<double> tail{-2.0, 1.0, 0.5, 0.5};
    EXPECT_EQ(project_velocity(flat, tail, active_ties(flat, 1e-9)), (std::vector<double>{-2.0, 2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0}));
}

TEST(projected_flow, project_velocity_errors) {
    const StateVector x = state({2, 2, 2});
    const std::vector<double> short_g{1, -1};
    EXPECT_THROW(project_velocity(x, short_g, active_ties(x, 1e-9)), DomainError);
    const std::vector<double> off_plane{1, 1, 1};
    EXPECT_THROW(project_velocity(x, off_plane, active_ties(x, 1e-9)), DomainError);
}

// Checks optimality of the projection through its KKT conditions: the
// result is monotone inside each block, the residual r = g - Pg sums to zero
// over each block and every block suffix of r sums to at most zero (r lies in
// the polar cone of the nondecreasing sequences).
TEST(projected_flow, projection_properties) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + trial % 8;
        const StateVector x = tied_state(n, rng);
        const std::vector<double> g = tangent_velocity(n, rng);
        const TieBlocks ties = active_ties(x, 1e-9);
        const std::vector<double> p = project_velocity(x, g, ties);

        ASSERT_EQ(project_velocity(x, p, ties), p);
        ASSERT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), std::accumulate(g.begin(), g.end(), 0.0), 1e-12);

        double inner = 0.0;
        double norm2 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            inner += p[k] * g[k];
            norm2 += p[k] * p[k];
        }
        ASSERT_GE(inner, norm2 - 1e-12);

        for (const auto& block : ties.blocks) {
            double suffix = 0.0;
            for (std::size_t m = block.size(); m-- > 0;) {
                const std::size_t idx = block[m] - 1;
                suffix += g[idx] - p[idx];
                if (m > 0) {
                    ASSERT_LE(suffix, 1e-12);
                    ASSERT_LE(p[block[m - 1] - 1], p[idx]);
                }
            }
            ASSERT_NEAR(suffix, 0.0, 1e-12);
            if (block.size() == 1) {
                ASSERT_EQ(p[block[0] - 1], g[block[0] - 1]);
            }
        }
    }
}

TEST(projected_flow, integrate_examples) {
    const ProjectedTrace rev = integrate_projected(state({3, 2, 1}), 10.0, 1e-3, 3e-9);
    const StateVector& last = rev.samples.back().state;
    EXPECT_EQ(rev.samples.back().t, 10.0);
    for (std::size_t k = 1; k <= 3; ++k) {
        EXPECT_NEAR(last.coord(k), static_cast<double>(k), 1e-3);
    }

    const ProjectedTrace fixed = integrate_projected(sorted_vertex(3), 1.0, 1e-3, 3e-9);
    for (const auto& s : fixed.samples) {
        EXPECT_EQ(s.potential, 0.0);
    }

    const ProjectedTrace center = integrate_projected(state({2, 2, 2}), 5.0, 1e-3, 3e-9);
    const double v0 = center.samples.front().potential;
    EXPECT_EQ(center.samples.front().active_block_count, 1u);
    for (std::size_t k = 1; k < center.samples.size(); ++k) {
        const auto& s = center.samples[k];
        ASSERT_LE(s.potential, center.samples[k - 1].potential);
        ASSERT_LE(s.potential, v0 * std::exp(-2.0 * s.t) * (1.0 + 1e-6));
    }
    EXPECT_NEAR(center.samples.back().state.coord(1), 1.0 + std::exp(-5.0), 1e-2);
}

TEST(projected_flow, integrate_rejects_bad_arguments) {
    EXPECT_THROW(integrate_projected(state({3, 2, 1}), 1.0, 0.02, 1e-9), StepSizeError);
    EXPECT_THROW(integrate_projected(state({3, 2, 1}), 1.0, 0.0, 1e-9), DomainError);
    EXPECT_THROW(integrate_projected(state({3, 2, 1}), 0.0, 1e-3, 1e-9), DomainError);
    EXPECT_THROW(integrate_projected(state({3, 2, 2}), 1.0, 1e-3, 1e-9), DomainError);
}

TEST(projected_flow, decay_hyperplane_and_agreement_on_random_vertices) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(trial) % 5;
        std::vector<int> ranks(n);
        std::iota(ranks.begin(), ranks.end(), 1);
        std::shuffle(ranks.begin(), ranks.end(), rng);
        const StateVector x0 = vertex_of(Permutation(ranks));
        const double step = 1e-3;
        const ProjectedTrace trace = integrate_projected(x0, 6.0, step, default_tie_tolerance(n));
        const double v0 = trace.samples.front().potential;
        const double sum0 = x0.sum();
        for (std::size_t k = 0; k < trace.samples.size(); ++k) {
            const auto& s = trace.samples[k];
            ASSERT_LE(s.potential, v0 * std::exp(-2.0 * s.t) * (1.0 + 1e-6));
            ASSERT_NEAR(s.state.sum(), sum0, 1e-6);
            if (k > 0) {
                ASSERT_LE(s.potential, trace.samples[k - 1].potential);
            }
            if (s.active_block_count == 0) {
                const StateVector exact = flow_state(x0, s.t);
                for (std::size_t i = 1; i <= n; ++i) {
                    ASSERT_NEAR(s.state.coord(i), exact.coord(i), 10.0 * step);
                }
            }
        }
    }
}

TEST(projected_flow, reaches_epsilon_after_time_to_epsilon_plus_margin) {
    for (std::size_t n : {3u, 5u, 7u}) {
        const StateVector x0 = vertex_of(Permutation::reversed(n));
        for (double eps : {0.5, 1.0}) {
            const double t_end = time_to_epsilon(disorder_squared(x0).d0, eps) + 1.0;
            const ProjectedTrace trace = integrate_projected(x0, t_end, 1e-3, default_tie_tolerance(n));
            EXPECT_LE(std::sqrt(2.0 * trace.samples.back().potential), eps) << n;
        }
    }
}
