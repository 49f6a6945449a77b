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
#include <span>
#include <vector>

#include "permflow/permutation.hpp"

namespace permflow {

/// Groups of coordinates that are tied within a tolerance. Blocks are listed
/// in increasing coordinate value; each block's indices are 1-based and
/// ascending.
struct TieBlocks {
    std::vector<std::vector<std::size_t>> blocks;
    double tolerance = 0.0;

    std::size_t active_count() const;  // blocks with more than one index
};

struct ProjectedSample {
    double t = 0.0;
    StateVector state;
    double potential = 0.0;
    std::size_t active_block_count = 0;
};

struct ProjectedTrace {
    std::vector<ProjectedSample> samples;
    double step = 0.0;
};

inline constexpr double kMaxProjectedStep = 1e-2;

/// Sorts indices by value and starts a new block whenever a value exceeds the
/// current block's smallest value by more than `tol`.
TieBlocks active_ties(const StateVector& x, double tol);

/// Euclidean projection of `g` onto the cone where, inside every tie block,
/// components are nondecreasing in index (a lower target rank never moves
/// above a higher one). Violations are pooled to their average
/// (pool-adjacent-violators), never across blocks.
std::vector<double> project_velocity(const StateVector& x, std::span<const double> g, const TieBlocks& ties);

/// Explicit Euler integration of x' = P(v_s - x) from x0 to t_end using
/// ceil(t_end / step) equal steps of size <= step. Throws StepSizeError for
/// step > 1e-2.
ProjectedTrace integrate_projected(const StateVector& x0, double t_end, double step, double tol);

/// Tie tolerance used by default: 1e-9 * n.
double default_tie_tolerance(std::size_t n);

}  // namespace permflow
