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
#include <optional>
#include <span>
#include <vector>

#include "permflow/permutation.hpp"

namespace permflow {

// Closed-form gradient flow of V(x) = |x - v_s|^2 / 2 toward the sorted
// vertex v_s = (1, ..., n):
//
//   x_i(t) = i + (x_i(0) - i) e^{-t}
//
// Two coordinates i < j meet when (j - i) = (a_i - a_j) e^{-t} with
// a_k = x_k(0) - k, so every pair crosses at most once.

struct FlowSample {
    double t = 0.0;
    StateVector state;
    double disorder = 0.0;
};

struct FlowTrace {
    StateVector start;
    std::vector<FlowSample> samples;
};

struct CrossingEvent {
    std::size_t i = 0;  // 1-based, i < j
    std::size_t j = 0;
    double time = 0.0;
    double meeting_value = 0.0;
};

struct SortingEstimate {
    std::size_t n = 0;
    double d0 = 0.0;
    double continuous_time = 0.0;
    double epsilon = 1.0;
    double discrete_estimate = 0.0;
    double lemma_lower_bound = 0.0;
    std::uint64_t crossing_count = 0;
};

/// Throws DomainError for t < 0.
StateVector flow_state(const StateVector& x0, double t);

/// D0 e^{-2t} with D0 = |x0 - v_s|^2.
double disorder_at(const StateVector& x0, double t);

/// max(0, ln(d0 / eps^2) / 2); the first time at which the disorder is at
/// most eps^2.
double time_to_epsilon(double d0, double epsilon);

/// Crossing time of coordinates i and j (1-based, any order), or nullopt when
/// they never meet at a positive time.
std::optional<double> crossing_time(const StateVector& x0, std::size_t i, std::size_t j);

/// All crossings of the flow from x0, ordered by time then by pair. Events
/// that coincide in exact arithmetic (integral starts) compare equal in time
/// and fall back to lexicographic pair order.
std::vector<CrossingEvent> crossing_events(const StateVector& x0);

/// t / dt. Throws DomainError for dt <= 0 or t < 0.
double discrete_estimate(std::size_t n, double t, double dt);

/// (n / c) * time_to_epsilon(d0, eps).
double lemma_lower_bound(std::size_t n, double d0, double epsilon, double c);

/// Samples the closed-form flow at the given strictly increasing times.
FlowTrace sample_flow(const StateVector& x0, std::span<const double> times);

/// Everything above for a vertex start, with dt = c / n.
SortingEstimate estimate_sorting(const Permutation& start, double epsilon = 1.0, double c = 1.0);

}  // namespace permflow
