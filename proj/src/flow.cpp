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

#include "permflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace permflow {

namespace {

void require_nonnegative_time(double t, const char* op) {
    if (!(t >= 0.0)) {
        throw DomainError(std::string(op) + ": time must be nonnegative");
    }
}

double offset(const StateVector& x, std::size_t position) {
    return x.coord(position) - static_cast<double>(position);
}

}  // namespace

StateVector flow_state(const StateVector& x0, double t) {
    require_nonnegative_time(t, "flow_state");
    const double decay = std::exp(-t);
    std::vector<double> c(x0.size());
    for (std::size_t k = 1; k <= x0.size(); ++k) {
        c[k - 1] = static_cast<double>(k) + offset(x0, k) * decay;
    }
    return StateVector(std::move(c));
}

double disorder_at(const StateVector& x0, double t) {
    require_nonnegative_time(t, "disorder_at");
    return disorder_squared(x0).d0 * std::exp(-2.0 * t);
}

double time_to_epsilon(double d0, double epsilon) {
    if (!(epsilon > 0.0)) {
        throw DomainError("time_to_epsilon: epsilon must be positive");
    }
    if (!(d0 >= 0.0)) {
        throw DomainError("time_to_epsilon: d0 must be nonnegative");
    }
    const double eps2 = epsilon * epsilon;
    if (d0 <= eps2) {
        return 0.0;
    }
    return 0.5 * std::log(d0 / eps2);
}

std::optional<double> crossing_time(const StateVector& x0, std::size_t i, std::size_t j) {
    if (i == j) {
        throw DomainError("crossing_time: i and j must differ");
    }
    if (i == 0 || j == 0 || i > x0.size() || j > x0.size()) {
        throw DomainError("crossing_time: index out of range");
    }
    if (i > j) {
        std::swap(i, j);
    }
    const double gap = offset(x0, i) - offset(x0, j);
    const double dist = static_cast<double>(j - i);
    // e^{-t} = dist / gap must lie in (0, 1).
    if (!(gap > dist)) {
        return std::nullopt;
    }
    return std::log(gap / dist);
}

std::vector<CrossingEvent> crossing_events(const StateVector& x0) {
    struct Pending {
        CrossingEvent event;
        double gap;
        double dist;
    };
    std::vector<Pending> pending;
    const std::size_t n = x0.size();
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = i + 1; j <= n; ++j) {
            const auto t = crossing_time(x0, i, j);
            if (!t) {
                continue;
            }
            const double gap = offset(x0, i) - offset(x0, j);
            const double dist = static_cast<double>(j - i);
            CrossingEvent e{i, j, *t, static_cast<double>(i) + offset(x0, i) * dist / gap};
            pending.push_back({e, gap, dist});
        }
    }
    // Earlier time <=> larger e^{-t} = dist/gap; compare by cross
    // multiplication so exactly simultaneous crossings tie.
    std::sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
        const double lhs = a.dist * b.gap;
        const double rhs = b.dist * a.gap;
        if (lhs != rhs) {
            return lhs > rhs;
        }
        if (a.event.i != b.event.i) {
            return a.event.i < b.event.i;
        }
        return a.event.j < b.event.j;
    });
    std::vector<CrossingEvent> events;
    events.reserve(pending.size());
    for (const auto& p : pending) {
        events.push_back(p.event);
    }
    return events;
}

double discrete_estimate(std::size_t n, double t, double dt) {
    if (n == 0) {
        throw DomainError("discrete_estimate: n must be positive");
    }
    if (!(dt > 0.0)) {
        throw DomainError("discrete_estimate: dt must be positive");
    }
    require_nonnegative_time(t, "discrete_estimate");
    return t / dt;
}

double lemma_lower_bound(std::size_t n, double d0, double epsilon, double c) {
    if (n == 0 || !(d0 > 0.0) || !(epsilon > 0.0) || !(c > 0.0)) {
        throw DomainError("lemma_lower_bound: all arguments must be positive");
    }
    return static_cast<double>(n) / c * time_to_epsilon(d0, epsilon);
}

FlowTrace sample_flow(const StateVector& x0, std::span<const double> times) {
    FlowTrace trace{x0, {}};
    trace.samples.reserve(times.size());
    const double d0 = disorder_squared(x0).d0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (k > 0 && !(times[k] > times[k - 1])) {
            throw DomainError("sample_flow: sample times must be strictly increasing");
        }
        trace.samples.push_back({times[k], flow_state(x0, times[k]), d0 * std::exp(-2.0 * times[k])});
    }
    return trace;
}

SortingEstimate estimate_sorting(const Permutation& start, double epsilon, double c) {
    if (!(c > 0.0)) {
        throw DomainError("estimate_sorting: c must be positive");
    }
    SortingEstimate est;
    est.n = start.size();
    est.epsilon = epsilon;
    est.d0 = disorder_squared(vertex_of(start)).d0;
    est.continuous_time = time_to_epsilon(est.d0, epsilon);
    est.discrete_estimate = discrete_estimate(est.n, est.continuous_time, c / static_cast<double>(est.n));
    est.lemma_lower_bound = est.d0 > 0.0 ? lemma_lower_bound(est.n, est.d0, epsilon, c) : 0.0;
    est.crossing_count = crossing_events(vertex_of(start)).size();
    return est;
}

}  // namespace permflow
