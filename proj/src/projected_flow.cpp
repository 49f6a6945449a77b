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

#include "permflow/projected_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace permflow {

std::size_t TieBlocks::active_count() const {
    return static_cast<std::size_t>(
        std::count_if(blocks.begin(), blocks.end(), [](const auto& b) { return b.size() > 1; }));
}

double default_tie_tolerance(std::size_t n) { return 1e-9 * static_cast<double>(n); }

TieBlocks active_ties(const StateVector& x, double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("active_ties: tolerance must be positive");
    }
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{1});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x.coord(a) < x.coord(b); });

    TieBlocks ties{{}, tol};
    double block_min = 0.0;
    for (std::size_t idx : order) {
        if (ties.blocks.empty() || x.coord(idx) - block_min > tol) {
            ties.blocks.emplace_back();
            block_min = x.coord(idx);
        }
        ties.blocks.back().push_back(idx);
    }
    for (auto& block : ties.blocks) {
        std::sort(block.begin(), block.end());
    }
    return ties;
}

std::vector<double> project_velocity(const StateVector& x, std::span<const double> g, const TieBlocks& ties) {
    if (g.size() != x.size()) {
        throw DomainError("project_velocity: velocity dimension does not match state");
    }
    double sum = 0.0;
    double scale = 1.0;
    for (double v : g) {
        sum += v;
        scale += std::abs(v);
    }
    if (std::abs(sum) > 1e-9 * scale) {
        throw DomainError("project_velocity: velocity is not tangent to the hyperplane");
    }

    std::vector<double> out(g.begin(), g.end());
    struct Pool {
        double total;
        std::size_t count;
        double mean() const { return total / static_cast<double>(count); }
    };
    for (const auto& block : ties.blocks) {
        if (block.size() < 2) {
            continue;
        }
        std::vector<Pool> pools;
        for (std::size_t idx : block) {
            pools.push_back({g[idx - 1], 1});
            while (pools.size() > 1 && pools[pools.size() - 2].mean() > pools.back().mean()) {
                Pool top = pools.back();
                pools.pop_back();
                pools.back().total += top.total;
                pools.back().count += top.count;
            }
        }
        std::size_t k = 0;
        for (const auto& pool : pools) {
            const double mean = pool.count == 1 ? pool.total : pool.mean();
            for (std::size_t c = 0; c < pool.count; ++c, ++k) {
                out[block[k] - 1] = mean;
            }
        }
    }
    return out;
}

ProjectedTrace integrate_projected(const StateVector& x0, double t_end, double step, double tol) {
    if (!(step > 0.0) || !(t_end > 0.0) || !(tol > 0.0)) {
        throw DomainError("integrate_projected: t_end, step and tolerance must be positive");
    }
    if (step > kMaxProjectedStep) {
        throw StepSizeError("integrate_projected: step must not exceed 1e-2");
    }
    if (!x0.in_hyperplane(1e-9 * static_cast<double>(x0.size()))) {
        throw DomainError("integrate_projected: start must lie in the hyperplane sum x = n(n+1)/2");
    }
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / step - 1e-9));
    const double h = t_end / static_cast<double>(steps);

    ProjectedTrace trace;
    trace.step = h;
    trace.samples.reserve(steps + 1);

    std::vector<double> x(x0.coords().begin(), x0.coords().end());
    std::vector<double> g(x.size());
    for (std::size_t k = 0;; ++k) {
        StateVector state(x);
        const TieBlocks ties = active_ties(state, tol);
        trace.samples.push_back({k == steps ? t_end : static_cast<double>(k) * h, state,
                                 disorder_squared(state).v0, ties.active_count()});
        if (k == steps) {
            break;
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            g[i] = static_cast<double>(i + 1) - x[i];
        }
        const std::vector<double> v = project_velocity(state, g, ties);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += h * v[i];
        }
    }
    return trace;
}

}  // namespace permflow
