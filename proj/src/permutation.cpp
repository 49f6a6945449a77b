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

#include "permflow/permutation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace permflow {

namespace {
__extension__ typedef unsigned __int128 u128;
}  // namespace

Permutation::Permutation(std::vector<int> ranks) : ranks_(std::move(ranks)) {
    const std::size_t n = ranks_.size();
    if (n == 0) {
        throw InvalidPermutationError("permutation must have at least one element");
    }
    std::vector<bool> seen(n + 1, false);
    for (int r : ranks_) {
        if (r < 1 || static_cast<std::size_t>(r) > n) {
            throw InvalidPermutationError("rank " + std::to_string(r) + " outside 1.." + std::to_string(n));
        }
        if (seen[r]) {
            throw InvalidPermutationError("duplicate rank " + std::to_string(r));
        }
        seen[r] = true;
    }
}

Permutation Permutation::identity(std::size_t n) {
    if (n == 0) {
        throw InvalidSizeError("permutation size must be positive");
    }
    std::vector<int> r(n);
    std::iota(r.begin(), r.end(), 1);
    return Permutation(std::move(r));
}

Permutation Permutation::reversed(std::size_t n) {
    if (n == 0) {
        throw InvalidSizeError("permutation size must be positive");
    }
    std::vector<int> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = static_cast<int>(n - i);
    }
    return Permutation(std::move(r));
}

bool Permutation::is_identity() const {
    for (std::size_t i = 0; i < ranks_.size(); ++i) {
        if (ranks_[i] != static_cast<int>(i + 1)) {
            return false;
        }
    }
    return true;
}

std::string to_string(const Permutation& p) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 1; i <= p.size(); ++i) {
        if (i > 1) {
            os << ',';
        }
        os << p.rank(i);
    }
    os << ')';
    return os.str();
}

bool StateVector::in_hyperplane(double tol) const {
    const double n = static_cast<double>(coords_.size());
    return std::abs(sum() - n * (n + 1.0) / 2.0) <= tol;
}

StateVector sorted_vertex(std::size_t n) {
    if (n == 0) {
        throw InvalidSizeError("sorted_vertex: n must be positive");
    }
    std::vector<double> c(n);
    std::iota(c.begin(), c.end(), 1.0);
    return StateVector(std::move(c));
}

StateVector vertex_of(const Permutation& p) {
    std::vector<double> c(p.ranks().begin(), p.ranks().end());
    return StateVector(std::move(c));
}

std::uint64_t inversions(const Permutation& p) {
    // Fenwick tree over ranks; counts earlier elements with a larger rank.
    const std::size_t n = p.size();
    std::vector<std::uint32_t> tree(n + 1, 0);
    std::uint64_t count = 0;
    for (std::size_t seen = 0; seen < n; ++seen) {
        const int r = p.ranks()[seen];
        std::uint64_t not_greater = 0;
        for (int k = r; k > 0; k -= k & -k) {
            not_greater += tree[k];
        }
        count += seen - not_greater;
        for (std::size_t k = static_cast<std::size_t>(r); k <= n; k += k & (~k + 1)) {
            ++tree[k];
        }
    }
    return count;
}

DisorderReport disorder_squared(const StateVector& x) {
    DisorderReport report;
    report.n = x.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double diff = x[i] - static_cast<double>(i + 1);
        report.d0 += diff * diff;
    }
    report.v0 = report.d0 / 2.0;
    return report;
}

std::uint64_t reverse_disorder(std::uint64_t n) {
    if (n == 0) {
        throw InvalidSizeError("reverse_disorder: n must be positive");
    }
    // One of n-1, n, n+1 is divisible by 3; divide it out first so the
    // product stays exact.
    u128 a = n - 1;
    u128 b = n;
    u128 c = static_cast<u128>(n) + 1;
    if (a % 3 == 0) {
        a /= 3;
    } else if (b % 3 == 0) {
        b /= 3;
    } else {
        c /= 3;
    }
    const u128 limit = std::numeric_limits<std::uint64_t>::max();
    const u128 ab = a * b;
    if (ab != 0 && c > limit / ab) {
        throw RangeError("reverse_disorder: n(n^2-1)/3 overflows 64 bits for n = " + std::to_string(n));
    }
    return static_cast<std::uint64_t>(ab * c);
}

double log2_factorial(std::size_t n) {
    double total = 0.0;
    for (std::size_t k = 2; k <= n; ++k) {
        total += std::log2(static_cast<double>(k));
    }
    return total;
}

std::vector<Permutation> all_permutations(std::size_t n) {
    std::vector<int> r(n);
    std::iota(r.begin(), r.end(), 1);
    std::vector<Permutation> out;
    do {
        out.emplace_back(r);
    } while (std::next_permutation(r.begin(), r.end()));
    return out;
}

}  // namespace permflow
