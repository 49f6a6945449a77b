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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "permflow/error.hpp"

namespace permflow {

/// An arrangement of the ranks 1..n. Position i (1-based) holds rank(i).
class Permutation {
  public:
    /// Throws InvalidPermutationError unless `ranks` contains each of 1..n
    /// exactly once, n >= 1.
    explicit Permutation(std::vector<int> ranks);

    static Permutation identity(std::size_t n);
    static Permutation reversed(std::size_t n);

    std::size_t size() const { return ranks_.size(); }
    /// 1-based access, matching the rank convention.
    int rank(std::size_t position) const { return ranks_[position - 1]; }
    std::span<const int> ranks() const { return ranks_; }

    bool is_identity() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

  private:
    std::vector<int> ranks_;
};

std::string to_string(const Permutation& p);

/// A point of R^n; coordinate i (1-based) is the continuous position of the
/// element that should end up at rank i.
class StateVector {
  public:
    explicit StateVector(std::vector<double> coords) : coords_(std::move(coords)) {}

    std::size_t size() const { return coords_.size(); }
    double operator[](std::size_t index) const { return coords_[index]; }
    double coord(std::size_t position) const { return coords_[position - 1]; }
    std::span<const double> coords() const { return coords_; }

    double sum() const { return std::accumulate(coords_.begin(), coords_.end(), 0.0); }

    /// Whether the coordinates sum to n(n+1)/2 within `tol`.
    bool in_hyperplane(double tol = 1e-9) const;

  private:
    std::vector<double> coords_;
};

struct DisorderReport {
    double d0 = 0.0;  // squared distance to the sorted vertex
    double v0 = 0.0;  // potential, d0 / 2
    std::size_t n = 0;
};

/// (1, 2, ..., n). Throws InvalidSizeError for n == 0.
StateVector sorted_vertex(std::size_t n);

StateVector vertex_of(const Permutation& p);

/// Number of pairs i < j with rank(i) > rank(j).
std::uint64_t inversions(const Permutation& p);

DisorderReport disorder_squared(const StateVector& x);

/// n(n^2 - 1)/3, the squared distance from the reversed vertex to the sorted
/// one. Exact; throws RangeError when the value does not fit in 64 bits.
std::uint64_t reverse_disorder(std::uint64_t n);

/// Sum of log2 k for k = 2..n.
double log2_factorial(std::size_t n);

inline constexpr std::size_t kBruteForceSortLimit = 8;

/// Enumerates index permutations in lexicographic order and returns the first
/// arrangement that is non-decreasing. Equal values therefore keep their
/// input order. Throws SizeLimitError for more than 8 values.
template <typename T>
std::vector<T> brute_force_sort(std::span<const T> values) {
    if (values.size() > kBruteForceSortLimit) {
        throw SizeLimitError("brute_force_sort: at most " + std::to_string(kBruteForceSortLimit) +
                             " values, got " + std::to_string(values.size()));
    }
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    do {
        bool sorted = true;
        for (std::size_t k = 1; k < order.size() && sorted; ++k) {
            sorted = !(values[order[k]] < values[order[k - 1]]);
        }
        if (sorted) {
            std::vector<T> out;
            out.reserve(order.size());
            for (std::size_t idx : order) {
                out.push_back(values[idx]);
            }
            return out;
        }
    } while (std::next_permutation(order.begin(), order.end()));
    // Unreachable for a strict weak order: some arrangement is sorted.
    throw DomainError("brute_force_sort: values are not totally ordered");
}

template <typename T>
std::vector<T> brute_force_sort(const std::vector<T>& values) {
    return brute_force_sort(std::span<const T>(values));
}

/// Every permutation of 1..n in lexicographic order.
std::vector<Permutation> all_permutations(std::size_t n);

}  // namespace permflow
