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
#include <memory>
#include <optional>
#include <utility>
#include <variant>

#include "json.hpp"

#include "permflow/permutation.hpp"

namespace permflow::dtree {

struct Node;

/// Compares the elements at positions i and j (1-based). `lo` handles
/// x_i < x_j, `hi` handles x_i > x_j.
struct Compare {
    std::size_t i = 0;
    std::size_t j = 0;
    std::unique_ptr<Node> lo;
    std::unique_ptr<Node> hi;
};

/// Leaf output lists input positions in increasing order of their values,
/// so input[out(1)] < input[out(2)] < ... for every input routed here.
struct Leaf {
    Permutation out;
};

struct Node {
    std::variant<Compare, Leaf> body;

    bool is_leaf() const { return std::holds_alternative<Leaf>(body); }
};

std::unique_ptr<Node> make_leaf(Permutation out);
std::unique_ptr<Node> make_compare(std::size_t i, std::size_t j, std::unique_ptr<Node> lo, std::unique_ptr<Node> hi);

struct TreeStats {
    std::size_t height = 0;
    std::uint64_t leaf_count = 0;
    std::size_t n = 0;
};

struct OptimalTree {
    std::unique_ptr<Node> root;
    TreeStats stats;
};

struct VerifyResult {
    bool ok = false;
    std::optional<Permutation> counterexample;
};

/// ceil(log2 n!), computed exactly from n! for n <= 20.
std::size_t info_lower_bound(std::size_t n);

inline constexpr std::size_t kFastBuildLimit = 4;
inline constexpr std::size_t kSlowBuildLimit = 5;

/// Minimal-height comparison tree for n distinct keys, found by exhaustive
/// branch and bound over sets of still-consistent inputs. n = 5 requires
/// `allow_slow`; larger n throws SizeLimitError.
OptimalTree build_optimal(std::size_t n, bool allow_slow = false);

/// Runs every permutation of 1..n through the tree. Throws StructureError on
/// malformed trees (bad indices, repeated pair on a path, wrong leaf size).
VerifyResult verify_tree(const Node& tree, std::size_t n);

TreeStats tree_stats(const Node& tree);

/// Internal: {"cmp":[i,j],"lo":...,"hi":...}; leaf: {"out":[...]}.
nlohmann::ordered_json to_json(const Node& tree);
std::unique_ptr<Node> from_json(const nlohmann::ordered_json& j);

}  // namespace permflow::dtree
