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

#include "permflow/dtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace permflow::dtree {

std::unique_ptr<Node> make_leaf(Permutation out) {
    return std::make_unique<Node>(Node{Leaf{std::move(out)}});
}

std::unique_ptr<Node> make_compare(std::size_t i, std::size_t j, std::unique_ptr<Node> lo, std::unique_ptr<Node> hi) {
    return std::make_unique<Node>(Node{Compare{i, j, std::move(lo), std::move(hi)}});
}

namespace {

std::size_t ceil_log2(std::uint64_t value) {
    std::size_t bits = 0;
    while (bits < 64 && (std::uint64_t{1} << bits) < value) {
        ++bits;
    }
    return bits;
}

// Positions of the input listed by increasing rank.
Permutation sorting_order(const Permutation& input) {
    std::vector<int> out(input.size());
    for (std::size_t pos = 1; pos <= input.size(); ++pos) {
        out[input.rank(pos) - 1] = static_cast<int>(pos);
    }
    return Permutation(std::move(out));
}

// Consistent inputs are stored as indices into the lexicographic list of
// permutations (their Lehmer rank); keeping each set sorted canonicalizes it
// for the memo table.
using InputSet = std::vector<std::uint16_t>;

class Search {
  public:
    explicit Search(std::size_t n) : inputs_(all_permutations(n)) {
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t j = i + 1; j <= n; ++j) {
                pairs_.emplace_back(i, j);
            }
        }
    }

    InputSet everything() const {
        InputSet all(inputs_.size());
        for (std::size_t k = 0; k < all.size(); ++k) {
            all[k] = static_cast<std::uint16_t>(k);
        }
        return all;
    }

    std::size_t min_height(const InputSet& set) {
        if (set.size() <= 1) {
            return 0;
        }
        if (auto it = memo_.find(set); it != memo_.end()) {
            return it->second;
        }
        const std::size_t bound = ceil_log2(set.size());
        std::size_t best = std::numeric_limits<std::size_t>::max();
        for (const auto& [i, j] : pairs_) {
            auto [lo, hi] = split(set, i, j);
            if (lo.empty() || hi.empty()) {
                continue;
            }
            const std::size_t lo_height = min_height(lo);
            if (lo_height + 1 >= best) {
                continue;
            }
            const std::size_t candidate = 1 + std::max(lo_height, min_height(hi));
            if (candidate < best) {
                best = candidate;
                if (best == bound) {
                    break;
                }
            }
        }
        memo_.emplace(set, best);
        return best;
    }

    std::unique_ptr<Node> build(const InputSet& set) {
        if (set.size() == 1) {
            return make_leaf(sorting_order(inputs_[set.front()]));
        }
        const std::size_t target = min_height(set);
        for (const auto& [i, j] : pairs_) {
            auto [lo, hi] = split(set, i, j);
            if (lo.empty() || hi.empty()) {
                continue;
            }
            if (1 + std::max(min_height(lo), min_height(hi)) == target) {
                return make_compare(i, j, build(lo), build(hi));
            }
        }
        throw std::logic_error("build_optimal: no comparison achieves the memoized height");
    }

  private:
    std::pair<InputSet, InputSet> split(const InputSet& set, std::size_t i, std::size_t j) const {
        std::pair<InputSet, InputSet> parts;
        for (std::uint16_t k : set) {
            const Permutation& p = inputs_[k];
            (p.rank(i) < p.rank(j) ? parts.first : parts.second).push_back(k);
        }
        return parts;
    }

    std::vector<Permutation> inputs_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
    std::map<InputSet, std::size_t> memo_;
};

void validate(const Node* node, std::size_t n, std::set<std::pair<std::size_t, std::size_t>>& path) {
    if (node == nullptr) {
        throw StructureError("decision tree has a missing child");
    }
    if (const auto* leaf = std::get_if<Leaf>(&node->body)) {
        if (leaf->out.size() != n) {
            throw StructureError("leaf output has " + std::to_string(leaf->out.size()) + " entries, expected " +
                                 std::to_string(n));
        }
        return;
    }
    const auto& cmp = std::get<Compare>(node->body);
    if (cmp.i == 0 || cmp.j == 0 || cmp.i > n || cmp.j > n || cmp.i == cmp.j) {
        throw StructureError("invalid comparison (" + std::to_string(cmp.i) + "," + std::to_string(cmp.j) + ")");
    }
    const std::pair<std::size_t, std::size_t> key = std::minmax(cmp.i, cmp.j);
    if (!path.insert(key).second) {
        throw StructureError("comparison (" + std::to_string(key.first) + "," + std::to_string(key.second) +
                             ") repeated on a root-to-leaf path");
    }
    validate(cmp.lo.get(), n, path);
    validate(cmp.hi.get(), n, path);
    path.erase(key);
}

void collect_stats(const Node& node, std::size_t depth, TreeStats& stats) {
    if (const auto* leaf = std::get_if<Leaf>(&node.body)) {
        stats.height = std::max(stats.height, depth);
        ++stats.leaf_count;
        stats.n = leaf->out.size();
        return;
    }
    const auto& cmp = std::get<Compare>(node.body);
    if (!cmp.lo || !cmp.hi) {
        throw StructureError("decision tree has a missing child");
    }
    collect_stats(*cmp.lo, depth + 1, stats);
    collect_stats(*cmp.hi, depth + 1, stats);
}

}  // namespace

std::size_t info_lower_bound(std::size_t n) {
    if (n <= 20) {
        std::uint64_t factorial = 1;
        for (std::size_t k = 2; k <= n; ++k) {
            factorial *= k;
        }
        return ceil_log2(factorial);
    }
    return static_cast<std::size_t>(std::ceil(log2_factorial(n)));
}

OptimalTree build_optimal(std::size_t n, bool allow_slow) {
    if (n == 0) {
        throw InvalidSizeError("build_optimal: n must be positive");
    }
    if (n > kSlowBuildLimit || (n > kFastBuildLimit && !allow_slow)) {
        throw SizeLimitError("build_optimal: n = " + std::to_string(n) + " exceeds the search limit" +
                             (n <= kSlowBuildLimit ? " (allow_slow required)" : ""));
    }
    Search search(n);
    OptimalTree result{search.build(search.everything()), {}};
    result.stats = tree_stats(*result.root);
    return result;
}

VerifyResult verify_tree(const Node& tree, std::size_t n) {
    std::set<std::pair<std::size_t, std::size_t>> path;
    validate(&tree, n, path);
    for (const Permutation& input : all_permutations(n)) {
        const Node* node = &tree;
        while (const auto* cmp = std::get_if<Compare>(&node->body)) {
            node = input.rank(cmp->i) < input.rank(cmp->j) ? cmp->lo.get() : cmp->hi.get();
        }
        const Permutation& out = std::get<Leaf>(node->body).out;
        for (std::size_t k = 1; k <= n; ++k) {
            if (input.rank(static_cast<std::size_t>(out.rank(k))) != static_cast<int>(k)) {
                return {false, input};
            }
        }
    }
    return {true, std::nullopt};
}

TreeStats tree_stats(const Node& tree) {
    TreeStats stats;
    collect_stats(tree, 0, stats);
    if (stats.height < 64 && stats.leaf_count > (std::uint64_t{1} << stats.height)) {
        throw std::logic_error("tree_stats: binary tree has more than 2^height leaves");
    }
    return stats;
}

nlohmann::ordered_json to_json(const Node& tree) {
    if (const auto* leaf = std::get_if<Leaf>(&tree.body)) {
        return {{"out", std::vector<int>(leaf->out.ranks().begin(), leaf->out.ranks().end())}};
    }
    const auto& cmp = std::get<Compare>(tree.body);
    if (!cmp.lo || !cmp.hi) {
        throw StructureError("decision tree has a missing child");
    }
    nlohmann::ordered_json j;
    j["cmp"] = {cmp.i, cmp.j};
    j["lo"] = to_json(*cmp.lo);
    j["hi"] = to_json(*cmp.hi);
    return j;
}

std::unique_ptr<Node> from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) {
        throw StructureError("tree node must be a JSON object");
    }
    try {
        if (j.contains("out")) {
            return make_leaf(Permutation(j.at("out").get<std::vector<int>>()));
        }
        const auto& cmp = j.at("cmp");
        if (!cmp.is_array() || cmp.size() != 2) {
            throw StructureError("\"cmp\" must be a two-element array");
        }
        return make_compare(cmp[0].get<std::size_t>(), cmp[1].get<std::size_t>(), from_json(j.at("lo")),
                            from_json(j.at("hi")));
    } catch (const nlohmann::ordered_json::exception& e) {
        throw StructureError(std::string("malformed tree JSON: ") + e.what());
    } catch (const InvalidPermutationError& e) {
        throw StructureError(std::string("malformed leaf: ") + e.what());
    }
}

}  // namespace permflow::dtree
