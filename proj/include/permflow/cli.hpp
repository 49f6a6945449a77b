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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "permflow/permutation.hpp"

namespace permflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSizeLimit = 3;

/// Runs the command line `args` (without the program name). Output goes to
/// `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Fisher-Yates shuffle of (1..n) driven by the 64-bit LCG
/// s' = s * 6364136223846793005 + 1442695040888963407, drawing s' >> 33.
Permutation lcg_shuffle(std::size_t n, std::uint64_t seed);

/// `reverse` | `sorted` | `random:SEED` | explicit list such as `3,1,2`.
/// Explicit lists fix n themselves; a given n must then agree.
Permutation parse_start(std::string_view spec, std::optional<std::size_t> n);

/// Plain decimal, or `[K]ln[M]` meaning K * ln(M) (K defaults to 1, M to 2),
/// e.g. `2ln2`, `ln3`, `0.5`.
double parse_time(std::string_view text);

/// printf %.{precision}g, with negative zero printed as 0.
std::string format_real(double value, int precision);

}  // namespace permflow::cli
