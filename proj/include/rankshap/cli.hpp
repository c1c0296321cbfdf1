/*
 * Copyright 2026 The RankSHAP Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// The `rankshap` command line, callable in-process.

#ifndef RANKSHAP_CLI_HPP_
#define RANKSHAP_CLI_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rankshap/core.hpp"

namespace rankshap {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitIo = 2,
  kExitComputation = 3,
};

// `args` excludes the program name. Primary output goes to `out` unless an
// --out path is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

// "10" -> 10; "10%" -> ceil(10 * n / 100), at least 1.
Index parse_k(std::string_view text, Index n);

// "exact" -> nullopt; otherwise a positive integer.
std::optional<Index> parse_samples(std::string_view text);

std::uint64_t parse_seed(std::string_view text);

}  // namespace rankshap

#endif  // RANKSHAP_CLI_HPP_
