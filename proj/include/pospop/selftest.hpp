// Copyright 2026 The pospop Authors
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
#include <span>
#include <string>
#include <vector>

#include "pospop/core.hpp"
#include "pospop/kernels.hpp"

namespace pospop {

/// One randomised input: contents are a pure function of (seed, index).
struct FuzzCase {
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  WordWidth width = WordWidth::w16;
  std::size_t length = 0;  ///< bytes, word-complete
  std::size_t offset = 0;  ///< misalignment from a 64-byte boundary

  static FuzzCase generate(std::uint64_t seed, std::uint64_t index);
};

/// Fills `out` (length bytes) with the case's contents.
void fill_case_bytes(const FuzzCase& c, std::span<std::byte> out);

struct SelftestFailure {
  std::string kernel;
  FuzzCase reproduction;  ///< shortest failing prefix of the original case
};

struct SelftestReport {
  std::uint64_t seed = 0;
  std::uint64_t iterations = 0;
  std::vector<std::string> kernels;
  std::vector<SelftestFailure> failures;

  bool passed() const noexcept { return failures.empty(); }
  /// Deterministic human-readable summary, one line per kernel and failure.
  std::string text() const;
};

/// Checks every available kernel in `kernels` against scalar_pospopcnt on
/// `iterations` random cases. At most one failure is recorded per kernel.
SelftestReport run_selftest(std::uint64_t seed, std::uint64_t iterations,
                            std::span<const KernelDescriptor> kernels = compiled_kernels());

}  // namespace pospop
