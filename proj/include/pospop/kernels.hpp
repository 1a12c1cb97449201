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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pospop/core.hpp"

namespace pospop {

using CountFn = void (*)(InputView, WordWidth, CounterArray&);

struct KernelDescriptor {
  std::string_view name;
  std::size_t vector_bits;  ///< r
  bool (*available)() noexcept;
  CountFn count;

  /// Input consumed by one main-loop iteration.
  constexpr std::size_t block_bytes() const noexcept { return 16 * vector_bits / 8; }
};

struct KernelStatus {
  const KernelDescriptor* kernel;
  bool available;
};

/// Every kernel compiled into the library, portable first.
std::span<const KernelDescriptor> compiled_kernels() noexcept;

std::vector<KernelStatus> list_kernels();

/// Looks up `name` (must exist and be usable on this CPU), or picks the
/// widest available kernel when no name is given.
const KernelDescriptor& select_kernel(std::optional<std::string_view> name = std::nullopt);

/// select_kernel honouring the POSPOPCNT_KERNEL environment variable,
/// resolved once per process.
const KernelDescriptor& default_kernel();

inline constexpr std::string_view kKernelEnvVar = "POSPOPCNT_KERNEL";

/// Adds the positional population count of `input` at width w to `counts`.
void pospopcnt(InputView input, WordWidth w, CounterArray& counts);
void pospopcnt(InputView input, WordWidth w, CounterArray& counts, const KernelDescriptor& kernel);

}  // namespace pospop
