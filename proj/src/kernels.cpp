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

#include "pospop/kernels.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <string>

#include "kernel_entry.hpp"

namespace pospop {
namespace {

bool always() noexcept { return true; }

#if defined(POSPOP_HAVE_X86_KERNELS)
bool has_avx2() noexcept {
  static const bool yes = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return yes;
}

bool has_avx512bw() noexcept {
  static const bool yes = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx512bw");
  }();
  return yes;
}
#endif

constexpr std::array kKernels = {
    KernelDescriptor{"portable", 64, &always, &detail::count_portable},
#if defined(POSPOP_HAVE_X86_KERNELS)
    KernelDescriptor{"avx2", 256, &has_avx2, &detail::count_avx2},
    KernelDescriptor{"avx512", 512, &has_avx512bw, &detail::count_avx512},
#endif
};

std::string known_names() {
  std::string s;
  for (const auto& k : kKernels) {
    if (!s.empty()) s += ", ";
    s += k.name;
  }
  return s;
}

}  // namespace

std::span<const KernelDescriptor> compiled_kernels() noexcept { return kKernels; }

std::vector<KernelStatus> list_kernels() {
  std::vector<KernelStatus> out;
  out.reserve(kKernels.size());
  for (const auto& k : kKernels) out.push_back({&k, k.available()});
  return out;
}

const KernelDescriptor& select_kernel(std::optional<std::string_view> name) {
  if (name) {
    const auto it = std::find_if(kKernels.begin(), kKernels.end(),
                                 [&](const KernelDescriptor& k) { return k.name == *name; });
    if (it == kKernels.end()) {
      throw Error(Errc::unknown_kernel,
                  "unknown kernel '" + std::string(*name) + "' (known: " + known_names() + ")");
    }
    if (!it->available()) {
      throw Error(Errc::kernel_unavailable,
                  "kernel '" + std::string(*name) + "' is not supported on this CPU");
    }
    return *it;
  }

  const KernelDescriptor* best = &kKernels.front();
  for (const auto& k : kKernels) {
    if (k.vector_bits > best->vector_bits && k.available()) best = &k;
  }
  return *best;
}

const KernelDescriptor& default_kernel() {
  static const KernelDescriptor& chosen = [] () -> const KernelDescriptor& {
    const char* env = std::getenv(std::string(kKernelEnvVar).c_str());
    if (env != nullptr && *env != '\0') return select_kernel(std::string_view(env));
    return select_kernel();
  }();
  return chosen;
}

void pospopcnt(InputView input, WordWidth w, CounterArray& counts) {
  pospopcnt(input, w, counts, default_kernel());
}

void pospopcnt(InputView input, WordWidth w, CounterArray& counts, const KernelDescriptor& kernel) {
  if (!kernel.available()) {
    throw Error(Errc::kernel_unavailable,
                "kernel '" + std::string(kernel.name) + "' is not supported on this CPU");
  }
  if (counts.width() != w) {
    throw Error(Errc::invalid_input, "counter array width does not match word width");
  }
  require_word_complete(input, w);
  kernel.count(input, w, counts);
}

}  // namespace pospop
