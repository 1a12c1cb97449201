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

#include "pospop/baseline.hpp"

#include <cstring>

namespace pospop {

#if defined(__GNUC__) && !defined(__clang__)
#define POSPOP_NO_VECTORIZE __attribute__((optimize("no-tree-vectorize")))
#else
#define POSPOP_NO_VECTORIZE
#endif

namespace {

POSPOP_NO_VECTORIZE void baseline16(const std::byte* p, std::size_t n, CounterArray& counts) {
  std::uint64_t c[16] = {};
  for (std::size_t i = 0; i + 2 <= n; i += 2) {
    std::uint16_t word;
    std::memcpy(&word, p + i, 2);
    c[0] += word >> 0 & 1;
    c[1] += word >> 1 & 1;
    c[2] += word >> 2 & 1;
    c[3] += word >> 3 & 1;
    c[4] += word >> 4 & 1;
    c[5] += word >> 5 & 1;
    c[6] += word >> 6 & 1;
    c[7] += word >> 7 & 1;
    c[8] += word >> 8 & 1;
    c[9] += word >> 9 & 1;
    c[10] += word >> 10 & 1;
    c[11] += word >> 11 & 1;
    c[12] += word >> 12 & 1;
    c[13] += word >> 13 & 1;
    c[14] += word >> 14 & 1;
    c[15] += word >> 15 & 1;
  }
  for (unsigned j = 0; j < 16; ++j) counts[j] += c[j];
}

#if defined(__GNUC__) && defined(__x86_64__) && !defined(__clang__)
__attribute__((target_clones("avx512f", "avx2", "default")))
#endif
std::uint64_t word_sum(const std::byte* p, std::size_t n) {
  std::uint64_t sum = 0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    std::uint64_t x;
    std::memcpy(&x, p + i, 8);
    sum += x;
  }
  for (; i < n; ++i) sum += std::to_integer<std::uint64_t>(p[i]);
  return sum;
}

}  // namespace

void baseline_pospopcnt(InputView input, WordWidth w, CounterArray& counts) {
  if (w == WordWidth::w16 && counts.width() == w) {
    require_word_complete(input, w);
    baseline16(input.data(), input.size(), counts);
    return;
  }
  scalar_pospopcnt(input, w, counts);
}

void roofline_sum(InputView input, WordWidth, CounterArray& counts) {
  counts[0] += word_sum(input.data(), input.size());
}

}  // namespace pospop
