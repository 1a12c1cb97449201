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

#include "pospop/core.hpp"

#include <numeric>

namespace pospop {

std::optional<WordWidth> word_width_from_bits(unsigned bits) noexcept {
  switch (bits) {
    case 8: return WordWidth::w8;
    case 16: return WordWidth::w16;
    case 32: return WordWidth::w32;
    case 64: return WordWidth::w64;
    default: return std::nullopt;
  }
}

namespace detail {

void throw_word_incomplete(std::size_t size, WordWidth w) {
  throw Error(Errc::invalid_input, "input length " + std::to_string(size) +
                                       " is not a multiple of the word size (" +
                                       std::to_string(bytes_of(w)) + " bytes)");
}

}  // namespace detail

void scalar_pospopcnt(InputView input, WordWidth w, CounterArray& counts) {
  require_word_complete(input, w);
  if (counts.width() != w) {
    throw Error(Errc::invalid_input, "counter array width does not match word width");
  }

  const std::size_t word_bytes = bytes_of(w);
  const unsigned word_bits = bits_of(w);
  const std::byte* p = input.data();
  for (std::size_t i = 0; i < input.size(); i += word_bytes) {
    std::uint64_t word = 0;
    for (std::size_t b = 0; b < word_bytes; ++b) {
      word |= std::uint64_t(std::to_integer<std::uint8_t>(p[i + b])) << (8 * b);
    }
    for (unsigned j = 0; j < word_bits; ++j) {
      counts[j] += word >> j & 1;
    }
  }
}

std::uint64_t total_popcount_of(const CounterArray& counts) noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

}  // namespace pospop
