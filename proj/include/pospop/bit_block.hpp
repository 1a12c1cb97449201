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

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>

namespace pospop {

/// A portable r-bit vector made of Words 64-bit machine words, r = 64 * Words.
/// Bit p lives in word p / 64 at bit p % 64, which is also the order the
/// bytes of a little-endian load land in.
template <std::size_t Words>
struct BitBlock {
  static_assert(Words > 0 && (Words & (Words - 1)) == 0, "word count must be a power of two");

  static constexpr std::size_t kWords = Words;
  static constexpr std::size_t kBits = 64 * Words;
  static constexpr std::size_t kBytes = 8 * Words;

  std::array<std::uint64_t, Words> w{};

  static BitBlock load(const std::byte* p) noexcept {
    BitBlock v;
    std::memcpy(v.w.data(), p, kBytes);
    return v;
  }

  static constexpr BitBlock ones() noexcept {
    BitBlock v;
    v.w.fill(~std::uint64_t{0});
    return v;
  }

  constexpr bool test(std::size_t p) const noexcept { return w[p / 64] >> (p % 64) & 1; }
  constexpr void set(std::size_t p, bool bit = true) noexcept {
    const std::uint64_t m = std::uint64_t{1} << (p % 64);
    w[p / 64] = bit ? (w[p / 64] | m) : (w[p / 64] & ~m);
  }

  friend constexpr BitBlock operator&(const BitBlock& a, const BitBlock& b) noexcept {
    BitBlock r;
    for (std::size_t i = 0; i < Words; ++i) r.w[i] = a.w[i] & b.w[i];
    return r;
  }
  friend constexpr BitBlock operator|(const BitBlock& a, const BitBlock& b) noexcept {
    BitBlock r;
    for (std::size_t i = 0; i < Words; ++i) r.w[i] = a.w[i] | b.w[i];
    return r;
  }
  friend constexpr BitBlock operator^(const BitBlock& a, const BitBlock& b) noexcept {
    BitBlock r;
    for (std::size_t i = 0; i < Words; ++i) r.w[i] = a.w[i] ^ b.w[i];
    return r;
  }
  friend constexpr BitBlock operator~(const BitBlock& a) noexcept {
    BitBlock r;
    for (std::size_t i = 0; i < Words; ++i) r.w[i] = ~a.w[i];
    return r;
  }
  friend constexpr bool operator==(const BitBlock&, const BitBlock&) = default;
};

}  // namespace pospop
