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

// Head, tail and short-array handling. None of these read outside the
// caller's buffer: partial vectors and partial groups go through a
// zero-filled scratch copy.

#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <cstring>

#include "pospop/accumulate.hpp"
#include "pospop/bit_block.hpp"
#include "pospop/core.hpp"

namespace pospop {

/// Bytes of input per tail group (one bit per intermediate counter).
inline constexpr std::size_t kGroupBytes = kMaxWordBits / 8;

/// Most groups TailCounters can absorb before a byte counter could wrap.
inline constexpr std::size_t kMaxTailGroups = 255;

template <class V>
struct HeadResult {
  V v0{};
  std::size_t consumed_bytes = 0;
  bool mask_applied = false;
};

/// Distance in bytes from the previous r/8-aligned address to the start of
/// the input.
inline std::size_t head_offset(InputView input, std::size_t vector_bytes) noexcept {
  return reinterpret_cast<std::uintptr_t>(input.data()) % vector_bytes;
}

/// First vector of the main path: the input's leading bytes at their natural
/// offset within the aligned vector, everything before the array zeroed.
template <std::size_t N>
HeadResult<BitBlock<N>> head_load(InputView input) {
  constexpr std::size_t vb = BitBlock<N>::kBytes;
  const std::size_t offset = head_offset(input, vb);
  const std::size_t take = std::min(vb - offset, input.size());

  alignas(64) std::byte scratch[vb] = {};
  if (take != 0) std::memcpy(scratch + offset, input.data(), take);
  return {BitBlock<N>::load(scratch), take, offset != 0};
}

/// Counts each bit of every 8-byte group into its own byte counter. Bytes
/// are replicated eight times and masked with 0x8040201008040201 so every
/// copy isolates one bit, which is then turned into a 0/1 increment.
/// The fewer than 8 bytes from `i` to the end, zero-extended to a group.
inline std::uint64_t load_partial_group(std::span<const std::byte> bytes, std::size_t i) {
  const std::size_t n = bytes.size() - i;
  assert(n < kGroupBytes);
  std::uint64_t group = 0;
  if (bytes.size() >= kGroupBytes) {
    // the last 8 bytes of the input, with the ones before i shifted out
    std::memcpy(&group, bytes.data() + bytes.size() - kGroupBytes, kGroupBytes);
    return n == 0 ? 0 : group >> (8 * (kGroupBytes - n));
  }
  for (std::size_t k = 0; k < n; ++k) group |= std::uint64_t(std::to_integer<std::uint8_t>(bytes[i + k])) << (8 * k);
  return group;
}

inline TailCounters tail_counts(std::span<const std::byte> bytes) {
  assert(bytes.size() <= kMaxTailGroups * kGroupBytes);
  constexpr std::uint64_t isolate = 0x8040201008040201u;
  constexpr std::uint64_t low7 = 0x7f7f7f7f7f7f7f7fu;
  constexpr std::uint64_t ones = 0x0101010101010101u;

  std::uint64_t counters[8] = {};  // counters[k] byte b counts residue 8k + b
  auto count_group = [&](std::uint64_t group) {
    for (unsigned k = 0; k < 8; ++k) {
      const std::uint64_t bits = (group >> (8 * k) & 0xff) * ones & isolate;
      // every byte of `bits` is 0 or a single bit; adding 0x7f sets bit 7
      // exactly for the nonzero ones without carrying into the next byte
      counters[k] += ((bits + low7) >> 7) & ones;
    }
  };

  std::size_t i = 0;
  for (; i + kGroupBytes <= bytes.size(); i += kGroupBytes) {
    std::uint64_t group;
    std::memcpy(&group, bytes.data() + i, kGroupBytes);
    count_group(group);
  }
  if (i < bytes.size()) count_group(load_partial_group(bytes, i));

  TailCounters t;
  std::memcpy(t.data(), counters, sizeof counters);
  return t;
}

struct PortableTailCounter {
  TailCounters operator()(std::span<const std::byte> bytes) const { return tail_counts(bytes); }
};

/// c[i] += set bits at positions == i (mod 64) of `bytes`, which start at a
/// position that is a multiple of 64.
template <class T, class TailFn = PortableTailCounter>
void count_tail(CounterVectors<T>& c, InputView bytes, TailFn&& tail = {}) {
  for (std::size_t off = 0; off < bytes.size(); off += kMaxTailGroups * kGroupBytes) {
    const std::size_t n = std::min(bytes.size() - off, kMaxTailGroups * kGroupBytes);
    const TailCounters t = tail(bytes.bytes().subspan(off, n));
    for (unsigned i = 0; i < kMaxWordBits; ++i) c[i] += static_cast<T>(t[i]);
  }
}

/// Counts an input too short for the CSA path; no alignment, byte counters
/// are folded into 16-bit counters at least every 255 groups.
template <class TailFn = PortableTailCounter>
void count_short(CounterArray& out, InputView input, WordWidth w, TailFn&& tail = {}) {
  require_word_complete(input, w);
  if (input.empty()) return;
  CounterVectors<std::uint32_t> c{};
  count_tail(c, input, tail);
  flush_fw(out, c, w);
}

}  // namespace pospop
