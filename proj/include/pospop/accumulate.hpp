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

// Reduction of CSA output into 16-bit intermediate counters and the flush of
// those counters into the caller's 64-bit counter array.
//
// Intermediate counters are indexed by bit position modulo kMaxWordBits
// ("residue"). Positions are counted in the kernel's load stream, which may
// start up to r/8 - 1 bytes before the caller's array; flushing undoes that
// shift.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <type_traits>

#include "pospop/bit_block.hpp"
#include "pospop/core.hpp"
#include "pospop/csa.hpp"

namespace pospop {

template <class T = std::uint16_t>
using CounterVectors = std::array<T, kMaxWordBits>;

/// Byte-sized counters used while counting a tail or a short array.
using TailCounters = std::array<std::uint8_t, kMaxWordBits>;

/// Largest h that still leaves room for another main-loop iteration, or for
/// the final accumulation plus a maximal tail, in 16-bit counters.
constexpr std::uint32_t flush_threshold(std::size_t r, std::size_t w_max = kMaxWordBits) noexcept {
  return 0xffff - static_cast<std::uint32_t>((15 + 15) * r / w_max);
}

/// Upper bound h on every pending intermediate counter.
struct OverflowTracker {
  std::uint32_t h = 0;

  /// Bookkeeping for one main-loop iteration at vector width r; returns true
  /// when the counters must be flushed before the next one.
  constexpr bool record_iteration(std::size_t r) noexcept {
    h += static_cast<std::uint32_t>(16 * r / kMaxWordBits);
    return h > flush_threshold(r);
  }
  constexpr void reset() noexcept { h = 0; }
};

/// Output counter that receives intermediate residue `residue` when the
/// stream started `phase_bytes` before the caller's array.
constexpr unsigned output_index(unsigned residue, std::size_t phase_bytes, WordWidth w) noexcept {
  const unsigned shift = static_cast<unsigned>(8 * phase_bytes % kMaxWordBits);
  return (residue + kMaxWordBits - shift) & (bits_of(w) - 1);
}

/// C[j] += sum of c[i] over i == j (mod w), after undoing the stream phase;
/// w is out.width().
void flush_residues(CounterArray& out, std::span<const std::uint32_t, kMaxWordBits> c,
                    std::size_t phase_bytes);

/// f_w: C[j] += sum of c[i] over i == j (mod w), after undoing the stream
/// phase. Leaves c untouched.
template <class T>
void flush_fw(CounterArray& out, const CounterVectors<T>& c, WordWidth w, std::size_t phase_bytes = 0) {
  if constexpr (std::is_integral_v<T> && sizeof(T) <= sizeof(std::uint32_t)) {
    if (out.width() == w) {
      alignas(64) std::array<std::uint32_t, kMaxWordBits> wide;
      for (unsigned i = 0; i < kMaxWordBits; ++i) wide[i] = c[i];
      flush_residues(out, wide, phase_bytes);
      return;
    }
  }
  for (unsigned i = 0; i < kMaxWordBits; ++i) {
    out[output_index(i, phase_bytes, w)] += static_cast<std::uint64_t>(c[i]);
  }
}

namespace detail {

constexpr std::uint64_t kFieldMask[] = {
    0x5555555555555555u, 0x3333333333333333u, 0x0f0f0f0f0f0f0f0fu,
    0x00ff00ff00ff00ffu, 0x0000ffff0000ffffu, 0x00000000ffffffffu,
};

constexpr unsigned log2_exact(std::size_t n) noexcept {
  unsigned l = 0;
  while ((std::size_t{1} << l) < n) ++l;
  return l;
}

}  // namespace detail

/// c[i] += 16 * (number of set bits of a16 at positions == i mod 64).
///
/// The vector is repeatedly split into even and odd fields and folded onto
/// itself, doubling the field width and halving the number of elements,
/// until one word (64 elements) is left. After s splits the words form 2^s
/// classes; field u of class g then counts residue u * 2^s + g.
template <class T, std::size_t N>
void accumulate_a16(CounterVectors<T>& c, const BitBlock<N>& a16) {
  constexpr unsigned levels = detail::log2_exact(N);
  std::array<std::uint64_t, N> cur = a16.w;
  std::size_t classes = 1;
  std::size_t per_class = N;

  for (unsigned s = 0; s < levels; ++s) {
    const unsigned field = 1u << s;
    const std::uint64_t mask = detail::kFieldMask[s];
    std::array<std::uint64_t, N> next{};
    const std::size_t half = per_class / 2;
    for (std::size_t g = 0; g < classes; ++g) {
      for (std::size_t p = 0; p < half; ++p) {
        const std::uint64_t x = cur[g * per_class + p];
        const std::uint64_t y = cur[g * per_class + p + half];
        next[g * half + p] = (x & mask) + (y & mask);
        next[(g + classes) * half + p] = (x >> field & mask) + (y >> field & mask);
      }
    }
    cur = next;
    classes *= 2;
    per_class = half;
  }

  // zero-extend the surviving N-bit fields, scaled by 16
  constexpr unsigned field = N;
  constexpr std::uint64_t field_mask = field == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << field) - 1;
  for (std::size_t g = 0; g < N; ++g) {
    for (unsigned u = 0; u < 64 / field; ++u) {
      const auto count = static_cast<unsigned>(cur[g] >> (u * field) & field_mask);
      c[u * N + g] += static_cast<T>(16 * count);
    }
  }
}

/// Bit-parallel 4x4 transposition of (a8, a4, a2, a1) into nibble counters.
/// Plane x holds value(p) for positions p == x (mod 4); nibble n of plane x
/// (nibble n sits at bits 4n..4n+3) is the count for position 4n + x.
template <std::size_t N>
constexpr std::array<BitBlock<N>, 4> transpose_nibbles(const AccumulatorSet<BitBlock<N>>& acc) {
  constexpr std::uint64_t m1 = 0x5555555555555555u;
  constexpr std::uint64_t m2 = 0x3333333333333333u;
  std::array<BitBlock<N>, 4> out{};
  for (std::size_t k = 0; k < N; ++k) {
    const std::uint64_t a1 = acc.a1.w[k], a2 = acc.a2.w[k], a4 = acc.a4.w[k], a8 = acc.a8.w[k];
    // crumbs: (a2,a1) and (a8,a4) for even and odd positions
    const std::uint64_t b12l = (a1 & m1) | (a2 << 1 & ~m1);
    const std::uint64_t b12h = (a2 & ~m1) | (a1 >> 1 & m1);
    const std::uint64_t b48l = (a4 & m1) | (a8 << 1 & ~m1);
    const std::uint64_t b48h = (a8 & ~m1) | (a4 >> 1 & m1);
    out[0].w[k] = (b12l & m2) | (b48l << 2 & ~m2);
    out[1].w[k] = (b12h & m2) | (b48h << 2 & ~m2);
    out[2].w[k] = (b48l & ~m2) | (b12l >> 2 & m2);
    out[3].w[k] = (b48h & ~m2) | (b12h >> 2 & m2);
  }
  return out;
}

/// c[i] += sum of value(acc at p) over positions p == i (mod 64).
template <class T, std::size_t N>
void final_accumulate(CounterVectors<T>& c, const AccumulatorSet<BitBlock<N>>& acc) {
  constexpr std::uint64_t low_nibbles = 0x0f0f0f0f0f0f0f0fu;
  const auto planes = transpose_nibbles(acc);
  for (unsigned x = 0; x < 4; ++x) {
    // widen nibbles to bytes and fold the words; at most 8 * 15 per byte,
    // so plain 64-bit addition cannot carry between bytes
    std::uint64_t even = 0, odd = 0;
    for (std::size_t k = 0; k < N; ++k) {
      even += planes[x].w[k] & low_nibbles;
      odd += planes[x].w[k] >> 4 & low_nibbles;
    }
    for (unsigned b = 0; b < 8; ++b) {
      c[8 * b + x] += static_cast<T>(even >> (8 * b) & 0xff);
      c[8 * b + 4 + x] += static_cast<T>(odd >> (8 * b) & 0xff);
    }
  }
}

/// Intermediate counters kept as plain logical scalars. Generic over the
/// vector width and the counter type so tests can substitute checked types.
template <std::size_t N, class T = std::uint16_t>
class LogicalCounters {
 public:
  using Vector = BitBlock<N>;

  void add_a16(const Vector& a16) { accumulate_a16(c_, a16); }
  void add_final(const AccumulatorSet<Vector>& acc) { final_accumulate(c_, acc); }
  void add_tail(const TailCounters& t) {
    for (unsigned i = 0; i < kMaxWordBits; ++i) c_[i] += static_cast<T>(t[i]);
  }
  void flush(CounterArray& out, WordWidth w, std::size_t phase_bytes) {
    flush_fw(out, c_, w, phase_bytes);
    c_.fill(T{});
  }

  const CounterVectors<T>& values() const noexcept { return c_; }

 private:
  CounterVectors<T> c_{};
};

/// Step after each main-loop iteration: account for the iteration and flush
/// when another one might not fit.
template <class Store>
bool check_and_flush(OverflowTracker& h, Store& c, CounterArray& out, WordWidth w, std::size_t r,
                     std::size_t phase_bytes = 0) {
  if (!h.record_iteration(r)) return false;
  c.flush(out, w, phase_bytes);
  h.reset();
  return true;
}

}  // namespace pospop
