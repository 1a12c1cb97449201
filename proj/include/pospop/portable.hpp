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

// The always-available kernel: r = 64 = w_max on ordinary 64-bit words.

#pragma once

#include <array>
#include <cstdint>

#include "pospop/accumulate.hpp"
#include "pospop/pipeline.hpp"

namespace pospop {

/// 64 16-bit counters packed four to a machine word: lane l of word k counts
/// residue 4k + l. Lanes never carry into each other as long as the overflow
/// discipline holds.
class PackedCounters {
 public:
  using Vector = BitBlock<1>;

  void add_a16(const Vector& a16) noexcept {
    // spreads bits 0..3 of a nibble to bits 0, 16, 32, 48 without carries
    constexpr std::uint64_t spread = 0x0000200040008001u;
    constexpr std::uint64_t lane_lsb = 0x0001000100010001u;
    const std::uint64_t bits = a16.w[0];
    for (unsigned k = 0; k < 16; ++k) {
      lanes_[k] += ((bits >> (4 * k) & 0xf) * spread & lane_lsb) << 4;
    }
  }

  void add_final(const AccumulatorSet<Vector>& acc) noexcept {
    const auto planes = transpose_nibbles(acc);
    for (unsigned x = 0; x < 4; ++x) {
      const std::uint64_t nibbles = planes[x].w[0];
      for (unsigned u = 0; u < 16; ++u) {
        lanes_[u] += (nibbles >> (4 * u) & 0xf) << (16 * x);
      }
    }
  }

  void add_tail(const TailCounters& t) noexcept {
    for (unsigned k = 0; k < 16; ++k) {
      lanes_[k] += std::uint64_t(t[4 * k]) | std::uint64_t(t[4 * k + 1]) << 16 |
                   std::uint64_t(t[4 * k + 2]) << 32 | std::uint64_t(t[4 * k + 3]) << 48;
    }
  }

  void flush(CounterArray& out, WordWidth w, std::size_t phase_bytes) noexcept {
    CounterVectors<std::uint16_t> c;
    for (unsigned k = 0; k < 16; ++k) {
      for (unsigned l = 0; l < 4; ++l) c[4 * k + l] = static_cast<std::uint16_t>(lanes_[k] >> (16 * l));
    }
    flush_fw(out, c, w, phase_bytes);
    lanes_.fill(0);
  }

 private:
  std::array<std::uint64_t, 16> lanes_{};
};

struct PortableKernel {
  using Vector = BitBlock<1>;
  using Counters = PackedCounters;
  using Adder = BitwiseFullAdder;
  static constexpr std::size_t kBits = 64;

  static Vector load(const std::byte* p) noexcept { return Vector::load(p); }
  static HeadResult<Vector> head_load(InputView in) { return pospop::head_load<1>(in); }
  static TailCounters tail_counts(std::span<const std::byte> b) { return pospop::tail_counts(b); }
};

static_assert(Kernel<PortableKernel>);
static_assert(Kernel<GenericKernel<8>>);

}  // namespace pospop
