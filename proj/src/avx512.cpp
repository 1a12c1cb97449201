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

// r = 512 kernel for AVX-512 F + BW, compiled with those flags. Same linkage
// arrangement as the AVX2 kernel.

#include <immintrin.h>

#include <array>
#include <cstdint>
#include <cstring>

#include "kernel_entry.hpp"
#include "pospop/pipeline.hpp"

namespace pospop::detail {
namespace {

using V = __m512i;

inline V splat(std::uint64_t x) { return _mm512_set1_epi64(static_cast<long long>(x)); }

struct Avx512FullAdder {
  FullAdderResult<V> operator()(V a, V b, V c) const {
    return {_mm512_ternarylogic_epi64(a, b, c, 0xe8),   // majority
            _mm512_ternarylogic_epi64(a, b, c, 0x96)};  // parity
  }
};

// Counter vector m, 64-bit word j, 16-bit lane q counts residue
// 16q + 8m + kWordResidue[j]; stored lane index is 32m + 4j + q.
constexpr unsigned kWordResidue[8] = {0, 4, 1, 5, 2, 6, 3, 7};

constexpr std::array<std::uint8_t, kMaxWordBits> make_residue_table() {
  std::array<std::uint8_t, kMaxWordBits> t{};
  for (unsigned m = 0; m < 2; ++m)
    for (unsigned j = 0; j < 8; ++j)
      for (unsigned q = 0; q < 4; ++q)
        t[32 * m + 4 * j + q] = static_cast<std::uint8_t>(16 * q + 8 * m + kWordResidue[j]);
  return t;
}
constexpr auto kResidueOfLane = make_residue_table();

// Entry i is the lane holding residue i % 64; a 32-entry window starting at
// the phase shift gathers the residues already rotated into output order.
constexpr std::array<std::uint16_t, 2 * kMaxWordBits> make_lane_table() {
  std::array<std::uint16_t, 2 * kMaxWordBits> t{};
  for (unsigned l = 0; l < kMaxWordBits; ++l) {
    t[kResidueOfLane[l]] = static_cast<std::uint16_t>(l);
    t[kResidueOfLane[l] + kMaxWordBits] = static_cast<std::uint16_t>(l);
  }
  return t;
}
constexpr auto kLaneOfResidue = make_lane_table();

constexpr std::array<std::uint16_t, kMaxWordBits> make_residue_index() {
  std::array<std::uint16_t, kMaxWordBits> t{};
  for (unsigned l = 0; l < kMaxWordBits; ++l) t[l] = kResidueOfLane[l];
  return t;
}
alignas(64) constexpr auto kResidueIndex = make_residue_index();

// o[0..15] += v, widening 32-bit lanes
inline void add_widened(std::uint64_t* o, V v) {
  const V a = _mm512_cvtepu32_epi64(_mm512_castsi512_si256(v));
  const V b = _mm512_cvtepu32_epi64(_mm512_extracti64x4_epi64(v, 1));
  _mm512_storeu_si512(o, _mm512_add_epi64(_mm512_loadu_si512(o), a));
  _mm512_storeu_si512(o + 8, _mm512_add_epi64(_mm512_loadu_si512(o + 8), b));
}

class Avx512Counters {
 public:
  Avx512Counters() : c_{_mm512_setzero_si512(), _mm512_setzero_si512()} {}

  void add_a16(V a16) { add_scaled<4>(a16); }

  // sum over k of 2^k * popcount, one bitplane at a time
  void add_final(const AccumulatorSet<V>& acc) {
    add_scaled<3>(acc.a8);
    add_scaled<2>(acc.a4);
    add_scaled<1>(acc.a2);
    add_scaled<0>(acc.a1);
  }

  void add_tail(const TailCounters& t) {
    const V lo = _mm512_cvtepu8_epi16(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(t.data())));
    const V hi = _mm512_cvtepu8_epi16(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(t.data() + 32)));
    const V idx0 = _mm512_load_si512(kResidueIndex.data());
    const V idx1 = _mm512_load_si512(kResidueIndex.data() + 32);
    c_[0] = _mm512_add_epi16(c_[0], _mm512_permutex2var_epi16(lo, idx0, hi));
    c_[1] = _mm512_add_epi16(c_[1], _mm512_permutex2var_epi16(lo, idx1, hi));
  }

  void flush(CounterArray& out, WordWidth w, std::size_t phase_bytes) {
    if (out.width() != w) {
      CounterVectors<std::uint16_t> by_residue;
      store_rotated(by_residue.data(), 0);
      flush_fw(out, by_residue, w, phase_bytes);
      return;
    }
    alignas(64) std::uint16_t r[kMaxWordBits];
    store_rotated(r, 8 * phase_bytes % kMaxWordBits);
    const V a0 = _mm512_cvtepu16_epi32(_mm256_load_si256(reinterpret_cast<const __m256i*>(r)));
    const V a1 = _mm512_cvtepu16_epi32(_mm256_load_si256(reinterpret_cast<const __m256i*>(r + 16)));
    const V a2 = _mm512_cvtepu16_epi32(_mm256_load_si256(reinterpret_cast<const __m256i*>(r + 32)));
    const V a3 = _mm512_cvtepu16_epi32(_mm256_load_si256(reinterpret_cast<const __m256i*>(r + 48)));

    // entry i of the rotated residues goes to output i mod w
    std::uint64_t* o = out.counts().data();
    switch (w) {
      case WordWidth::w64:
        add_widened(o, a0);
        add_widened(o + 16, a1);
        add_widened(o + 32, a2);
        add_widened(o + 48, a3);
        break;
      case WordWidth::w32:
        add_widened(o, _mm512_add_epi32(a0, a2));
        add_widened(o + 16, _mm512_add_epi32(a1, a3));
        break;
      case WordWidth::w16:
        add_widened(o, _mm512_add_epi32(_mm512_add_epi32(a0, a1), _mm512_add_epi32(a2, a3)));
        break;
      case WordWidth::w8: {
        const V s = _mm512_add_epi32(_mm512_add_epi32(a0, a1), _mm512_add_epi32(a2, a3));
        const __m256i h = _mm256_add_epi32(_mm512_castsi512_si256(s), _mm512_extracti64x4_epi64(s, 1));
        _mm512_storeu_si512(o, _mm512_add_epi64(_mm512_loadu_si512(o), _mm512_cvtepu32_epi64(h)));
        break;
      }
    }
  }

 private:
  // c += popcount per residue << S, for S <= 4
  template <int S>
  void add_scaled(V v) {
    const V m1 = splat(0x5555555555555555u), m2 = splat(0x3333333333333333u);
    const V m4 = splat(0x0f0f0f0f0f0f0f0fu);
    const V m8 = _mm512_set1_epi16(0x00ff);

    // bits -> crumbs; lanes [e0+e2, e1+e3, o0+o2, o1+o3]
    const V e = _mm512_and_si512(v, m1);
    const V o = _mm512_and_si512(_mm512_srli_epi64(v, 1), m1);
    const V x = _mm512_add_epi64(_mm512_shuffle_i64x2(e, o, 0x44), _mm512_shuffle_i64x2(e, o, 0xee));

    // crumbs -> nibbles; lanes [el, ol, eh, oh]
    const V lo = _mm512_and_si512(x, m2);
    const V hi = _mm512_and_si512(_mm512_srli_epi64(x, 2), m2);
    const V y = _mm512_add_epi64(_mm512_shuffle_i64x2(lo, hi, 0x88), _mm512_shuffle_i64x2(lo, hi, 0xdd));

    // nibbles -> bytes, scaled; words in kWordResidue order
    const V lo4 = _mm512_slli_epi64(_mm512_and_si512(y, m4), S);
    const V hi4 = _mm512_slli_epi64(_mm512_and_si512(_mm512_srli_epi64(y, 4), m4), S);
    const V z = _mm512_add_epi64(_mm512_unpacklo_epi64(lo4, hi4), _mm512_unpackhi_epi64(lo4, hi4));

    c_[0] = _mm512_add_epi16(c_[0], _mm512_and_si512(z, m8));
    c_[1] = _mm512_add_epi16(c_[1], _mm512_srli_epi16(z, 8));
  }

  // r[i] = count of residue (i + shift) mod 64
  void store_rotated(std::uint16_t* r, std::size_t shift) {
    const V lo = _mm512_loadu_si512(kLaneOfResidue.data() + shift);
    const V hi = _mm512_loadu_si512(kLaneOfResidue.data() + shift + 32);
    _mm512_storeu_si512(r, _mm512_permutex2var_epi16(c_[0], lo, c_[1]));
    _mm512_storeu_si512(r + 32, _mm512_permutex2var_epi16(c_[0], hi, c_[1]));
    c_[0] = c_[1] = _mm512_setzero_si512();
  }

  V c_[2];
};

struct Avx512Kernel {
  using Vector = V;
  using Counters = Avx512Counters;
  using Adder = Avx512FullAdder;
  static constexpr std::size_t kBits = 512;

  static V load(const std::byte* p) { return _mm512_load_si512(p); }

  // Masked load from the aligned address below the input; the masked-off
  // bytes are neither read nor faulted on, and come back as zero.
  static HeadResult<V> head_load(InputView in) {
    constexpr std::size_t vb = kBits / 8;
    const std::size_t offset = head_offset(in, vb);
    const auto aligned = reinterpret_cast<const void*>(reinterpret_cast<std::uintptr_t>(in.data()) - offset);
    const __mmask64 keep = ~std::uint64_t{0} << offset;
    return {_mm512_maskz_loadu_epi8(keep, aligned), vb - offset, offset != 0};
  }

  // Each group of 64 input bits is used directly as a byte mask for a
  // merge-masked increment. Two accumulators keep consecutive groups
  // independent; together they still count at most kMaxTailGroups.
  static TailCounters tail_counts(std::span<const std::byte> bytes) {
    const V minus_one = _mm512_set1_epi8(-1);
    V t0 = _mm512_setzero_si512(), t1 = _mm512_setzero_si512();
    auto group_at = [&](std::size_t i) {
      std::uint64_t group;
      std::memcpy(&group, bytes.data() + i, kGroupBytes);
      return group;
    };
    std::size_t i = 0;
    for (; i + 2 * kGroupBytes <= bytes.size(); i += 2 * kGroupBytes) {
      t0 = _mm512_mask_sub_epi8(t0, group_at(i), t0, minus_one);
      t1 = _mm512_mask_sub_epi8(t1, group_at(i + kGroupBytes), t1, minus_one);
    }
    if (i + kGroupBytes <= bytes.size()) {
      t0 = _mm512_mask_sub_epi8(t0, group_at(i), t0, minus_one);
      i += kGroupBytes;
    }
    if (i < bytes.size()) t1 = _mm512_mask_sub_epi8(t1, load_partial_group(bytes, i), t1, minus_one);
    TailCounters out;
    _mm512_storeu_si512(out.data(), _mm512_add_epi8(t0, t1));
    return out;
  }
};

static_assert(Kernel<Avx512Kernel>);

}  // namespace

void count_avx512(InputView input, WordWidth w, CounterArray& counts) {
  run_pipeline<Avx512Kernel>(input, w, counts);
}

}  // namespace pospop::detail
