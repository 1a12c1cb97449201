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

// r = 256 kernel, compiled with -mavx2. The kernel types sit in an anonymous
// namespace so the pipeline instantiated over them stays local to this file.

#include <immintrin.h>

#include <array>
#include <cstdint>
#include <cstring>

#include "kernel_entry.hpp"
#include "pospop/pipeline.hpp"

namespace pospop::detail {
namespace {

using V = __m256i;

inline V splat(std::uint64_t x) { return _mm256_set1_epi64x(static_cast<long long>(x)); }

/// bits of `a` where `mask` is set, bits of `b` elsewhere
inline V select(V mask, V a, V b) {
  return _mm256_or_si256(_mm256_and_si256(mask, a), _mm256_andnot_si256(mask, b));
}

struct Avx2FullAdder {
  // five gates, critical path of three
  FullAdderResult<V> operator()(V a, V b, V c) const {
    const V c1 = _mm256_and_si256(a, b);
    const V s1 = _mm256_xor_si256(a, b);
    const V t = _mm256_and_si256(s1, c);
    return {_mm256_or_si256(c1, t), _mm256_xor_si256(s1, c)};
  }
};

// Counter vector m, 64-bit word j, 16-bit lane q counts residue
// 16q + 4m + {0, 2, 1, 3}[j].


class Avx2Counters {
 public:
  Avx2Counters() {
    for (int m = 0; m < 4; ++m) c_[m] = tail_[m] = _mm256_setzero_si256();
  }

  void add_a16(V a16) {
    const V m1 = splat(0x5555555555555555u), m2 = splat(0x3333333333333333u);
    const V m4hi = _mm256_set1_epi16(0x00f0);

    // bits -> crumbs, fold the 128-bit halves: [e0+e2, e1+e3, o0+o2, o1+o3]
    const V e = _mm256_and_si256(a16, m1);
    const V o = _mm256_and_si256(_mm256_srli_epi64(a16, 1), m1);
    const V x = _mm256_add_epi64(_mm256_permute2x128_si256(e, o, 0x20),
                                 _mm256_permute2x128_si256(e, o, 0x31));

    // crumbs -> nibbles, fold neighbouring words: [el, eh, ol, oh]
    const V lo = _mm256_and_si256(x, m2);
    const V hi = _mm256_and_si256(_mm256_srli_epi64(x, 2), m2);
    const V y = _mm256_add_epi64(_mm256_unpacklo_epi64(lo, hi), _mm256_unpackhi_epi64(lo, hi));

    // zero-extend nibble m of every 16-bit lane, pre-scaled by 16
    c_[0] = _mm256_add_epi16(c_[0], _mm256_and_si256(_mm256_slli_epi64(y, 4), m4hi));
    c_[1] = _mm256_add_epi16(c_[1], _mm256_and_si256(y, m4hi));
    c_[2] = _mm256_add_epi16(c_[2], _mm256_and_si256(_mm256_srli_epi64(y, 4), m4hi));
    c_[3] = _mm256_add_epi16(c_[3], _mm256_and_si256(_mm256_srli_epi64(y, 8), m4hi));
  }

  void add_final(const AccumulatorSet<V>& acc) {
    const V m1 = splat(0x5555555555555555u), m2 = splat(0x3333333333333333u);
    const V m4 = splat(0x0f0f0f0f0f0f0f0fu);
    const V m8 = _mm256_set1_epi16(0x00ff);

    const V b12l = select(m1, acc.a1, _mm256_slli_epi64(acc.a2, 1));
    const V b12h = select(m1, _mm256_srli_epi64(acc.a1, 1), acc.a2);
    const V b48l = select(m1, acc.a4, _mm256_slli_epi64(acc.a8, 1));
    const V b48h = select(m1, _mm256_srli_epi64(acc.a4, 1), acc.a8);
    const V planes[4] = {
        select(m2, b12l, _mm256_slli_epi64(b48l, 2)),
        select(m2, b12h, _mm256_slli_epi64(b48h, 2)),
        select(m2, _mm256_srli_epi64(b12l, 2), b48l),
        select(m2, _mm256_srli_epi64(b12h, 2), b48h),
    };

    // per plane: widen nibbles to bytes and sum all four words, leaving
    // [lo, lo, hi, hi]
    V sums[4];
    for (int x = 0; x < 4; ++x) {
      const V lo = _mm256_and_si256(planes[x], m4);
      const V hi = _mm256_and_si256(_mm256_srli_epi64(planes[x], 4), m4);
      const V u = _mm256_add_epi64(_mm256_permute2x128_si256(lo, hi, 0x20),
                                   _mm256_permute2x128_si256(lo, hi, 0x31));
      sums[x] = _mm256_add_epi64(u, _mm256_shuffle_epi32(u, 0x4e));
    }

    // restore the counter layout: [lo0, lo2, lo1, lo3] and [hi0, hi2, hi1, hi3]
    const V t02 = _mm256_blend_epi32(sums[0], sums[2], 0xcc);
    const V t13 = _mm256_blend_epi32(sums[1], sums[3], 0xcc);
    const V lo = _mm256_permute2x128_si256(t02, t13, 0x20);
    const V hi = _mm256_permute2x128_si256(t02, t13, 0x31);

    c_[0] = _mm256_add_epi16(c_[0], _mm256_and_si256(lo, m8));
    c_[1] = _mm256_add_epi16(c_[1], _mm256_and_si256(hi, m8));
    c_[2] = _mm256_add_epi16(c_[2], _mm256_srli_epi16(lo, 8));
    c_[3] = _mm256_add_epi16(c_[3], _mm256_srli_epi16(hi, 8));
  }

  // Tail counts stay in residue order until the next flush.
  void add_tail(const TailCounters& t) {
    for (int q = 0; q < 4; ++q) {
      const __m128i b = _mm_loadu_si128(reinterpret_cast<const __m128i*>(t.data() + 16 * q));
      tail_[q] = _mm256_add_epi16(tail_[q], _mm256_cvtepu8_epi16(b));
    }
  }

  void flush(CounterArray& out, WordWidth w, std::size_t phase_bytes) {
    V t[4];
    by_residue(t);
    if (out.width() != w) {
      alignas(32) CounterVectors<std::uint16_t> c;
      for (int q = 0; q < 4; ++q) _mm256_store_si256(reinterpret_cast<V*>(c.data() + 16 * q), t[q]);
      flush_fw(out, c, w, phase_bytes);
      return;
    }

    // the shift is a multiple of 8 residues, i.e. of 128-bit halves
    const unsigned s = static_cast<unsigned>(phase_bytes % 8);
    V rot[4];
    for (unsigned k = 0; k < 4; ++k) {
      const unsigned a = (k + s / 2) & 3;
      rot[k] = s % 2 == 0 ? t[a] : _mm256_permute2x128_si256(t[a], t[(a + 1) & 3], 0x21);
    }

    // e[n] holds rotated residues 8n..8n+7 as 32-bit lanes
    V e[8];
    for (int k = 0; k < 4; ++k) {
      e[2 * k] = _mm256_cvtepu16_epi32(_mm256_castsi256_si128(rot[k]));
      e[2 * k + 1] = _mm256_cvtepu16_epi32(_mm256_extracti128_si256(rot[k], 1));
    }
    const unsigned groups = bits_of(w) / 8;
    for (unsigned n = groups; n < 8; ++n) e[n % groups] = _mm256_add_epi32(e[n % groups], e[n]);

    std::uint64_t* o = out.counts().data();
    for (unsigned n = 0; n < groups; ++n) {
      const V lo = _mm256_cvtepu32_epi64(_mm256_castsi256_si128(e[n]));
      const V hi = _mm256_cvtepu32_epi64(_mm256_extracti128_si256(e[n], 1));
      auto* p = reinterpret_cast<V*>(o + 8 * n);
      _mm256_storeu_si256(p, _mm256_add_epi64(_mm256_loadu_si256(p), lo));
      _mm256_storeu_si256(p + 1, _mm256_add_epi64(_mm256_loadu_si256(p + 1), hi));
    }
  }

 private:
  // t[q] lane k = count of residue 16q + k; clears the counters
  void by_residue(V* t) {
    // per vector: words to [j0, j2, j1, j3], then 32-bit pairs so that
    // 64-bit chunk q holds lane q of words j0, j2, j1, j3
    const V pairs = _mm256_setr_epi8(0, 1, 8, 9, 2, 3, 10, 11, 4, 5, 12, 13, 6, 7, 14, 15,
                                     0, 1, 8, 9, 2, 3, 10, 11, 4, 5, 12, 13, 6, 7, 14, 15);
    const V merge = _mm256_setr_epi32(0, 4, 1, 5, 2, 6, 3, 7);
    V c[4];
    for (int m = 0; m < 4; ++m) {
      const V x = _mm256_shuffle_epi8(_mm256_permute4x64_epi64(c_[m], 0xd8), pairs);
      c[m] = _mm256_permutevar8x32_epi32(x, merge);
      c_[m] = _mm256_setzero_si256();
    }
    // 4x4 transpose of 64-bit chunks
    const V u0 = _mm256_unpacklo_epi64(c[0], c[1]), u1 = _mm256_unpackhi_epi64(c[0], c[1]);
    const V u2 = _mm256_unpacklo_epi64(c[2], c[3]), u3 = _mm256_unpackhi_epi64(c[2], c[3]);
    t[0] = _mm256_permute2x128_si256(u0, u2, 0x20);
    t[1] = _mm256_permute2x128_si256(u1, u3, 0x20);
    t[2] = _mm256_permute2x128_si256(u0, u2, 0x31);
    t[3] = _mm256_permute2x128_si256(u1, u3, 0x31);
    for (int q = 0; q < 4; ++q) {
      t[q] = _mm256_add_epi16(t[q], tail_[q]);
      tail_[q] = _mm256_setzero_si256();
    }
  }

  V c_[4];
  V tail_[4];
};

struct Avx2Kernel {
  using Vector = V;
  using Counters = Avx2Counters;
  using Adder = Avx2FullAdder;
  static constexpr std::size_t kBits = 256;

  static V load(const std::byte* p) { return _mm256_load_si256(reinterpret_cast<const V*>(p)); }

  static HeadResult<V> head_load(InputView in) {
    constexpr std::size_t vb = kBits / 8;
    const std::size_t offset = head_offset(in, vb);
    const std::size_t take = std::min(vb - offset, in.size());
    alignas(32) std::byte scratch[2 * vb] = {};
    if (in.size() >= vb) {
      // a full unaligned load from the input; the bytes that land past the
      // first vector are dropped
      _mm256_storeu_si256(reinterpret_cast<V*>(scratch + offset), _mm256_loadu_si256(reinterpret_cast<const V*>(in.data())));
    } else {
      std::memcpy(scratch + offset, in.data(), take);
    }
    return {_mm256_load_si256(reinterpret_cast<const V*>(scratch)), take, offset != 0};
  }

  // Every input byte is replicated into eight counter bytes, masked down to
  // one bit each, compared against the mask and subtracted (set bits give -1).
  static TailCounters tail_counts(std::span<const std::byte> bytes) {
    const V isolate = splat(0x8040201008040201u);
    const V spread_lo = _mm256_setr_epi64x(0x0000000000000000, 0x0101010101010101,
                                           0x0202020202020202, 0x0303030303030303);
    const V spread_hi = _mm256_setr_epi64x(0x0404040404040404, 0x0505050505050505,
                                           0x0606060606060606, 0x0707070707070707);
    V lo = _mm256_setzero_si256(), hi = _mm256_setzero_si256();

    auto count_group = [&](std::uint64_t group) {
      const V g = splat(group);
      const V blo = _mm256_and_si256(_mm256_shuffle_epi8(g, spread_lo), isolate);
      const V bhi = _mm256_and_si256(_mm256_shuffle_epi8(g, spread_hi), isolate);
      lo = _mm256_sub_epi8(lo, _mm256_cmpeq_epi8(blo, isolate));
      hi = _mm256_sub_epi8(hi, _mm256_cmpeq_epi8(bhi, isolate));
    };

    std::size_t i = 0;
    for (; i + kGroupBytes <= bytes.size(); i += kGroupBytes) {
      std::uint64_t group;
      std::memcpy(&group, bytes.data() + i, kGroupBytes);
      count_group(group);
    }
    if (i < bytes.size()) count_group(load_partial_group(bytes, i));

    TailCounters t;
    _mm256_storeu_si256(reinterpret_cast<V*>(t.data()), lo);
    _mm256_storeu_si256(reinterpret_cast<V*>(t.data() + 32), hi);
    return t;
  }
};

static_assert(Kernel<Avx2Kernel>);

}  // namespace

void count_avx2(InputView input, WordWidth w, CounterArray& counts) {
  run_pipeline<Avx2Kernel>(input, w, counts);
}

}  // namespace pospop::detail
