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

// Bit-parallel full adders and the two carry-save adder networks used by the
// counting pipeline. Everything here is positionwise: bit p of every output
// depends only on bit p of the inputs.

#pragma once

#include <span>

namespace pospop {

template <class V>
struct FullAdderResult {
  V carry;
  V sum;
};

/// Four bit vectors forming a 4-bit counter per bit position:
/// value(p) = 8*a8[p] + 4*a4[p] + 2*a2[p] + a1[p].
template <class V>
struct AccumulatorSet {
  V a8{};
  V a4{};
  V a2{};
  V a1{};

  friend constexpr bool operator==(const AccumulatorSet&, const AccumulatorSet&) = default;
};

template <class V>
struct SkimResult {
  V a16;
  AccumulatorSet<V> acc;
};

/// a + b + c = 2*carry + sum at every position. Two half adders joined by an
/// or; works on anything with &, ^ and |.
template <class V>
constexpr FullAdderResult<V> full_adder(const V& a, const V& b, const V& c) {
  const V s1 = a ^ b;
  return {(a & b) | (s1 & c), s1 ^ c};
}

struct BitwiseFullAdder {
  template <class V>
  constexpr FullAdderResult<V> operator()(const V& a, const V& b, const V& c) const {
    return full_adder(a, b, c);
  }
};

/// Compresses 15 equal-weight vectors into (a8, a4, a2, a1) using 11 full
/// adders on a critical path of 5.
template <class V, class Adder = BitwiseFullAdder>
constexpr AccumulatorSet<V> csa15(std::span<const V, 15> v, Adder&& fa = {}) {
  // weight 1 -> 5 sums, 5 carries
  const auto l0 = fa(v[0], v[1], v[2]);
  const auto l1 = fa(v[3], v[4], v[5]);
  const auto l2 = fa(v[6], v[7], v[8]);
  const auto l3 = fa(v[9], v[10], v[11]);
  const auto l4 = fa(v[12], v[13], v[14]);

  const auto m0 = fa(l0.sum, l1.sum, l2.sum);          // w1 -> w1, w2
  const auto m1 = fa(l0.carry, l1.carry, l2.carry);    // w2 -> w2, w4
  const auto ones = fa(m0.sum, l3.sum, l4.sum);        // a1 final
  const auto m2 = fa(m0.carry, m1.sum, l3.carry);      // w2 -> w2, w4
  const auto twos = fa(m2.sum, l4.carry, ones.carry);  // a2 final
  const auto fours = fa(m1.carry, m2.carry, twos.carry);

  return {fours.carry, fours.sum, twos.sum, ones.sum};
}

/// Adds 16 vectors to the accumulators and skims off the weight-16 vector.
/// 15 full adders; 16*a16 + value(acc') = value(acc) + popcount(inputs).
template <class V, class Adder = BitwiseFullAdder>
constexpr SkimResult<V> csa16_4(const AccumulatorSet<V>& acc, std::span<const V, 16> v,
                                Adder&& fa = {}) {
  const auto l0 = fa(acc.a1, v[0], v[1]);
  const auto l1 = fa(v[2], v[3], v[4]);
  const auto l2 = fa(v[5], v[6], v[7]);
  const auto l3 = fa(v[8], v[9], v[10]);
  const auto l4 = fa(v[11], v[12], v[13]);

  const auto m0 = fa(l0.sum, l1.sum, l2.sum);
  const auto m1 = fa(l3.sum, l4.sum, v[14]);
  const auto ones = fa(m0.sum, m1.sum, v[15]);

  // nine weight-2 vectors: five level-one carries, two level-two carries,
  // the final weight-1 carry and the incoming a2
  const auto t0 = fa(l0.carry, l1.carry, l2.carry);
  const auto t1 = fa(l3.carry, l4.carry, acc.a2);
  const auto t2 = fa(m0.carry, m1.carry, ones.carry);
  const auto twos = fa(t0.sum, t1.sum, t2.sum);

  const auto f0 = fa(t0.carry, t1.carry, t2.carry);
  const auto fours = fa(f0.sum, twos.carry, acc.a4);

  const auto eights = fa(f0.carry, fours.carry, acc.a8);

  return {eights.carry, {eights.sum, fours.sum, twos.sum, ones.sum}};
}

}  // namespace pospop
