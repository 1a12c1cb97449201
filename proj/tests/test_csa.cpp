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

#include <array>

#include "doctest.h"
#include "pospop/bit_block.hpp"
#include "pospop/csa.hpp"
#include "support.hpp"

using namespace pospop;
using testing::Rng;

namespace {

using B = BitBlock<2>;

template <std::size_t K>
unsigned ones_at(const std::array<B, K>& v, std::size_t p) {
  unsigned n = 0;
  for (const auto& x : v) n += x.test(p);
  return n;
}

}  // namespace

TEST_CASE("full adder: worked example") {
  const auto r = full_adder<unsigned>(0b1001, 0b1001, 0b0101);
  CHECK(r.carry == 0b1001);
  CHECK(r.sum == 0b0101);
  const auto z = full_adder<unsigned>(0, 0, 0);
  CHECK(z.carry == 0);
  CHECK(z.sum == 0);
}

TEST_CASE("full adder: exhaustive truth table") {
  for (unsigned a = 0; a < 2; ++a) {
    for (unsigned b = 0; b < 2; ++b) {
      for (unsigned c = 0; c < 2; ++c) {
        const auto r = full_adder(a, b, c);
        CHECK(r.sum == ((a + b + c) & 1));
        CHECK(r.carry == (a + b + c >= 2 ? 1u : 0u));
        CHECK(a + b + c == 2 * r.carry + r.sum);
      }
    }
  }
}

TEST_CASE("property: full adder conservation on random words") {
  Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t a = rng.next(), b = rng.next(), c = rng.next();
    const auto r = full_adder(a, b, c);
    for (unsigned p = 0; p < 64; ++p) {
      const unsigned in = (a >> p & 1) + (b >> p & 1) + (c >> p & 1);
      REQUIRE(in == 2 * (r.carry >> p & 1) + (r.sum >> p & 1));
    }
  }
}

TEST_CASE("csa15: all ones gives fifteen everywhere") {
  std::array<B, 15> v;
  v.fill(B::ones());
  const auto acc = csa15(std::span<const B, 15>(v));
  CHECK(acc.a8 == B::ones());
  CHECK(acc.a4 == B::ones());
  CHECK(acc.a2 == B::ones());
  CHECK(acc.a1 == B::ones());
}

TEST_CASE("csa15: a single input bit lands in a1") {
  std::array<B, 15> v{};
  v[0].set(77);
  const auto acc = csa15(std::span<const B, 15>(v));
  CHECK(acc.a1.test(77));
  CHECK(testing::value_at(acc, 77) == 1);
  for (std::size_t p = 0; p < B::kBits; ++p) {
    if (p != 77) CHECK(testing::value_at(acc, p) == 0);
  }
}

TEST_CASE("property: csa15 conservation") {
  Rng rng(22);
  for (int i = 0; i < 500; ++i) {
    std::array<B, 15> v;
    for (auto& x : v) x = testing::random_block<B>(rng);
    const auto acc = csa15(std::span<const B, 15>(v));
    for (std::size_t p = 0; p < B::kBits; ++p) REQUIRE(testing::value_at(acc, p) == ones_at(v, p));
  }
}

TEST_CASE("csa16_4: fifteen plus one skims sixteen") {
  AccumulatorSet<B> acc{B::ones(), B::ones(), B::ones(), B::ones()};
  std::array<B, 16> v{};
  v[9].set(3);
  const auto r = csa16_4(acc, std::span<const B, 16>(v));
  CHECK(r.a16.test(3));
  CHECK(testing::value_at(r.acc, 3) == 0);
  CHECK_FALSE(r.a16.test(4));
  CHECK(testing::value_at(r.acc, 4) == 15);
}

TEST_CASE("csa16_4: zeros stay zero") {
  const AccumulatorSet<B> acc{};
  const std::array<B, 16> v{};
  const auto r = csa16_4(acc, std::span<const B, 16>(v));
  CHECK(r.a16 == B{});
  CHECK(r.acc == AccumulatorSet<B>{});
}

TEST_CASE("property: csa16_4 conservation") {
  Rng rng(23);
  for (int i = 0; i < 500; ++i) {
    const auto acc = testing::random_acc<B>(rng);
    std::array<B, 16> v;
    for (auto& x : v) x = testing::random_block<B>(rng);
    const auto r = csa16_4(acc, std::span<const B, 16>(v));
    for (std::size_t p = 0; p < B::kBits; ++p) {
      REQUIRE(16 * r.a16.test(p) + testing::value_at(r.acc, p) ==
              testing::value_at(acc, p) + ones_at(v, p));
    }
  }
}

TEST_CASE("property: positional independence") {
  Rng rng(24);
  for (int i = 0; i < 200; ++i) {
    const auto acc = testing::random_acc<B>(rng);
    std::array<B, 16> v;
    for (auto& x : v) x = testing::random_block<B>(rng);
    const auto base = csa16_4(acc, std::span<const B, 16>(v));

    const std::size_t p = rng.below(B::kBits);
    auto flipped = v;
    const std::size_t k = rng.below(16);
    flipped[k].set(p, !flipped[k].test(p));
    const auto other = csa16_4(acc, std::span<const B, 16>(flipped));
    for (std::size_t q = 0; q < B::kBits; ++q) {
      if (q == p) continue;
      REQUIRE(other.a16.test(q) == base.a16.test(q));
      REQUIRE(testing::value_at(other.acc, q) == testing::value_at(base.acc, q));
    }
  }
}

TEST_CASE("network sizes and depth") {
  std::array<testing::Traced, 16> v{};
  unsigned applications = 0;
  testing::TracingAdder fa{&applications};

  const auto acc = csa15(std::span<const testing::Traced, 15>(v.data(), 15), fa);
  CHECK(applications == 11);
  CHECK(std::max({acc.a8.depth, acc.a4.depth, acc.a2.depth, acc.a1.depth}) <= 5);

  applications = 0;
  csa16_4(acc, std::span<const testing::Traced, 16>(v), fa);
  CHECK(applications == 15);
}
