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

// Shared test helpers: a small deterministic generator, guarded buffers,
// an independent bit-indexing oracle and instrumented building blocks.

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <vector>

#include "pospop/accumulate.hpp"
#include "pospop/core.hpp"
#include "pospop/csa.hpp"

namespace testing {

/// splitmix64
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15u);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9u;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebu;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  bool coin() { return next() & 1; }

  void fill(std::span<std::byte> out) {
    for (std::size_t i = 0; i < out.size(); i += 8) {
      const std::uint64_t x = next();
      std::memcpy(out.data() + i, &x, std::min<std::size_t>(8, out.size() - i));
    }
  }

  std::vector<std::byte> bytes(std::size_t n) {
    std::vector<std::byte> v(n);
    fill(v);
    return v;
  }

  pospop::WordWidth width() {
    static constexpr pospop::WordWidth kAll[] = {pospop::WordWidth::w8, pospop::WordWidth::w16,
                                                 pospop::WordWidth::w32, pospop::WordWidth::w64};
    return kAll[below(4)];
  }

 private:
  std::uint64_t state_;
};

inline constexpr pospop::WordWidth kAllWidths[] = {pospop::WordWidth::w8, pospop::WordWidth::w16,
                                                   pospop::WordWidth::w32, pospop::WordWidth::w64};

/// `length` bytes starting `offset` bytes past a 64-byte boundary, with
/// `guard` bytes of poison on both sides.
class GuardedBuffer {
 public:
  GuardedBuffer(std::size_t length, std::size_t offset, std::byte poison = std::byte{0xff},
                std::size_t guard = 256)
      : storage_(length + offset + 2 * guard + 64, poison) {
    const auto base = reinterpret_cast<std::uintptr_t>(storage_.data()) + guard;
    const std::size_t skip = guard + (64 - base % 64) % 64 + offset;
    data_ = storage_.data() + skip;
    length_ = length;
  }

  std::span<std::byte> bytes() { return {data_, length_}; }
  pospop::InputView view() const { return pospop::InputView(data_, length_); }

 private:
  std::vector<std::byte> storage_;
  std::byte* data_ = nullptr;
  std::size_t length_ = 0;
};

/// Independent oracle: indexes single bits of the byte array instead of
/// assembling words.
inline pospop::CounterArray bit_oracle(std::span<const std::byte> bytes, pospop::WordWidth w) {
  pospop::CounterArray c(w);
  const unsigned bits = pospop::bits_of(w);
  for (std::size_t bit = 0; bit < 8 * bytes.size(); ++bit) {
    const auto byte = std::to_integer<unsigned>(bytes[bit / 8]);
    if (byte >> (bit % 8) & 1) ++c[bit % bits];
  }
  return c;
}

inline std::uint64_t byte_popcount(std::span<const std::byte> bytes) {
  std::uint64_t n = 0;
  for (auto b : bytes) {
    for (unsigned x = std::to_integer<unsigned>(b); x != 0; x &= x - 1) ++n;
  }
  return n;
}

/// A 16-bit counter that refuses to wrap and remembers the largest value any
/// instance has held.
class Checked16 {
 public:
  constexpr Checked16() = default;
  explicit Checked16(unsigned v) : v_(check(v)) {}

  Checked16& operator+=(Checked16 o) {
    v_ = check(static_cast<std::uint32_t>(v_) + o.v_);
    return *this;
  }
  explicit operator std::uint64_t() const { return v_; }
  std::uint32_t value() const { return v_; }
  friend bool operator==(Checked16, Checked16) = default;

  static inline std::uint32_t high_water = 0;
  static inline std::uint64_t violations = 0;

 private:
  static std::uint32_t check(std::uint32_t v) {
    high_water = std::max(high_water, v);
    if (v > 0xffff) {
      ++violations;
      throw std::overflow_error("16-bit intermediate counter overflow");
    }
    return v;
  }

  std::uint32_t v_ = 0;
};

/// Full adder that counts its applications.
struct CountingAdder {
  static inline std::uint64_t calls = 0;

  template <class V>
  constexpr pospop::FullAdderResult<V> operator()(const V& a, const V& b, const V& c) const {
    ++calls;
    return pospop::full_adder(a, b, c);
  }
};

/// A single-bit "vector" that carries the number of full adders on its
/// longest path from the network inputs.
struct Traced {
  std::uint64_t bits = 0;
  unsigned depth = 0;
  friend bool operator==(const Traced&, const Traced&) = default;
};

struct TracingAdder {
  unsigned* applications;
  pospop::FullAdderResult<Traced> operator()(const Traced& a, const Traced& b, const Traced& c) const {
    ++*applications;
    const unsigned d = std::max({a.depth, b.depth, c.depth}) + 1;
    const auto r = pospop::full_adder(a.bits, b.bits, c.bits);
    return {{r.carry, d}, {r.sum, d}};
  }
};

/// value(p) = 8 a8 + 4 a4 + 2 a2 + a1 at bit p of a set of BitBlocks.
template <class Block>
unsigned value_at(const pospop::AccumulatorSet<Block>& acc, std::size_t p) {
  return 8u * acc.a8.test(p) + 4u * acc.a4.test(p) + 2u * acc.a2.test(p) + acc.a1.test(p);
}

template <class Block>
Block random_block(Rng& rng) {
  Block b;
  for (auto& w : b.w) w = rng.next();
  return b;
}

template <class Block>
pospop::AccumulatorSet<Block> random_acc(Rng& rng) {
  return {random_block<Block>(rng), random_block<Block>(rng), random_block<Block>(rng),
          random_block<Block>(rng)};
}

}  // namespace testing
