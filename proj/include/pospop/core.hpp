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
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace pospop {

/// Every kernel counts internally modulo this many bit positions and folds
/// down to the requested word width when flushing.
inline constexpr unsigned kMaxWordBits = 64;

enum class WordWidth : unsigned { w8 = 8, w16 = 16, w32 = 32, w64 = 64 };

constexpr unsigned bits_of(WordWidth w) noexcept { return static_cast<unsigned>(w); }
constexpr std::size_t bytes_of(WordWidth w) noexcept { return bits_of(w) / 8; }

/// Maps 8/16/32/64 to a WordWidth; anything else yields nullopt.
std::optional<WordWidth> word_width_from_bits(unsigned bits) noexcept;

enum class Errc {
  invalid_input,
  unknown_kernel,
  kernel_unavailable,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// A read-only byte buffer interpreted as a stream of little-endian words.
/// Bit position j of a word is its j-th least significant bit.
class InputView {
 public:
  constexpr InputView() = default;
  constexpr explicit InputView(std::span<const std::byte> bytes) : bytes_(bytes) {}
  InputView(const void* data, std::size_t size)
      : bytes_(static_cast<const std::byte*>(data), size) {}

  constexpr const std::byte* data() const noexcept { return bytes_.data(); }
  constexpr std::size_t size() const noexcept { return bytes_.size(); }
  constexpr bool empty() const noexcept { return bytes_.empty(); }
  constexpr std::span<const std::byte> bytes() const noexcept { return bytes_; }

  constexpr InputView subview(std::size_t offset, std::size_t count) const {
    return InputView(bytes_.subspan(offset, count));
  }
  constexpr InputView subview(std::size_t offset) const {
    return InputView(bytes_.subspan(offset));
  }

  constexpr bool word_complete(WordWidth w) const noexcept {
    return (bytes_.size() & (bytes_of(w) - 1)) == 0;
  }

 private:
  std::span<const std::byte> bytes_;
};

namespace detail {
[[noreturn]] void throw_word_incomplete(std::size_t size, WordWidth w);
}  // namespace detail

/// Throws Error(invalid_input) unless `input` holds a whole number of words.
inline void require_word_complete(InputView input, WordWidth w) {
  if (!input.word_complete(w)) detail::throw_word_incomplete(input.size(), w);
}

/// One 64-bit counter per bit position of a w-bit word.
class CounterArray {
 public:
  explicit CounterArray(WordWidth w) noexcept : width_(w) {}

  WordWidth width() const noexcept { return width_; }
  std::size_t size() const noexcept { return bits_of(width_); }

  std::uint64_t& operator[](std::size_t j) noexcept { return counts_[j]; }
  std::uint64_t operator[](std::size_t j) const noexcept { return counts_[j]; }

  std::span<std::uint64_t> counts() noexcept { return {counts_.data(), size()}; }
  std::span<const std::uint64_t> counts() const noexcept { return {counts_.data(), size()}; }

  auto begin() noexcept { return counts_.begin(); }
  auto end() noexcept { return counts_.begin() + static_cast<std::ptrdiff_t>(size()); }
  auto begin() const noexcept { return counts_.begin(); }
  auto end() const noexcept { return counts_.begin() + static_cast<std::ptrdiff_t>(size()); }

  void clear() noexcept { counts_.fill(0); }

  friend bool operator==(const CounterArray&, const CounterArray&) = default;

 private:
  WordWidth width_;
  std::array<std::uint64_t, kMaxWordBits> counts_{};
};

/// Reference positional population count: for every word and every bit j,
/// adds bit j of the word to counts[j]. `counts` is accumulated into.
void scalar_pospopcnt(InputView input, WordWidth w, CounterArray& counts);

std::uint64_t total_popcount_of(const CounterArray& counts) noexcept;

}  // namespace pospop
