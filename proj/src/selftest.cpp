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

#include "pospop/selftest.hpp"

#include <algorithm>
#include <cstring>
#include <random>
#include <sstream>

namespace pospop {
namespace {

constexpr std::size_t kMaxLength = 16384;
constexpr std::size_t kAlign = 64;

std::mt19937_64 case_rng(std::uint64_t seed, std::uint64_t index, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream};
  return std::mt19937_64(seq);
}

// A buffer whose data starts `offset` bytes past a 64-byte boundary.
class OffsetBuffer {
 public:
  OffsetBuffer(std::size_t length, std::size_t offset) : storage_(length + offset + 2 * kAlign) {
    const auto base = reinterpret_cast<std::uintptr_t>(storage_.data());
    const std::size_t skip = (kAlign - base % kAlign) % kAlign + offset;
    bytes_ = std::span<std::byte>(storage_.data() + skip, length);
  }
  std::span<std::byte> bytes() { return bytes_; }

 private:
  std::vector<std::byte> storage_;
  std::span<std::byte> bytes_;
};

bool kernel_matches(const KernelDescriptor& k, const FuzzCase& c, std::span<const std::byte> full) {
  OffsetBuffer buf(c.length, c.offset);
  std::memcpy(buf.bytes().data(), full.data(), c.length);
  const InputView in(buf.bytes());

  CounterArray expected(c.width);
  scalar_pospopcnt(in, c.width, expected);
  CounterArray got(c.width);
  try {
    k.count(in, c.width, got);
  } catch (const std::exception&) {
    return false;
  }
  return got == expected;
}

}  // namespace

FuzzCase FuzzCase::generate(std::uint64_t seed, std::uint64_t index) {
  auto rng = case_rng(seed, index, 0);
  static constexpr WordWidth kWidths[] = {WordWidth::w8, WordWidth::w16, WordWidth::w32, WordWidth::w64};
  FuzzCase c;
  c.seed = seed;
  c.index = index;
  c.width = kWidths[rng() % 4];
  // Half the cases stay below a few vectors to exercise the short path.
  const std::size_t limit = rng() % 2 == 0 ? 512 : kMaxLength;
  c.length = rng() % (limit + 1);
  c.length -= c.length % bytes_of(c.width);
  c.offset = rng() % kAlign;
  return c;
}

void fill_case_bytes(const FuzzCase& c, std::span<std::byte> out) {
  auto rng = case_rng(c.seed, c.index, 1);
  const unsigned density = rng() % 3;  // uniform, dense, sparse
  for (std::size_t i = 0; i < out.size(); i += 8) {
    std::uint64_t x = rng();
    if (density == 1) x |= rng();
    if (density == 2) x &= rng();
    std::memcpy(out.data() + i, &x, std::min<std::size_t>(8, out.size() - i));
  }
}

std::string SelftestReport::text() const {
  std::ostringstream os;
  os << "selftest seed=" << seed << " iterations=" << iterations << '\n';
  for (const auto& name : kernels) {
    const SelftestFailure* failure = nullptr;
    for (const auto& f : failures) {
      if (f.kernel == name) failure = &f;
    }
    if (failure == nullptr) {
      os << "  " << name << ": ok\n";
      continue;
    }
    const auto& r = failure->reproduction;
    os << "  " << name << ": MISMATCH kernel=" << name << " w=" << bits_of(r.width)
       << " length=" << r.length << " offset=" << r.offset << " seed=" << r.seed << " case=" << r.index
       << '\n';
  }
  os << (passed() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

SelftestReport run_selftest(std::uint64_t seed, std::uint64_t iterations,
                            std::span<const KernelDescriptor> kernels) {
  SelftestReport report;
  report.seed = seed;
  report.iterations = iterations;

  std::vector<const KernelDescriptor*> active;
  for (const auto& k : kernels) {
    if (!k.available()) continue;
    active.push_back(&k);
    report.kernels.emplace_back(k.name);
  }
  std::vector<bool> failed(active.size(), false);

  std::vector<std::byte> contents;
  for (std::uint64_t i = 0; i < iterations; ++i) {
    const FuzzCase c = FuzzCase::generate(seed, i);
    contents.assign(c.length, std::byte{0});
    fill_case_bytes(c, contents);

    for (std::size_t j = 0; j < active.size(); ++j) {
      if (failed[j] || kernel_matches(*active[j], c, contents)) continue;
      failed[j] = true;
      // Shortest failing prefix; the original length fails, so this ends.
      FuzzCase repro = c;
      for (std::size_t len = 0; len <= c.length; len += bytes_of(c.width)) {
        repro.length = len;
        if (!kernel_matches(*active[j], repro, contents)) break;
      }
      report.failures.push_back({report.kernels[j], repro});
    }
  }
  return report;
}

}  // namespace pospop
