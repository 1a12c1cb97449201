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

#include "pospop/accumulate.hpp"

namespace pospop {
namespace {

// Folding modulo W commutes with the phase rotation, so fold first and
// rotate the W sums afterwards.
template <unsigned W>
void fold_into(CounterArray& out, const std::uint32_t* c, unsigned shift) {
  std::uint64_t twice[2 * W] = {};
  for (unsigned base = 0; base < kMaxWordBits; base += W) {
    for (unsigned j = 0; j < W; ++j) twice[j] += c[base + j];
  }
  for (unsigned j = 0; j < W; ++j) twice[W + j] = twice[j];
  const std::uint64_t* rotated = twice + shift % W;
  for (unsigned j = 0; j < W; ++j) out[j] += rotated[j];
}

}  // namespace

void flush_residues(CounterArray& out, std::span<const std::uint32_t, kMaxWordBits> c,
                    std::size_t phase_bytes) {
  // output j takes residue j + shift (mod 64)
  const unsigned shift = static_cast<unsigned>(8 * phase_bytes % kMaxWordBits);
  switch (out.width()) {
    case WordWidth::w8: fold_into<8>(out, c.data(), shift); break;
    case WordWidth::w16: fold_into<16>(out, c.data(), shift); break;
    case WordWidth::w32: fold_into<32>(out, c.data(), shift); break;
    case WordWidth::w64: fold_into<64>(out, c.data(), shift); break;
  }
}

}  // namespace pospop
