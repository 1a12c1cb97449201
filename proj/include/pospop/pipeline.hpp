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

// The counting pipeline shared by every kernel:
//
//   short input (< 15 vectors)  -> count_short
//   otherwise                   -> head_load + 14 vectors -> csa15
//                                  while >= 16 vectors remain:
//                                    csa16_4, accumulate a16, check_and_flush
//                                  final accumulation, tail, flush
//
// A kernel supplies the vector type, its loads, a full adder, a tail counter
// and a counter store holding the 16-bit intermediate counters.

#pragma once

#include <array>
#include <concepts>
#include <cstddef>
#include <span>

#include "pospop/accumulate.hpp"
#include "pospop/core.hpp"
#include "pospop/csa.hpp"
#include "pospop/edge.hpp"

namespace pospop {

template <class S, class V>
concept CounterStore = std::default_initializable<S> && std::copyable<S> &&
    requires(S s, const V& v, const AccumulatorSet<V>& acc, const TailCounters& t,
             CounterArray& out, WordWidth w, std::size_t phase) {
      s.add_a16(v);
      s.add_final(acc);
      s.add_tail(t);
      s.flush(out, w, phase);
    };

template <class K>
concept Kernel = requires {
  typename K::Vector;
  typename K::Counters;
  typename K::Adder;
  { K::kBits } -> std::convertible_to<std::size_t>;
} && CounterStore<typename K::Counters, typename K::Vector> &&
    requires(const std::byte* p, InputView in, std::span<const std::byte> bytes) {
      { K::load(p) } -> std::same_as<typename K::Vector>;
      { K::head_load(in) } -> std::same_as<HeadResult<typename K::Vector>>;
      { K::tail_counts(bytes) } -> std::same_as<TailCounters>;
    };

template <class V, class Counters>
struct PipelineState {
  AccumulatorSet<V> acc{};
  Counters c{};
  OverflowTracker h{};
  std::size_t consumed = 0;  ///< bytes of the input absorbed into acc/c/out
  std::size_t phase = 0;     ///< stream offset of the input's first byte
};

/// Hooks called at every block boundary; used by instrumented tests.
struct NoObserver {
  template <class State>
  void after_initial_block(const State&, const CounterArray&) {}
  template <class State>
  void after_main_block(const State&, const CounterArray&) {}
};

template <class K>
inline constexpr std::size_t kVectorBytes = K::kBits / 8;

/// Inputs shorter than this many bytes take the short path.
template <class K>
inline constexpr std::size_t kShortPathLimit = 15 * kVectorBytes<K>;

template <Kernel K, class Observer = NoObserver>
  requires(15 * K::kBits / kMaxWordBits <= kMaxTailGroups)
void run_pipeline(InputView input, WordWidth w, CounterArray& out, Observer&& observer = {}) {
  using V = typename K::Vector;
  constexpr std::size_t vb = kVectorBytes<K>;

  require_word_complete(input, w);
  if (input.size() < kShortPathLimit<K>) {
    // under 15 vectors: at most 15 r / 64 groups, one tail call
    if (input.empty()) return;
    typename K::Counters c{};
    c.add_tail(K::tail_counts(input.bytes()));
    c.flush(out, w, 0);
    return;
  }

  typename K::Adder fa{};
  PipelineState<V, typename K::Counters> st;
  st.phase = head_offset(input, vb);

  const std::byte* p = input.data();
  const std::byte* const end = input.data() + input.size();

  std::array<V, 16> v;
  const HeadResult<V> head = K::head_load(input);
  v[0] = head.v0;
  p += head.consumed_bytes;
  for (std::size_t i = 1; i < 15; ++i, p += vb) v[i] = K::load(p);
  st.acc = csa15(std::span<const V, 15>(v.data(), 15), fa);
  st.consumed = static_cast<std::size_t>(p - input.data());
  observer.after_initial_block(st, out);

  while (static_cast<std::size_t>(end - p) >= 16 * vb) {
    for (std::size_t i = 0; i < 16; ++i, p += vb) v[i] = K::load(p);
    const SkimResult<V> r = csa16_4(st.acc, std::span<const V, 16>(v), fa);
    st.acc = r.acc;
    st.c.add_a16(r.a16);
    check_and_flush(st.h, st.c, out, w, K::kBits, st.phase);
    st.consumed = static_cast<std::size_t>(p - input.data());
    observer.after_main_block(st, out);
  }

  st.c.add_final(st.acc);
  st.c.add_tail(K::tail_counts({p, end}));
  st.c.flush(out, w, st.phase);
}

/// The generic kernel over BitBlock<N>: logical counters, portable loads and
/// tail. Instantiated by tests at several widths and counter types.
template <std::size_t N, class Counter = std::uint16_t, class FullAdder = BitwiseFullAdder>
struct GenericKernel {
  using Vector = BitBlock<N>;
  using Counters = LogicalCounters<N, Counter>;
  using Adder = FullAdder;
  static constexpr std::size_t kBits = Vector::kBits;

  static Vector load(const std::byte* p) noexcept { return Vector::load(p); }
  static HeadResult<Vector> head_load(InputView in) { return pospop::head_load<N>(in); }
  static TailCounters tail_counts(std::span<const std::byte> b) { return pospop::tail_counts(b); }
};

}  // namespace pospop
