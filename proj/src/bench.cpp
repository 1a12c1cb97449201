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

#include "pospop/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <new>
#include <random>

#if defined(__linux__)
#include <sched.h>
#endif

#include "perf_counters.hpp"
#include "pospop/baseline.hpp"

namespace pospop {
namespace {

bool always() noexcept { return true; }

struct AlignedDelete {
  void operator()(std::byte* p) const noexcept { ::operator delete[](p, std::align_val_t{64}); }
};
using Buffer = std::unique_ptr<std::byte[], AlignedDelete>;

Buffer make_buffer(std::size_t n, bool random_fill, std::uint64_t seed) {
  Buffer buf(static_cast<std::byte*>(::operator new[](std::max<std::size_t>(n, 1), std::align_val_t{64})));
  std::memset(buf.get(), 0, n);
  if (random_fill) {
    std::mt19937_64 rng(seed);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
      const std::uint64_t x = rng();
      std::memcpy(buf.get() + i, &x, 8);
    }
    const std::uint64_t x = rng();
    std::memcpy(buf.get() + i, &x, n - i);
  }
  return buf;
}

void pin_to_current_cpu() {
#if defined(__linux__)
  const int cpu = sched_getcpu();
  if (cpu < 0) return;
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(cpu, &set);
  sched_setaffinity(0, sizeof set, &set);
#endif
}

volatile std::uint64_t g_sink;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::vector<std::size_t> default_size_grid() {
  std::vector<std::size_t> sizes;
  for (unsigned i = 1; i <= 30; ++i) sizes.push_back(std::size_t{1} << i);
  for (unsigned i = 0; i <= 29; ++i) sizes.push_back(std::size_t{3} << i);
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

std::vector<std::size_t> default_size_grid(WordWidth w) {
  auto sizes = default_size_grid();
  std::erase_if(sizes, [&](std::size_t n) { return n % bytes_of(w) != 0; });
  return sizes;
}

std::vector<BenchTarget> bench_targets() {
  std::vector<BenchTarget> out;
  for (const auto& k : compiled_kernels()) out.push_back({std::string(k.name), k.count, k.available()});
  out.push_back({"scalar", &baseline_pospopcnt, always()});
  out.push_back({"roofline", &roofline_sum, always()});
  return out;
}

BenchTarget find_bench_target(std::string_view name) {
  for (auto& t : bench_targets()) {
    if (t.name != name) continue;
    if (!t.available) {
      throw Error(Errc::kernel_unavailable, "kernel '" + t.name + "' is not supported on this CPU");
    }
    return t;
  }
  throw Error(Errc::unknown_kernel, "unknown benchmark target '" + std::string(name) + "'");
}

void validate(const BenchConfig& cfg) {
  if (!(cfg.min_time > 0)) throw Error(Errc::invalid_input, "min_time must be positive");
  if (cfg.sizes.empty()) throw Error(Errc::invalid_input, "no sizes to benchmark");
  for (std::size_t n : cfg.sizes) {
    if (n % bytes_of(cfg.width) != 0) {
      throw Error(Errc::invalid_input, "size " + std::to_string(n) + " is not a whole number of " +
                                           std::to_string(bits_of(cfg.width)) + "-bit words");
    }
  }
}

std::optional<double> BenchResult::cycles_per_byte() const {
  if (!cycles) return std::nullopt;
  return static_cast<double>(*cycles) / bytes();
}

std::optional<double> BenchResult::instr_per_byte() const {
  if (!instructions) return std::nullopt;
  return static_cast<double>(*instructions) / bytes();
}

std::optional<double> BenchResult::ipc() const {
  if (!cycles || !instructions) return std::nullopt;
  return static_cast<double>(*instructions) / static_cast<double>(*cycles);
}

std::uint64_t next_iteration_count(std::uint64_t k, double t, double min_time) {
  if (t >= min_time) return k;
  if (!(t > 0)) return 2 * k;
  const double projected = static_cast<double>(k) * min_time / t;
  if (projected > 2.0 * static_cast<double>(k)) return 2 * k;
  // Close enough to aim for min_time directly, with a little headroom.
  return std::max(k + 1, static_cast<std::uint64_t>(std::ceil(1.05 * projected)));
}

std::vector<BenchResult> run_benchmark_one(const BenchConfig& cfg, const BenchTarget& target,
                                           std::size_t size, const BenchObserver& observer) {
  const Buffer buf = make_buffer(size, cfg.random_fill, cfg.seed);
  const InputView input(buf.get(), size);
  CounterArray counts(cfg.width);

  std::optional<detail::PerfCounters> perf;
  if (cfg.hardware_counters) {
    perf.emplace();
    if (!perf->available()) perf.reset();
  }

  std::vector<BenchResult> out;
  std::uint64_t k = 1;
  for (unsigned round = 1;; ++round) {
    using clock = std::chrono::steady_clock;
    if (perf) perf->start();
    const auto t0 = clock::now();
    for (std::uint64_t i = 0; i < k; ++i) target.count(input, cfg.width, counts);
    const auto t1 = clock::now();
    const auto reading = perf ? perf->stop() : std::nullopt;

    BenchResult r;
    r.kernel = target.name;
    r.width = cfg.width;
    r.size = size;
    r.iterations = k;
    r.seconds = std::chrono::duration<double>(t1 - t0).count();
    r.round = round;
    if (reading) {
      r.cycles = reading->cycles;
      r.instructions = reading->instructions;
    }
    r.final_round = round >= 2 && r.seconds >= cfg.min_time;

    if (r.final_round || cfg.record_all_rounds) {
      if (observer) observer(r);
      out.push_back(r);
    }
    if (r.final_round) break;
    k = next_iteration_count(k, r.seconds, cfg.min_time);
  }

  std::uint64_t sum = 0;
  for (auto c : counts) sum += c;
  g_sink = sum;
  return out;
}

std::vector<BenchResult> run_benchmark(const BenchConfig& cfg, const BenchObserver& observer) {
  validate(cfg);
  std::vector<BenchTarget> targets;
  if (cfg.kernels.empty()) {
    targets.push_back(find_bench_target(select_kernel().name));
  } else {
    for (const auto& name : cfg.kernels) targets.push_back(find_bench_target(name));
  }
  if (cfg.pin) pin_to_current_cpu();

  std::vector<BenchResult> out;
  for (const auto& target : targets) {
    for (std::size_t n : cfg.sizes) {
      auto rows = run_benchmark_one(cfg, target, n, observer);
      out.insert(out.end(), rows.begin(), rows.end());
    }
  }
  return out;
}

bool hardware_counters_available() {
  detail::PerfCounters probe;
  return probe.available();
}

void write_csv_header(std::ostream& os, bool with_counters) {
  os << "kernel,width,size_bytes,iterations,seconds,bytes_per_sec";
  if (with_counters) os << ",cycles_per_byte,instr_per_byte,ipc";
  os << '\n';
}

void write_csv_row(std::ostream& os, const BenchResult& r, bool with_counters) {
  os << r.kernel << ',' << bits_of(r.width) << ',' << r.size << ',' << r.iterations << ','
     << fmt(r.seconds) << ',' << fmt(r.bytes_per_sec());
  if (with_counters) {
    const auto opt = [](std::optional<double> x) { return x ? fmt(*x) : std::string(); };
    os << ',' << opt(r.cycles_per_byte()) << ',' << opt(r.instr_per_byte()) << ',' << opt(r.ipc());
  }
  os << '\n';
}

}  // namespace pospop
