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

// Throughput harness. Each (target, size) pair is timed in rounds of k
// back-to-back calls on the same buffer and counter array; k grows until a
// round lasts at least min_time, and at least two rounds always run.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pospop/core.hpp"
#include "pospop/kernels.hpp"

namespace pospop {

/// 2^i for i = 1..30 and 3 * 2^i for i = 0..29, ascending.
std::vector<std::size_t> default_size_grid();

/// default_size_grid() without the sizes that are not a whole number of
/// w-bit words.
std::vector<std::size_t> default_size_grid(WordWidth w);

/// Something the harness can time: a registry kernel, the scalar baseline
/// ("scalar") or the memory roofline ("roofline").
struct BenchTarget {
  std::string name;
  CountFn count;
  bool available;
};

/// Every benchmarkable target, registry kernels first.
std::vector<BenchTarget> bench_targets();

/// Throws Error(unknown_kernel / kernel_unavailable) like select_kernel.
BenchTarget find_bench_target(std::string_view name);

struct BenchConfig {
  std::vector<std::size_t> sizes = default_size_grid(WordWidth::w16);
  std::vector<std::string> kernels;  ///< empty: widest available kernel
  WordWidth width = WordWidth::w16;
  double min_time = 2.0;              ///< seconds
  bool random_fill = false;
  std::uint64_t seed = 1;             ///< for random_fill
  bool pin = false;                   ///< pin to the current CPU
  bool hardware_counters = true;      ///< use them if the OS allows
  bool record_all_rounds = false;     ///< report every round, not only the last
};

/// Throws Error(invalid_input) for a non-positive min_time, an empty size
/// list or a size that is not word-complete.
void validate(const BenchConfig& cfg);

struct BenchResult {
  std::string kernel;
  WordWidth width = WordWidth::w16;
  std::size_t size = 0;        ///< n, bytes
  std::uint64_t iterations = 0;  ///< k
  double seconds = 0;          ///< t
  unsigned round = 0;          ///< 1-based
  bool final_round = true;
  std::optional<std::uint64_t> cycles;
  std::optional<std::uint64_t> instructions;

  double bytes() const noexcept { return static_cast<double>(size * iterations); }
  double bytes_per_sec() const noexcept { return bytes() / seconds; }
  std::optional<double> cycles_per_byte() const;
  std::optional<double> instr_per_byte() const;
  std::optional<double> ipc() const;
};

/// Iteration count for the round after one of k iterations took t seconds.
std::uint64_t next_iteration_count(std::uint64_t k, double t, double min_time);

using BenchObserver = std::function<void(const BenchResult&)>;

/// Runs every (kernel, size) pair of `cfg` in order. Results, and calls to
/// `observer`, cover final rounds only unless cfg.record_all_rounds is set.
std::vector<BenchResult> run_benchmark(const BenchConfig& cfg, const BenchObserver& observer = {});

/// Runs a single pair with an explicit count function. Mainly for tests.
std::vector<BenchResult> run_benchmark_one(const BenchConfig& cfg, const BenchTarget& target,
                                           std::size_t size, const BenchObserver& observer = {});

/// Whether this process can read cycle and instruction counters.
bool hardware_counters_available();

void write_csv_header(std::ostream& os, bool with_counters);
/// Counter columns are written only when with_counters is set; they are
/// left empty for a row without counter readings.
void write_csv_row(std::ostream& os, const BenchResult& r, bool with_counters);

}  // namespace pospop
