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

// pospopcnt: count, bench, selftest and kernels subcommands.
// Exit status: 0 ok, 1 runtime failure, 2 usage or input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pospop/bench.hpp"
#include "pospop/core.hpp"
#include "pospop/kernels.hpp"
#include "pospop/selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

pospop::WordWidth parse_width(unsigned bits) {
  auto w = pospop::word_width_from_bits(bits);
  if (!w) throw UsageError("width must be one of 8, 16, 32, 64");
  return *w;
}

std::vector<std::byte> read_all(std::istream& in) {
  std::vector<std::byte> data;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const auto* p = reinterpret_cast<const std::byte*>(buf);
    data.insert(data.end(), p, p + in.gcount());
  }
  if (in.bad()) throw std::runtime_error("read error");
  return data;
}

// "4096", "64K", "1M", "1G"
std::size_t parse_size(const std::string& s) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("bad size '" + s + "'");
  }
  const std::string suffix = s.substr(pos);
  if (suffix == "K" || suffix == "k") v <<= 10;
  else if (suffix == "M" || suffix == "m") v <<= 20;
  else if (suffix == "G" || suffix == "g") v <<= 30;
  else if (!suffix.empty()) throw UsageError("bad size '" + s + "'");
  return static_cast<std::size_t>(v);
}

struct CountOptions {
  unsigned width = 16;
  std::optional<std::string> kernel;
  std::string format = "lines";
  std::string file;
};

int cmd_count(const CountOptions& o) {
  const auto w = parse_width(o.width);
  const auto& kernel = o.kernel ? pospop::select_kernel(*o.kernel) : pospop::default_kernel();

  std::vector<std::byte> data;
  if (o.file.empty() || o.file == "-") {
    data = read_all(std::cin);
  } else {
    std::ifstream f(o.file, std::ios::binary);
    if (!f) throw UsageError("cannot open '" + o.file + "'");
    data = read_all(f);
  }

  pospop::CounterArray counts(w);
  pospop::pospopcnt(pospop::InputView(std::span<const std::byte>(data)), w, counts, kernel);

  if (o.format == "csv") {
    for (std::size_t j = 0; j < counts.size(); ++j) std::cout << (j ? "," : "") << counts[j];
    std::cout << '\n';
  } else {
    for (auto c : counts) std::cout << c << '\n';
  }
  return kExitOk;
}

struct BenchOptions {
  std::vector<std::string> sizes;
  bool grid = false;
  std::vector<std::string> kernels;
  unsigned width = 16;
  double min_time = 2.0;
  bool random_fill = false;
  std::uint64_t seed = 1;
  std::string csv;
  bool pin = false;
  bool verbose = false;
  bool no_counters = false;
};

int cmd_bench(const BenchOptions& o) {
  pospop::BenchConfig cfg;
  cfg.width = parse_width(o.width);
  if (o.sizes.empty() || o.grid) {
    cfg.sizes = pospop::default_size_grid(cfg.width);
  } else {
    cfg.sizes.clear();
    for (const auto& s : o.sizes) cfg.sizes.push_back(parse_size(s));
  }
  cfg.kernels = o.kernels;
  cfg.min_time = o.min_time;
  cfg.random_fill = o.random_fill;
  cfg.seed = o.seed;
  cfg.pin = o.pin;
  cfg.hardware_counters = !o.no_counters;
  cfg.record_all_rounds = o.verbose;
  pospop::validate(cfg);

  std::ofstream file;
  if (!o.csv.empty()) {
    file.open(o.csv);
    if (!file) throw std::runtime_error("cannot write '" + o.csv + "'");
  }
  std::ostream& out = o.csv.empty() ? std::cout : file;

  const bool counters = cfg.hardware_counters && pospop::hardware_counters_available();
  pospop::write_csv_header(out, counters);
  pospop::run_benchmark(cfg, [&](const pospop::BenchResult& r) {
    if (!r.final_round) {
      std::cerr << "round " << r.round << ' ' << r.kernel << " n=" << r.size << " k=" << r.iterations
                << " t=" << r.seconds << '\n';
      return;
    }
    pospop::write_csv_row(out, r, counters);
    out.flush();
  });
  return kExitOk;
}

int cmd_selftest(std::uint64_t seed, std::uint64_t iterations) {
  const auto report = pospop::run_selftest(seed, iterations);
  std::cout << report.text();
  return report.passed() ? kExitOk : kExitFailure;
}

int cmd_kernels() {
  const auto* chosen = &pospop::select_kernel();
  try {
    chosen = &pospop::default_kernel();
  } catch (const pospop::Error&) {
  }
  for (const auto& s : pospop::list_kernels()) {
    std::cout << s.kernel->name << " r=" << s.kernel->vector_bits << ' '
              << (s.available ? "available" : "unavailable") << (s.kernel == chosen ? " default" : "")
              << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positional population count"};
  app.require_subcommand(1);

  CountOptions count;
  auto* c = app.add_subcommand("count", "Count set bits per position of each word");
  c->add_option("--width,-w", count.width, "Word width in bits (8, 16, 32, 64)");
  c->add_option("--kernel,-k", count.kernel, "Kernel name (default: widest available)");
  c->add_option("--format", count.format, "Output format")->check(CLI::IsMember({"lines", "csv"}));
  c->add_option("file", count.file, "Input file (default: stdin)");

  BenchOptions bench;
  auto* b = app.add_subcommand("bench", "Measure throughput and print CSV");
  auto* sizes = b->add_option("--sizes", bench.sizes, "Sizes in bytes (suffix K, M, G)")->delimiter(',');
  b->add_flag("--grid", bench.grid, "Use the default geometric size grid")->excludes(sizes);
  b->add_option("--kernels", bench.kernels, "Kernels, plus 'scalar' and 'roofline'")->delimiter(',');
  b->add_option("--width,-w", bench.width, "Word width in bits");
  b->add_option("--min-time", bench.min_time, "Minimum seconds per reported round");
  b->add_flag("--random-fill", bench.random_fill, "Fill buffers with random bytes instead of zeros");
  b->add_option("--seed", bench.seed, "Seed for --random-fill");
  b->add_option("--csv", bench.csv, "Write CSV to this file instead of stdout");
  b->add_flag("--pin", bench.pin, "Pin the process to its current CPU");
  b->add_flag("--verbose,-v", bench.verbose, "Report every round on stderr");
  b->add_flag("--no-counters", bench.no_counters, "Do not read hardware counters");

  std::uint64_t seed = 1;
  std::uint64_t iterations = 1000;
  auto* s = app.add_subcommand("selftest", "Compare every kernel with the scalar reference");
  s->add_option("--seed", seed, "Random seed");
  s->add_option("--iterations", iterations, "Number of random cases");

  auto* k = app.add_subcommand("kernels", "List compiled kernels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c->parsed()) return cmd_count(count);
    if (b->parsed()) return cmd_bench(bench);
    if (s->parsed()) return cmd_selftest(seed, iterations);
    if (k->parsed()) return cmd_kernels();
  } catch (const UsageError& e) {
    std::cerr << "pospopcnt: " << e.what() << '\n';
    return kExitUsage;
  } catch (const pospop::Error& e) {
    std::cerr << "pospopcnt: " << e.what() << '\n';
    return e.code() == pospop::Errc::kernel_unavailable ? kExitFailure : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "pospopcnt: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
