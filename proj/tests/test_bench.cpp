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

#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "pospop/bench.hpp"
#include "pospop/selftest.hpp"
#include "support.hpp"

using namespace pospop;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

bool always_true() noexcept { return true; }

// scalar, except that it miscounts once the input reaches 100 bytes
void faulty_count(InputView in, WordWidth w, CounterArray& c) {
  scalar_pospopcnt(in, w, c);
  if (in.size() >= 100) c[0] += 1;
}

void throwing_count(InputView, WordWidth, CounterArray&) { throw std::runtime_error("boom"); }

}  // namespace

TEST_CASE("next_iteration_count") {
  CHECK(next_iteration_count(10, 2.5, 2.0) == 10);
  CHECK(next_iteration_count(10, 0.0, 2.0) == 20);
  CHECK(next_iteration_count(10, 0.1, 2.0) == 20);   // far off: double
  CHECK(next_iteration_count(10, 1.6, 2.0) == 14);   // ceil(1.05 * 12.5)
  CHECK(next_iteration_count(1000, 1.99, 2.0) == 1056);
  CHECK(next_iteration_count(1, 1.99, 2.0) == 2);
  for (std::uint64_t k : {1, 7, 1000}) {
    for (double t : {0.0, 0.001, 0.5, 1.0, 1.9}) {
      const auto next = next_iteration_count(k, t, 2.0);
      CHECK(next > k);
      CHECK(next <= 2 * k + k / 10 + 1);
    }
  }
}

TEST_CASE("default size grid") {
  const auto g = default_size_grid();
  CHECK(g.size() == 60);
  CHECK(g.front() == 2);
  CHECK(g.back() == 3 * (std::size_t{1} << 29));
  CHECK(std::find(g.begin(), g.end(), std::size_t{1} << 30) != g.end());
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(std::find(g.begin(), g.end(), 3 * (std::size_t{1} << 29)) != g.end());
  CHECK(std::find(g.begin(), g.end(), 4096) != g.end());

  const auto g16 = default_size_grid(WordWidth::w16);
  for (auto n : g16) CHECK(n % 2 == 0);
  CHECK(std::find(g16.begin(), g16.end(), 6) != g16.end());
  CHECK(std::find(g16.begin(), g16.end(), 3) == g16.end());
  CHECK(default_size_grid(WordWidth::w8) == g);
}

TEST_CASE("bench config validation") {
  BenchConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.min_time = 0;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg.min_time = 1;
  cfg.sizes = {};
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg.sizes = {6};
  cfg.width = WordWidth::w32;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg.width = WordWidth::w16;
  CHECK_NOTHROW(validate(cfg));

  cfg.kernels = {"no-such-kernel"};
  try {
    run_benchmark(cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unknown_kernel);
  }
}

TEST_CASE("bench targets include the references") {
  const auto t = bench_targets();
  auto has = [&](std::string_view n) {
    return std::any_of(t.begin(), t.end(), [&](const BenchTarget& b) { return b.name == n; });
  };
  CHECK(has("portable"));
  CHECK(has("scalar"));
  CHECK(has("roofline"));
  CHECK(find_bench_target("scalar").available);
}

TEST_CASE("bench harness: rounds, timing and CSV identities") {
  BenchConfig cfg;
  cfg.sizes = {64, 4096};
  cfg.kernels = {"portable", "scalar"};
  cfg.min_time = 0.01;
  cfg.record_all_rounds = true;
  cfg.random_fill = true;

  unsigned observed = 0;
  const auto rows = run_benchmark(cfg, [&](const BenchResult&) { ++observed; });
  CHECK(observed == rows.size());

  std::ostringstream csv;
  write_csv_header(csv, true);
  for (const auto& r : rows) write_csv_row(csv, r, true);

  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "kernel,width,size_bytes,iterations,seconds,bytes_per_sec,cycles_per_byte,instr_per_byte,ipc");

  std::size_t finals = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    REQUIRE(std::getline(in, line));
    const auto f = split(line, ',');
    REQUIRE(f.size() == 9);
    CHECK(f[0] == r.kernel);
    CHECK(f[1] == "16");
    const std::size_t n = std::stoull(f[2]);
    const std::uint64_t k = std::stoull(f[3]);
    const double t = std::stod(f[4]);
    const double bps = std::stod(f[5]);
    CHECK(k >= 1);
    CHECK(t == r.seconds);
    CHECK(bps == static_cast<double>(n * k) / t);
    if (r.cycles) {
      CHECK(std::stod(f[6]) == static_cast<double>(*r.cycles) / static_cast<double>(n * k));
    } else {
      CHECK(f[6].empty());
    }
    if (r.final_round) {
      ++finals;
      CHECK(r.round >= 2);
      CHECK(t >= cfg.min_time);
    }
  }
  CHECK(finals == 4);

  // each final row follows its earlier rounds
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].round == 1) CHECK_FALSE(rows[i].final_round);
    if (i > 0 && rows[i].round > 1) CHECK(rows[i].iterations >= rows[i - 1].iterations);
  }
}

TEST_CASE("bench harness: only final rounds by default") {
  BenchConfig cfg;
  cfg.sizes = {256};
  cfg.kernels = {"portable"};
  cfg.min_time = 0.005;
  const auto rows = run_benchmark(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].final_round);
  CHECK(rows[0].round >= 2);
  CHECK(rows[0].seconds >= cfg.min_time);
}

TEST_CASE("derived metrics") {
  BenchResult r;
  r.size = 1000;
  r.iterations = 4;
  r.seconds = 0.5;
  CHECK(r.bytes() == 4000);
  CHECK(r.bytes_per_sec() == 8000);
  CHECK_FALSE(r.cycles_per_byte().has_value());
  CHECK_FALSE(r.ipc().has_value());
  r.cycles = 2000;
  r.instructions = 6000;
  CHECK(*r.cycles_per_byte() == 0.5);
  CHECK(*r.instr_per_byte() == 1.5);
  CHECK(*r.ipc() == 3.0);

  std::ostringstream plain;
  write_csv_row(plain, r, false);
  CHECK(split(plain.str().substr(0, plain.str().size() - 1), ',').size() == 6);
}

TEST_CASE("fuzz cases are deterministic and well formed") {
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto a = FuzzCase::generate(9, i);
    const auto b = FuzzCase::generate(9, i);
    CHECK(a.length == b.length);
    CHECK(a.offset == b.offset);
    CHECK(a.width == b.width);
    CHECK(a.length % bytes_of(a.width) == 0);
    CHECK(a.length <= 16384);
    CHECK(a.offset < 64);
  }
  const auto c = FuzzCase::generate(9, 3);
  std::vector<std::byte> full(c.length), prefix(c.length / 2);
  fill_case_bytes(c, full);
  fill_case_bytes(c, prefix);
  CHECK(std::equal(prefix.begin(), prefix.end(), full.begin()));
}

TEST_CASE("selftest passes on the compiled kernels") {
  const auto report = run_selftest(1, 1000);
  CHECK(report.passed());
  CHECK(report.text().rfind("selftest seed=1 iterations=1000\n", 0) == 0);
  CHECK(report.text().find("PASS") != std::string::npos);
  CHECK(run_selftest(1, 50).text() == run_selftest(1, 50).text());
}

TEST_CASE("selftest reports a minimal reproduction for a faulty kernel") {
  const KernelDescriptor bad[] = {
      {"faulty", 64, &always_true, &faulty_count},
      {"throws", 64, &always_true, &throwing_count},
  };
  const auto report = run_selftest(5, 200, bad);
  CHECK_FALSE(report.passed());
  REQUIRE(report.failures.size() == 2);

  const auto& f = report.failures[0];
  CHECK(f.kernel == "faulty");
  const std::size_t b = bytes_of(f.reproduction.width);
  CHECK(f.reproduction.length == (100 + b - 1) / b * b);
  CHECK(report.failures[1].reproduction.length == 0);

  const auto text = report.text();
  CHECK(text.find("faulty: MISMATCH kernel=faulty w=") != std::string::npos);
  CHECK(text.find("seed=5 case=") != std::string::npos);
  CHECK(text.find("FAIL") != std::string::npos);
}

namespace {

double rate(const std::string& kernel, std::size_t size, bool random_fill) {
  BenchConfig cfg;
  cfg.sizes = {size};
  cfg.min_time = 0.05;
  cfg.random_fill = random_fill;
  cfg.hardware_counters = false;
  double best = 0;
  for (int i = 0; i < 3; ++i) {
    for (const auto& r : run_benchmark_one(cfg, find_bench_target(kernel), size)) {
      best = std::max(best, r.bytes_per_sec());
    }
  }
  return best;
}

}  // namespace

TEST_CASE("portable throughput grows from 64 B to 64 KiB") {
  CHECK(rate("portable", 64 << 10, false) >= rate("portable", 64, false));
}

TEST_CASE("soft: contents do not change throughput") {
  const auto& k = select_kernel();
  const double zeros = rate(std::string(k.name), 64 << 10, false);
  const double random = rate(std::string(k.name), 64 << 10, true);
  MESSAGE(k.name, " zero-filled ", zeros / 1e9, " GB/s, random ", random / 1e9, " GB/s");
  WARN(std::abs(random / zeros - 1) < 0.05);
}
