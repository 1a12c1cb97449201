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

#include <cstdint>
#include <optional>

namespace pospop::detail {

struct CounterReading {
  std::uint64_t cycles = 0;
  std::uint64_t instructions = 0;
};

/// User-space cycle and instruction counters for the calling thread, where
/// the platform lets an unprivileged process open them.
class PerfCounters {
 public:
  PerfCounters();
  ~PerfCounters();
  PerfCounters(const PerfCounters&) = delete;
  PerfCounters& operator=(const PerfCounters&) = delete;

  bool available() const noexcept { return leader_ >= 0; }

  void start() noexcept;
  std::optional<CounterReading> stop() noexcept;

 private:
  int leader_ = -1;
  int instructions_ = -1;
};

}  // namespace pospop::detail
