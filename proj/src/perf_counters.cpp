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

#include "perf_counters.hpp"

#if defined(__linux__)
#include <linux/perf_event.h>
#include <sys/ioctl.h>
#include <sys/syscall.h>
#include <unistd.h>

#include <cstring>
#endif

namespace pospop::detail {

#if defined(__linux__)
namespace {

int open_counter(std::uint64_t config, int group) {
  perf_event_attr attr;
  std::memset(&attr, 0, sizeof attr);
  attr.type = PERF_TYPE_HARDWARE;
  attr.size = sizeof attr;
  attr.config = config;
  attr.disabled = group < 0 ? 1 : 0;
  attr.exclude_kernel = 1;
  attr.exclude_hv = 1;
  attr.read_format = PERF_FORMAT_GROUP;
  return static_cast<int>(syscall(SYS_perf_event_open, &attr, 0, -1, group, 0));
}

}  // namespace

PerfCounters::PerfCounters() {
  leader_ = open_counter(PERF_COUNT_HW_CPU_CYCLES, -1);
  if (leader_ < 0) return;
  instructions_ = open_counter(PERF_COUNT_HW_INSTRUCTIONS, leader_);
  if (instructions_ < 0) {
    close(leader_);
    leader_ = -1;
  }
}

PerfCounters::~PerfCounters() {
  if (instructions_ >= 0) close(instructions_);
  if (leader_ >= 0) close(leader_);
}

void PerfCounters::start() noexcept {
  if (leader_ < 0) return;
  ioctl(leader_, PERF_EVENT_IOC_RESET, PERF_IOC_FLAG_GROUP);
  ioctl(leader_, PERF_EVENT_IOC_ENABLE, PERF_IOC_FLAG_GROUP);
}

std::optional<CounterReading> PerfCounters::stop() noexcept {
  if (leader_ < 0) return std::nullopt;
  ioctl(leader_, PERF_EVENT_IOC_DISABLE, PERF_IOC_FLAG_GROUP);
  std::uint64_t buf[3] = {};  // nr, cycles, instructions
  if (read(leader_, buf, sizeof buf) != static_cast<ssize_t>(sizeof buf) || buf[0] != 2) {
    return std::nullopt;
  }
  return CounterReading{buf[1], buf[2]};
}

#else

PerfCounters::PerfCounters() = default;
PerfCounters::~PerfCounters() = default;
void PerfCounters::start() noexcept {}
std::optional<CounterReading> PerfCounters::stop() noexcept { return std::nullopt; }

#endif

}  // namespace pospop::detail
