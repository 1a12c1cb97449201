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

// Reference points for benchmarking, not for production use.

#pragma once

#include "pospop/core.hpp"

namespace pospop {

/// Naive per-bit loop, unrolled for w = 16 and with auto-vectorisation
/// disabled. Exact for every width.
void baseline_pospopcnt(InputView input, WordWidth w, CounterArray& counts);

/// Reads the whole input and adds the wrapping sum of its 64-bit words to
/// counts[0]. Not a positional count; a memory-bound reference for
/// throughput.
void roofline_sum(InputView input, WordWidth w, CounterArray& counts);

}  // namespace pospop
