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

// Entry points of the individual kernels. The ISA ones must only be called
// after the matching CPU probe succeeded.

#pragma once

#include "pospop/core.hpp"

namespace pospop::detail {

void count_portable(InputView input, WordWidth w, CounterArray& counts);

#if defined(POSPOP_HAVE_X86_KERNELS)
void count_avx2(InputView input, WordWidth w, CounterArray& counts);
void count_avx512(InputView input, WordWidth w, CounterArray& counts);
#endif

}  // namespace pospop::detail
