// Copyright 2026 The qsnn Authors
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


#include <benchmark/benchmark.h>

#include "qsnn/statevector.h"

namespace {

using namespace qsnn;

void BM_ControlledRotation(benchmark::State &bench) {
    const auto n = static_cast<std::uint32_t>(bench.range(0));
    State s = init_state(n);
    apply_gate(s, Gate::h(0));
    const Gate g = Gate::crx(0, n - 1, 0.7);
    for (auto _ : bench) {
        apply_gate(s, g);
        benchmark::ClobberMemory();
    }
    bench.SetItemsProcessed(bench.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_ControlledRotation)->DenseRange(8, 20, 4);

void BM_Rotation(benchmark::State &bench) {
    const auto n = static_cast<std::uint32_t>(bench.range(0));
    State s = init_state(n);
    const Gate g = Gate::rx(n / 2, 0.3);
    for (auto _ : bench) {
        apply_gate(s, g);
        benchmark::ClobberMemory();
    }
    bench.SetItemsProcessed(bench.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_Rotation)->DenseRange(8, 20, 4);

}  // namespace
