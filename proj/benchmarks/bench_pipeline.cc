// Copyright 2026 The chsim Authors
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

#include "chsim/analysis.h"
#include "chsim/inequality.h"
#include "chsim/simulation.h"

namespace {

using namespace chsim;

void BM_SimulateTrials(benchmark::State &state) {
    Experiment e;
    e.n_trials = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_trials(e, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateTrials)->Arg(1 << 16)->Arg(1 << 20);

void BM_PartitionCounts(benchmark::State &state) {
    Experiment e;
    e.source = make_model("cosine-sign");
    e.n_trials = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_partition_counts(e, 100, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PartitionCounts)->Arg(1 << 20);

void BM_AccumulateCounts(benchmark::State &state) {
    Experiment e;
    e.n_trials = static_cast<std::uint64_t>(state.range(0));
    std::vector<TrialRecord> records = simulate_trials(e, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(accumulate_counts(records));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AccumulateCounts)->Arg(1 << 20);

void BM_ChValues(benchmark::State &state) {
    Experiment e;
    e.n_trials = 1 << 16;
    ProbabilityTable table = estimate_probabilities(accumulate_counts(simulate_trials(e, 1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ch_values(table));
    }
}
BENCHMARK(BM_ChValues);

}  // namespace

BENCHMARK_MAIN();
