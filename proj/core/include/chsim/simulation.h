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


#pragma once

// The trial pipeline: settings -> source -> leakage -> detection -> noise -> record.
// Every stage draws from counter-based streams keyed by the trial index, so results are
// identical for any worker count.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "chsim/analysis.h"
#include "chsim/channel.h"
#include "chsim/sources.h"

namespace chsim {

struct Experiment {
    SourceModel source = SourceModel(QuantumJointSource{});
    AngleSet angles;
    DetectorConfig detector;
    Probability noise_rate{0.0};
    LeakageChannel leakage;
    std::shared_ptr<const ForgingStrategy> forger;
    double forgery_strength = 1.0;
    /// Empty windows stay in the record stream (and in every normalization) unless false.
    bool include_empty_windows = true;
    std::uint64_t n_trials = 100000;
    std::uint64_t seed = 1;
};

/// Runs trial `index`. Returns nullopt only for an empty window when empty windows are excluded.
std::optional<TrialRecord> run_trial(const Experiment &experiment, std::uint64_t index);

std::vector<TrialRecord> simulate_trials(const Experiment &experiment, unsigned threads = 1);

/// Streams the run straight into k per-partition count tables (partition by trial index)
/// without materializing records. Requires include_empty_windows, where it matches
/// accumulate_counts over simulate_trials split with partition_bounds.
std::vector<CountsTable> simulate_partition_counts(const Experiment &experiment, std::size_t k,
                                                   unsigned threads = 1);

/// 0 means: $CHSIM_THREADS if set, else the hardware concurrency.
unsigned resolve_threads(unsigned requested);

/// Calls body(i) for i in [0, n) on up to `threads` workers. Each index runs exactly once;
/// the first exception thrown is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &body);

}  // namespace chsim
