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

// Parameter scans over (state, efficiency) and the temporal-mixture test.

#include <cstdint>
#include <optional>
#include <vector>

#include "chsim/analysis.h"
#include "chsim/simulation.h"
#include "chsim/sources.h"

namespace chsim {

/// Angles maximizing the exact variant-0 CH value of the quantum source seen through
/// detectors of efficiency eta on both sides. Deterministic multistart simplex search.
AngleSet optimal_ch_angles(QuantumStateParam state, double eta);

struct ScanOptions {
    std::vector<double> states;  // r values
    std::vector<double> etas;    // detection efficiencies, applied to both sides
    /// Fixed angles for every cell; nullopt optimizes per cell with optimal_ch_angles.
    std::optional<AngleSet> fixed_angles;
    std::uint64_t trials_per_cell = 100000;
    std::size_t partitions = 20;
    std::uint64_t seed = 1;
    double empty_window_rate = 0.0;
    MarginalMode marginal_mode = MarginalMode::kPooled;
    unsigned threads = 1;
};

struct ScanCell {
    std::size_t state_index = 0;
    std::size_t eta_index = 0;
    double r = 0.0;
    double eta = 0.0;
    AngleSet angles;
    /// Exact variant values for the cell's source, angles, and efficiency.
    std::array<double, kVariantCount> expected{};
    PartitionReport report;

    /// Whole-cell estimate of the variant is positive.
    bool violating(std::size_t variant = 0) const {
        return report.overall.values[variant] > 0.0;
    }
    /// Partition fraction clears the chance band above one half.
    bool persistent(std::size_t variant = 0) const {
        return report.violation_fraction[variant] > 0.5 + report.chance_band();
    }
};

struct ScanTable {
    std::vector<double> states;
    std::vector<double> etas;
    std::vector<ScanCell> cells;  // row-major: state outer, eta inner

    const ScanCell &at(std::size_t state_index, std::size_t eta_index) const {
        return cells[state_index * etas.size() + eta_index];
    }
};

/// Runs the quantum source through detection for every (r, eta) cell and scores each
/// cell with k partitions. Cells in the same r row share their random numbers, so
/// detection events at a higher eta are a superset of those at a lower one when the
/// angles agree. Throws DomainError for an empty grid.
ScanTable efficiency_scan(const ScanOptions &options);

/// Runs a temporal-mixture experiment through the standard pipeline and scores the bare
/// CH variants over k partitions. Throws DomainError if the source is not a temporal mixture.
PartitionReport bierhorst_mixture_test(const Experiment &experiment, std::size_t k,
                                       const PartitionOptions &options = {}, unsigned threads = 1);

}  // namespace chsim
