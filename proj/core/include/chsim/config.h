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

// Declarative experiment configuration (INI-style sections), see docs/formats.md.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chsim/analysis.h"
#include "chsim/channel.h"
#include "chsim/inequality.h"
#include "chsim/scan.h"
#include "chsim/simulation.h"
#include "chsim/sources.h"

namespace chsim {

struct SourceSpec {
    std::string model = "quantum";
    ModelParams params;  // overrides of the catalog defaults
};

struct DetectorSpec {
    double eta_alice = 1.0;
    double eta_bob = 1.0;
    double empty_window_rate = 0.0;
    double noise_rate = 0.0;
};

struct LeakageSpec {
    LeakageMode mode = LeakageMode::kNone;
    std::string strategy = "auto";
    double strength = 1.0;
    /// State the forger imitates (r); the experiment's angles are used.
    double target_state = std::numbers::pi / 4;
};

struct RunSpec {
    std::uint64_t trials = 100000;
    std::size_t partitions = 100;
    std::uint64_t seed = 1;
    MarginalMode marginal_mode = MarginalMode::kPooled;
    bool include_empty_windows = true;
    std::size_t min_trials_per_partition = 1000;
};

struct ScanSpec {
    std::vector<double> states;
    std::vector<double> etas;
    bool optimize_angles = true;
    std::uint64_t trials_per_cell = 100000;
    std::size_t partitions = 20;
};

struct ExperimentConfig {
    SourceSpec source;
    DetectorSpec detector;
    LeakageSpec leakage;
    AngleSet angles;
    RunSpec run;
    std::optional<ScanSpec> scan;
};

/// Parses and validates configuration text. Unknown sections or keys, malformed values,
/// and out-of-range values raise ConfigError naming the field ("detector.eta_alice").
ExperimentConfig parse_config(std::string_view text);

/// Reads and parses a file. A missing or unreadable file raises IoError.
ExperimentConfig load_config(const std::filesystem::path &path);

/// Builds the runnable experiment (model, forger, detector) from a validated config.
Experiment make_experiment(const ExperimentConfig &config);

/// Scan options from the config's [scan] section (ConfigError when it is absent).
ScanOptions make_scan_options(const ExperimentConfig &config);

/// Parses an angle: plain number = radians, "<number>deg" = degrees.
double parse_angle(std::string_view text);

}  // namespace chsim
