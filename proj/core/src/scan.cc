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


#include "chsim/scan.h"

#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <memory>

#include "chsim/errors.h"

namespace chsim {

namespace {

constexpr double kPi = std::numbers::pi;

struct Objective {
    QuantumStateParam state;
    double eta;
};

AngleSet to_angles(const gsl_vector *x) {
    AngleSet angles;
    angles.alice = {gsl_vector_get(x, 0), gsl_vector_get(x, 1)};
    angles.bob = {gsl_vector_get(x, 2), gsl_vector_get(x, 3)};
    return angles;
}

double negative_ch(const gsl_vector *x, void *params) {
    const auto *o = static_cast<const Objective *>(params);
    return -ch_variant(quantum_table(o->state, to_angles(x), o->eta, o->eta), 0);
}

double wrap_angle(double a) {
    double w = std::fmod(a, kPi);
    return w < 0.0 ? w + kPi : w;
}

struct MinimizerDeleter {
    void operator()(gsl_multimin_fminimizer *m) const {
        gsl_multimin_fminimizer_free(m);
    }
};
struct VectorDeleter {
    void operator()(gsl_vector *v) const {
        gsl_vector_free(v);
    }
};

}  // namespace

AngleSet optimal_ch_angles(QuantumStateParam state, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw DomainError("efficiency must lie in [0,1]");
    }
    Objective objective{state, eta};
    gsl_multimin_function fn{&negative_ch, 4, &objective};

    std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> minimizer(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 4));
    std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(4));
    std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(4));
    gsl_vector_set_all(step.get(), 0.3);

    constexpr int kStarts = 24;
    double best_value = std::numeric_limits<double>::infinity();
    AngleSet best;
    for (int s = 0; s < kStarts; ++s) {
        if (s == 0) {
            AngleSet start;
            for (std::size_t i = 0; i < 2; ++i) {
                gsl_vector_set(x.get(), i, start.alice[i]);
                gsl_vector_set(x.get(), i + 2, start.bob[i]);
            }
        } else {
            RandomStream rng(0x0A11C5EEDull, StreamDomain::kFuzz, static_cast<std::uint64_t>(s));
            for (std::size_t i = 0; i < 4; ++i) {
                gsl_vector_set(x.get(), i, kPi * (rng.uniform() - 0.5));
            }
        }
        gsl_multimin_fminimizer_set(minimizer.get(), &fn, x.get(), step.get());
        for (int iter = 0; iter < 4000; ++iter) {
            if (gsl_multimin_fminimizer_iterate(minimizer.get()) != 0) {
                break;
            }
            double size = gsl_multimin_fminimizer_size(minimizer.get());
            if (gsl_multimin_test_size(size, 1e-11) == GSL_SUCCESS) {
                break;
            }
        }
        double value = gsl_multimin_fminimizer_minimum(minimizer.get());
        if (value < best_value) {
            best_value = value;
            best = to_angles(gsl_multimin_fminimizer_x(minimizer.get()));
        }
    }
    for (auto &a : best.alice) {
        a = wrap_angle(a);
    }
    for (auto &b : best.bob) {
        b = wrap_angle(b);
    }
    return best;
}

ScanTable efficiency_scan(const ScanOptions &options) {
    if (options.states.empty() || options.etas.empty()) {
        throw DomainError("efficiency scan needs nonempty state and efficiency grids");
    }
    if (options.partitions == 0) {
        throw DomainError("partition count must be positive");
    }
    if (options.trials_per_cell < options.partitions * PartitionOptions{}.min_trials_per_partition) {
        throw InsufficientDataError("trials_per_cell too small for " + std::to_string(options.partitions) +
                                    " partitions of 1000 trials");
    }

    ScanTable table;
    table.states = options.states;
    table.etas = options.etas;
    table.cells.resize(options.states.size() * options.etas.size());

    for (std::size_t i = 0; i < options.states.size(); ++i) {
        QuantumStateParam state(options.states[i]);
        for (std::size_t j = 0; j < options.etas.size(); ++j) {
            double eta = options.etas[j];
            Probability eta_checked(eta);

            ScanCell &cell = table.cells[i * options.etas.size() + j];
            cell.state_index = i;
            cell.eta_index = j;
            cell.r = state.r();
            cell.eta = eta;
            cell.angles = options.fixed_angles ? *options.fixed_angles : optimal_ch_angles(state, eta);
            cell.expected = ch_values(quantum_table(state, cell.angles, eta, eta)).values;

            Experiment e;
            e.source = SourceModel(QuantumJointSource{state});
            e.angles = cell.angles;
            e.detector = DetectorConfig{eta_checked, eta_checked, Probability(options.empty_window_rate)};
            e.n_trials = options.trials_per_cell;
            e.seed = mix64(options.seed ^ mix64(0x5CA7ull + i));
            auto counts = simulate_partition_counts(e, options.partitions, options.threads);
            cell.report = score_partitions(counts, options.marginal_mode);
        }
    }
    return table;
}

PartitionReport bierhorst_mixture_test(const Experiment &experiment, std::size_t k, const PartitionOptions &options,
                                       unsigned threads) {
    if (experiment.source.kind() != SourceKind::kTemporalMixture) {
        throw DomainError("mixture test needs a temporal-mixture source, got " + experiment.source.description());
    }
    if (k == 0) {
        throw DomainError("partition count must be positive");
    }
    if (experiment.n_trials < k * std::max<std::size_t>(options.min_trials_per_partition, 1)) {
        throw InsufficientDataError(std::to_string(experiment.n_trials) + " trials cannot fill " + std::to_string(k) +
                                    " partitions");
    }
    if (experiment.include_empty_windows) {
        return score_partitions(simulate_partition_counts(experiment, k, threads), options.marginal_mode);
    }
    auto records = simulate_trials(experiment, threads);
    return partition_and_score(records, k, options);
}

}  // namespace chsim
