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


#include "chsim/inequality.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "chsim/errors.h"
#include "chsim/random.h"

namespace chsim {

Probability::Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw DomainError("probability out of [0,1]: " + std::to_string(value));
    }
}

bool ProbabilityTable::consistent() const {
    for (auto p : kSettingPairs) {
        double bound = std::min(alice[p.alice].value(), bob[p.bob].value()) + tolerance;
        if (joint_at(p).value() > bound) {
            return false;
        }
    }
    return true;
}

CHReport CHReport::from_values(const std::array<double, kVariantCount> &values) {
    CHReport report;
    report.values = values;
    for (std::size_t i = 0; i < kVariantCount; ++i) {
        report.violated[i] = values[i] > 0.0;
        report.any_violated = report.any_violated || report.violated[i];
    }
    return report;
}

double ch_tautology_lhs(Probability pA_a, Probability pA_a2, Probability pB_b, Probability pB_b2) {
    double x = pA_a.value();
    double x2 = pA_a2.value();
    double y = pB_b.value();
    double y2 = pB_b2.value();
    return x * y - x * y2 + x2 * y + x2 * y2 - x2 - y;
}

double ch_variant(const ProbabilityTable &table, std::size_t variant) {
    if (variant >= kVariantCount) {
        throw DomainError("CH variant index must be 0..3");
    }
    const CHVariant &v = kCHVariants[variant];
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        sum += v.joint_sign[i] * table.joint[i].value();
    }
    return sum - table.alice[v.alice_marginal].value() - table.bob[v.bob_marginal].value();
}

CHReport ch_values(const ProbabilityTable &table) {
    std::array<double, kVariantCount> values{};
    for (std::size_t i = 0; i < kVariantCount; ++i) {
        values[i] = ch_variant(table, i);
    }
    return CHReport::from_values(values);
}

double chsh_value(const ProbabilityTable &table, FairSampling fair_sampling) {
    static constexpr std::array<int, 4> kSign{+1, -1, +1, +1};
    double s = 0.0;
    for (auto p : kSettingPairs) {
        double e;
        if (fair_sampling == FairSampling::kOn) {
            const auto &c = table.coincident_correlation[p.index()];
            if (!c) {
                throw UndefinedEstimateError("no two-sided clicks for setting pair (" + std::to_string(p.alice) +
                                             "," + std::to_string(p.bob) + "); fair-sampled correlator undefined");
            }
            e = *c;
        } else {
            e = 1.0 - 2.0 * table.alice[p.alice].value() - 2.0 * table.bob[p.bob].value() +
                4.0 * table.joint_at(p).value();
        }
        s += kSign[p.index()] * e;
    }
    return s;
}

double factorizability_residual(const ProbabilityTable &table) {
    double worst = 0.0;
    for (auto p : kSettingPairs) {
        double product = table.alice[p.alice].value() * table.bob[p.bob].value();
        worst = std::max(worst, std::abs(table.joint_at(p).value() - product));
    }
    return worst;
}

double pi_residual(const ConditionalMarginals &m) {
    double worst = 0.0;
    for (std::uint8_t s = 0; s < 2; ++s) {
        // Alice at setting s, Bob's setting varies.
        double a0 = m.alice[SettingPair{s, 0}.index()].value();
        double a1 = m.alice[SettingPair{s, 1}.index()].value();
        worst = std::max(worst, std::abs(a0 - a1));
        // Bob at setting s, Alice's setting varies.
        double b0 = m.bob[SettingPair{0, s}.index()].value();
        double b1 = m.bob[SettingPair{1, s}.index()].value();
        worst = std::max(worst, std::abs(b0 - b1));
    }
    return worst;
}

double oi_residual(const OutcomeConditionals &c) {
    double worst = 0.0;
    for (auto p : kSettingPairs) {
        std::size_t i = p.index();
        if (!c.alice_given_bob[i] || !c.alice[i] || !c.bob_given_alice[i] || !c.bob[i]) {
            throw UndefinedEstimateError("conditioning event never occurred at setting pair (" +
                                         std::to_string(p.alice) + "," + std::to_string(p.bob) + ")");
        }
        worst = std::max(worst, std::abs(*c.alice_given_bob[i] - *c.alice[i]));
        worst = std::max(worst, std::abs(*c.bob_given_alice[i] - *c.bob[i]));
    }
    return worst;
}

TautologyFuzzReport fuzz_tautologies(std::uint64_t samples, std::uint64_t seed) {
    if (samples == 0) {
        throw DomainError("fuzz needs at least one sample");
    }
    TautologyFuzzReport report;
    report.samples = samples;
    report.max_lhs = -std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < samples; ++i) {
        RandomStream rng(seed, StreamDomain::kFuzz, i);
        double lhs = ch_tautology_lhs(Probability(rng.uniform()), Probability(rng.uniform()),
                                      Probability(rng.uniform()), Probability(rng.uniform()));
        report.max_lhs = std::max(report.max_lhs, lhs);
        if (lhs > kTautologySlack) {
            ++report.tautology_violations;
        }
        // Nonnegative magnitudes spread over many binades.
        double m = std::ldexp(rng.uniform(), static_cast<int>(rng() % 129) - 64);
        double n = std::ldexp(rng.uniform(), static_cast<int>(rng() % 129) - 64);
        if (!(m + n >= m) || !(m + n >= n)) {
            ++report.sum_violations;
        }
    }
    return report;
}

}  // namespace chsim
