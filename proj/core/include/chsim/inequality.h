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

// Numerical core: the Clauser-Horne family, its six-term tautology, CHSH as a
// contrast metric, and the factorizability / parameter-independence /
// outcome-independence residuals. Everything here is a pure function.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>

namespace chsim {

/// A probability; construction rejects anything outside [0, 1] (and NaN) with DomainError.
class Probability {
   public:
    constexpr Probability() = default;
    explicit Probability(double value);

    constexpr double value() const {
        return value_;
    }

    auto operator<=>(const Probability &) const = default;

   private:
    double value_ = 0.0;
};

/// One of the four (Alice, Bob) setting combinations; 0 is the unprimed angle, 1 the primed.
struct SettingPair {
    std::uint8_t alice = 0;
    std::uint8_t bob = 0;

    constexpr std::size_t index() const {
        return 2u * alice + bob;
    }
    static constexpr SettingPair from_index(std::size_t i) {
        return SettingPair{static_cast<std::uint8_t>(i / 2), static_cast<std::uint8_t>(i % 2)};
    }

    auto operator<=>(const SettingPair &) const = default;
};

inline constexpr std::array<SettingPair, 4> kSettingPairs{
    SettingPair{0, 0}, SettingPair{0, 1}, SettingPair{1, 0}, SettingPair{1, 1}};

/// Measurement angles in radians: alice = {alpha, alpha'}, bob = {beta, beta'}.
struct AngleSet {
    std::array<double, 2> alice{0.0, std::numbers::pi / 4};
    std::array<double, 2> bob{std::numbers::pi / 8, 3 * std::numbers::pi / 8};

    double alice_angle(SettingPair p) const {
        return alice[p.alice];
    }
    double bob_angle(SettingPair p) const {
        return bob[p.bob];
    }

    bool operator==(const AngleSet &) const = default;
};

/// Joint and single detection probabilities over the 2x2 setting grid.
///
/// `joint` is indexed by SettingPair::index(). `coincident_correlation` holds the
/// fair-sampled correlator of each pair when the producer had port information
/// (nullopt if unknown or if the pair had no two-sided clicks). `tolerance` is the
/// slack the producer declares on joint <= min(marginals): 0 for exact tables.
struct ProbabilityTable {
    std::array<Probability, 4> joint{};
    std::array<Probability, 2> alice{};
    std::array<Probability, 2> bob{};
    std::array<std::optional<double>, 4> coincident_correlation{};
    double tolerance = 0.0;

    Probability joint_at(SettingPair p) const {
        return joint[p.index()];
    }

    /// joint(a,b) <= min(alice(a), bob(b)) + tolerance for every pair.
    bool consistent() const;
};

inline constexpr std::size_t kVariantCount = 4;

/// Coefficients of one CH variant: sign of each joint term (by SettingPair::index())
/// and the settings of the two subtracted marginals.
struct CHVariant {
    std::array<int, 4> joint_sign;
    std::uint8_t alice_marginal;
    std::uint8_t bob_marginal;
};

/// Variant 0 is the CH inequality proper; 1-3 are the analogous inequalities obtained by
/// moving the negative joint term to each of the other setting pairs.
inline constexpr std::array<CHVariant, kVariantCount> kCHVariants{
    CHVariant{{+1, -1, +1, +1}, 1, 0},
    CHVariant{{-1, +1, +1, +1}, 1, 1},
    CHVariant{{+1, +1, -1, +1}, 0, 1},
    CHVariant{{+1, +1, +1, -1}, 0, 0},
};

struct CHReport {
    std::array<double, kVariantCount> values{};
    std::array<bool, kVariantCount> violated{};
    bool any_violated = false;
    std::optional<double> chsh;

    /// A variant is violated iff its value is strictly positive.
    static CHReport from_values(const std::array<double, kVariantCount> &values);

    bool operator==(const CHReport &) const = default;
};

/// pA_a*pB_b - pA_a*pB_b2 + pA_a2*pB_b + pA_a2*pB_b2 - pA_a2 - pB_b, which is <= 0 for
/// every input in [0,1]^4. Returns the raw floating-point value.
double ch_tautology_lhs(Probability pA_a, Probability pA_a2, Probability pB_b, Probability pB_b2);

double ch_variant(const ProbabilityTable &table, std::size_t variant);

CHReport ch_values(const ProbabilityTable &table);

enum class FairSampling { kOff, kOn };

/// CHSH S = E(a,b) - E(a,b') + E(a',b) + E(a',b').
///
/// kOff: every trial counts, detect -> +1 and no detect -> -1, so
/// E = 1 - 2 P(A|a) - 2 P(B|b) + 4 P(AB|a,b). kOn: E is the correlator over trials
/// with a click on both sides (port plus -> +1, minus -> -1), read from
/// `coincident_correlation`; a missing correlator throws UndefinedEstimateError.
double chsh_value(const ProbabilityTable &table, FairSampling fair_sampling = FairSampling::kOff);

/// max over pairs of |P(AB|a,b) - P(A|a) P(B|b)|.
double factorizability_residual(const ProbabilityTable &table);

/// Single-side detection probabilities conditioned on both settings, indexed by SettingPair::index().
struct ConditionalMarginals {
    std::array<Probability, 4> alice{};
    std::array<Probability, 4> bob{};
};

/// max of |P(A|a,b) - P(A|a,b')| and |P(B|a,b) - P(B|a',b)| over settings.
double pi_residual(const ConditionalMarginals &marginals);

/// Outcome-conditioned and unconditioned single-side probabilities per setting pair.
/// A nullopt entry means the conditioning event never occurred.
struct OutcomeConditionals {
    std::array<std::optional<double>, 4> alice_given_bob{};
    std::array<std::optional<double>, 4> alice{};
    std::array<std::optional<double>, 4> bob_given_alice{};
    std::array<std::optional<double>, 4> bob{};
};

/// max of |P(A|B,a,b) - P(A|a,b)| and |P(B|A,a,b) - P(B|a,b)| over pairs.
/// Throws UndefinedEstimateError when any needed entry is missing.
double oi_residual(const OutcomeConditionals &conditionals);

/// Slack used when checking the tautology numerically.
inline constexpr double kTautologySlack = 4 * 2.220446049250313e-16;

struct TautologyFuzzReport {
    std::uint64_t samples = 0;
    std::uint64_t tautology_violations = 0;  // lhs > kTautologySlack
    std::uint64_t sum_violations = 0;        // m + n < m or m + n < n
    double max_lhs = 0.0;
};

/// Evaluates the six-term tautology on uniform points of [0,1]^4 and m + n >= m, n on
/// nonnegative pairs. Throws DomainError when samples == 0.
TautologyFuzzReport fuzz_tautologies(std::uint64_t samples, std::uint64_t seed);

}  // namespace chsim
