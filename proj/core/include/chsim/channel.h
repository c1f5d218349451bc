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

// Everything between the source and the counts: setting schedule, detection losses
// and empty windows, Alice-to-Bob leakage with forging, and readout bit flips.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chsim/inequality.h"
#include "chsim/random.h"
#include "chsim/records.h"
#include "chsim/sources.h"

namespace chsim {

struct DetectorConfig {
    Probability eta_alice{1.0};
    Probability eta_bob{1.0};
    /// Probability that a trial window holds no emission at all.
    Probability empty_window_rate{0.0};
};

/// Independent, uniform setting choice on each side for trial `key.index`.
SettingPair draw_settings(const TrialKey &key);

/// Settings for trials 0..n_trials-1 of run `seed`. Throws DomainError when n_trials == 0.
std::vector<SettingPair> schedule_settings(std::uint64_t n_trials, std::uint64_t seed);

struct DetectedOutcome {
    RawOutcome outcome;
    bool empty_window = false;
};

/// With probability empty_window_rate the window is empty (no click on either side);
/// otherwise each side's click survives independently with its efficiency.
DetectedOutcome apply_detection(RawOutcome raw, const DetectorConfig &config, RandomStream &rng);

/// Applies apply_detection to each record, using the detection stream of the record's
/// own index (so the result does not depend on record order).
void apply_detection(std::span<TrialRecord> records, const DetectorConfig &config, std::uint64_t seed);

enum class LeakageMode { kNone, kOutcomeOnly, kSettingOnly, kBoth };

std::string_view to_string(LeakageMode mode);
/// Accepts none, outcome, setting, both. Throws NotFoundError otherwise.
LeakageMode parse_leakage_mode(std::string_view text);

/// Alice -> Bob side channel.
struct LeakageChannel {
    LeakageMode mode = LeakageMode::kNone;
};

/// What reaches Bob in one trial. Reading a datum the channel does not carry throws
/// ContractViolation.
class LeakedInfo {
   public:
    LeakedInfo(LeakageMode mode, std::uint8_t alice_setting, Click alice_outcome, std::uint8_t bob_setting);

    std::uint8_t alice_setting() const;
    /// True iff Alice registered the CH detection event.
    bool alice_detected() const;
    std::uint8_t bob_setting() const {
        return bob_setting_;
    }

   private:
    LeakageMode mode_;
    std::uint8_t alice_setting_;
    Click alice_outcome_;
    std::uint8_t bob_setting_;
};

/// Target joint statistics a forger tries to reproduce, one distribution per setting pair.
struct ForgingTarget {
    std::array<DetectionDistribution, 4> pairs{};

    static ForgingTarget quantum(QuantumStateParam state, const AngleSet &angles);
    /// Builds per-pair distributions from joint and per-setting marginals.
    static ForgingTarget from_table(const ProbabilityTable &table);

    /// P(B detect | A outcome, a, b).
    double bob_given_alice(SettingPair pair, bool alice_detected) const;
};

/// Bob's fake measurement. `forge` returns Bob's click.
class ForgingStrategy {
   public:
    virtual ~ForgingStrategy() = default;
    virtual std::string_view name() const = 0;
    virtual Click forge(const LeakedInfo &info, RandomStream &rng) const = 0;
};

/// Uses Alice's setting and outcome: draws B from the target conditional, so the pair
/// reproduces the target joint whenever Alice's marginal matches the target's.
class ConditionalForger final : public ForgingStrategy {
   public:
    explicit ConditionalForger(ForgingTarget target) : target_(std::move(target)) {
    }
    std::string_view name() const override {
        return "conditional";
    }
    Click forge(const LeakedInfo &info, RandomStream &rng) const override;

   private:
    ForgingTarget target_;
};

/// Uses only Alice's outcome: the target conditional averaged over Alice's two settings.
class OutcomeForger final : public ForgingStrategy {
   public:
    explicit OutcomeForger(ForgingTarget target) : target_(std::move(target)) {
    }
    std::string_view name() const override {
        return "outcome-average";
    }
    Click forge(const LeakedInfo &info, RandomStream &rng) const override;

   private:
    ForgingTarget target_;
};

/// Uses only Alice's setting: the target conditional as if Alice had detected. This
/// reproduces the target joint but drags Bob's marginal with Alice's setting.
class SettingForger final : public ForgingStrategy {
   public:
    explicit SettingForger(ForgingTarget target) : target_(std::move(target)) {
    }
    std::string_view name() const override {
        return "assume-detect";
    }
    Click forge(const LeakedInfo &info, RandomStream &rng) const override;

   private:
    ForgingTarget target_;
};

/// Names: conditional, outcome-average, assume-detect; "auto" picks the one matching
/// `mode` (nullptr for kNone). Throws NotFoundError for other names.
std::shared_ptr<const ForgingStrategy> make_forger(std::string_view name, LeakageMode mode, ForgingTarget target);

/// Bob's click after leakage. kNone returns `bob_own` untouched; otherwise with
/// probability `strength` Bob's click is replaced by the strategy's forgery.
Click leak_and_forge(std::uint8_t alice_setting, Click alice_outcome, const LeakageChannel &channel,
                     const ForgingStrategy *strategy, std::uint8_t bob_setting, Click bob_own, RandomStream &rng,
                     double strength = 1.0);

/// Flips each side's CH detection flag independently with probability `rate`, using the
/// noise stream of each record's index. A flag turned on becomes plus, one turned off none.
void bit_flip_noise(std::span<TrialRecord> records, Probability rate, std::uint64_t seed);

/// Single-record form used by the streaming pipeline.
TrialRecord bit_flip(TrialRecord record, Probability rate, RandomStream &rng);

struct SignalingDemo {
    std::string bits;
    double marginal_one = 0.0;
    int decoded = -1;
    double decoder_accuracy = 0.0;
};

/// A mechanism steered by a remote bit c: it emits 0101... for c = 0 and 0011... for
/// c = 1. Both sequences have marginal P('1') = 1/2, yet each aligned 4-bit block
/// reveals c. `length` must be a positive multiple of 4 (DomainError otherwise).
SignalingDemo signaling_pattern_demo(int c, std::size_t length);

/// Decodes c from one aligned 4-bit block; nullopt when it matches neither pattern.
std::optional<int> decode_signaling_block(std::string_view block);

}  // namespace chsim
