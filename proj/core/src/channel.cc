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


#include "chsim/channel.h"

#include <algorithm>

#include "chsim/errors.h"

namespace chsim {

SettingPair draw_settings(const TrialKey &key) {
    RandomStream rng = key.stream(StreamDomain::kSettings);
    std::uint64_t bits = rng();
    return SettingPair{static_cast<std::uint8_t>(bits >> 63), static_cast<std::uint8_t>((bits >> 62) & 1u)};
}

std::vector<SettingPair> schedule_settings(std::uint64_t n_trials, std::uint64_t seed) {
    if (n_trials == 0) {
        throw DomainError("setting schedule needs at least one trial");
    }
    std::vector<SettingPair> out;
    out.reserve(n_trials);
    for (std::uint64_t i = 0; i < n_trials; ++i) {
        out.push_back(draw_settings(TrialKey{seed, i}));
    }
    return out;
}

DetectedOutcome apply_detection(RawOutcome raw, const DetectorConfig &config, RandomStream &rng) {
    // Three draws every time, so the stream position never depends on the outcome.
    double window = rng.uniform();
    double alice_keep = rng.uniform();
    double bob_keep = rng.uniform();
    if (window < config.empty_window_rate.value()) {
        return DetectedOutcome{RawOutcome{Click::kNone, Click::kNone}, true};
    }
    RawOutcome out = raw;
    if (!(alice_keep < config.eta_alice.value())) {
        out.alice = Click::kNone;
    }
    if (!(bob_keep < config.eta_bob.value())) {
        out.bob = Click::kNone;
    }
    return DetectedOutcome{out, false};
}

void apply_detection(std::span<TrialRecord> records, const DetectorConfig &config, std::uint64_t seed) {
    for (auto &r : records) {
        RandomStream rng(seed, StreamDomain::kDetection, r.index);
        auto detected = apply_detection(RawOutcome{r.alice, r.bob}, config, rng);
        r.alice = detected.outcome.alice;
        r.bob = detected.outcome.bob;
    }
}

std::string_view to_string(LeakageMode mode) {
    switch (mode) {
        case LeakageMode::kNone:
            return "none";
        case LeakageMode::kOutcomeOnly:
            return "outcome";
        case LeakageMode::kSettingOnly:
            return "setting";
        case LeakageMode::kBoth:
            return "both";
    }
    return "none";
}

LeakageMode parse_leakage_mode(std::string_view text) {
    for (auto mode : {LeakageMode::kNone, LeakageMode::kOutcomeOnly, LeakageMode::kSettingOnly, LeakageMode::kBoth}) {
        if (text == to_string(mode)) {
            return mode;
        }
    }
    throw NotFoundError("unknown leakage mode '" + std::string(text) + "' (none|outcome|setting|both)");
}

LeakedInfo::LeakedInfo(LeakageMode mode, std::uint8_t alice_setting, Click alice_outcome, std::uint8_t bob_setting)
    : mode_(mode), alice_setting_(alice_setting), alice_outcome_(alice_outcome), bob_setting_(bob_setting) {
}

std::uint8_t LeakedInfo::alice_setting() const {
    if (mode_ != LeakageMode::kSettingOnly && mode_ != LeakageMode::kBoth) {
        throw ContractViolation("strategy read Alice's setting over a '" + std::string(to_string(mode_)) +
                                "' channel");
    }
    return alice_setting_;
}

bool LeakedInfo::alice_detected() const {
    if (mode_ != LeakageMode::kOutcomeOnly && mode_ != LeakageMode::kBoth) {
        throw ContractViolation("strategy read Alice's outcome over a '" + std::string(to_string(mode_)) +
                                "' channel");
    }
    return alice_outcome_ == Click::kPlus;
}

ForgingTarget ForgingTarget::quantum(QuantumStateParam state, const AngleSet &angles) {
    ForgingTarget target;
    for (auto p : kSettingPairs) {
        target.pairs[p.index()] = quantum_joint_probs(state, angles.alice_angle(p), angles.bob_angle(p));
    }
    return target;
}

ForgingTarget ForgingTarget::from_table(const ProbabilityTable &table) {
    ForgingTarget target;
    for (auto p : kSettingPairs) {
        double both = table.joint_at(p).value();
        double a = table.alice[p.alice].value();
        double b = table.bob[p.bob].value();
        auto &d = target.pairs[p.index()];
        d.p[1][1] = both;
        d.p[1][0] = std::max(0.0, a - both);
        d.p[0][1] = std::max(0.0, b - both);
        d.p[0][0] = std::max(0.0, 1.0 - a - b + both);
    }
    return target;
}

double ForgingTarget::bob_given_alice(SettingPair pair, bool alice_detected) const {
    const auto &d = pairs[pair.index()];
    const auto &row = d.p[alice_detected ? 1 : 0];
    double total = row[0] + row[1];
    if (total <= 0.0) {
        return d.bob_marginal();
    }
    return row[1] / total;
}

namespace {

Click click_with(double p_plus, RandomStream &rng) {
    return rng.bernoulli(p_plus) ? Click::kPlus : Click::kMinus;
}

}  // namespace

Click ConditionalForger::forge(const LeakedInfo &info, RandomStream &rng) const {
    SettingPair pair{info.alice_setting(), info.bob_setting()};
    return click_with(target_.bob_given_alice(pair, info.alice_detected()), rng);
}

Click OutcomeForger::forge(const LeakedInfo &info, RandomStream &rng) const {
    bool detected = info.alice_detected();
    std::uint8_t b = info.bob_setting();
    double p = 0.5 * (target_.bob_given_alice(SettingPair{0, b}, detected) +
                      target_.bob_given_alice(SettingPair{1, b}, detected));
    return click_with(p, rng);
}

Click SettingForger::forge(const LeakedInfo &info, RandomStream &rng) const {
    SettingPair pair{info.alice_setting(), info.bob_setting()};
    return click_with(target_.bob_given_alice(pair, true), rng);
}

std::shared_ptr<const ForgingStrategy> make_forger(std::string_view name, LeakageMode mode, ForgingTarget target) {
    if (name == "auto") {
        switch (mode) {
            case LeakageMode::kNone:
                return nullptr;
            case LeakageMode::kOutcomeOnly:
                name = "outcome-average";
                break;
            case LeakageMode::kSettingOnly:
                name = "assume-detect";
                break;
            case LeakageMode::kBoth:
                name = "conditional";
                break;
        }
    }
    if (name == "conditional") {
        return std::make_shared<ConditionalForger>(std::move(target));
    }
    if (name == "outcome-average") {
        return std::make_shared<OutcomeForger>(std::move(target));
    }
    if (name == "assume-detect") {
        return std::make_shared<SettingForger>(std::move(target));
    }
    throw NotFoundError("unknown forging strategy '" + std::string(name) + "'");
}

Click leak_and_forge(std::uint8_t alice_setting, Click alice_outcome, const LeakageChannel &channel,
                     const ForgingStrategy *strategy, std::uint8_t bob_setting, Click bob_own, RandomStream &rng,
                     double strength) {
    if (channel.mode == LeakageMode::kNone) {
        return bob_own;
    }
    if (strategy == nullptr) {
        throw ContractViolation("leakage channel without a forging strategy");
    }
    bool use_forgery = rng.bernoulli(strength);
    LeakedInfo info(channel.mode, alice_setting, alice_outcome, bob_setting);
    Click forged = strategy->forge(info, rng);
    return use_forgery ? forged : bob_own;
}

TrialRecord bit_flip(TrialRecord record, Probability rate, RandomStream &rng) {
    bool flip_alice = rng.bernoulli(rate.value());
    bool flip_bob = rng.bernoulli(rate.value());
    auto toggle = [](Click c) { return c == Click::kPlus ? Click::kNone : Click::kPlus; };
    if (flip_alice) {
        record.alice = toggle(record.alice);
    }
    if (flip_bob) {
        record.bob = toggle(record.bob);
    }
    return record;
}

void bit_flip_noise(std::span<TrialRecord> records, Probability rate, std::uint64_t seed) {
    for (auto &r : records) {
        RandomStream rng(seed, StreamDomain::kNoise, r.index);
        r = bit_flip(r, rate, rng);
    }
}

std::optional<int> decode_signaling_block(std::string_view block) {
    if (block == "0101") {
        return 0;
    }
    if (block == "0011") {
        return 1;
    }
    return std::nullopt;
}

SignalingDemo signaling_pattern_demo(int c, std::size_t length) {
    if (c != 0 && c != 1) {
        throw DomainError("control bit must be 0 or 1");
    }
    if (length < 4 || length % 4 != 0) {
        throw DomainError("signaling demo length must be a positive multiple of 4, got " + std::to_string(length));
    }
    std::string_view period = c == 0 ? "0101" : "0011";
    SignalingDemo demo;
    demo.bits.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
        demo.bits.push_back(period[i % 4]);
    }
    auto ones = std::count(demo.bits.begin(), demo.bits.end(), '1');
    demo.marginal_one = static_cast<double>(ones) / static_cast<double>(length);

    std::size_t blocks = length / 4;
    std::size_t correct = 0;
    std::array<std::size_t, 2> votes{};
    for (std::size_t i = 0; i < blocks; ++i) {
        auto decoded = decode_signaling_block(std::string_view(demo.bits).substr(4 * i, 4));
        if (decoded) {
            ++votes[*decoded];
            if (*decoded == c) {
                ++correct;
            }
        }
    }
    demo.decoded = votes[1] > votes[0] ? 1 : 0;
    demo.decoder_accuracy = static_cast<double>(correct) / static_cast<double>(blocks);
    return demo;
}

}  // namespace chsim
