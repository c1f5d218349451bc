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


#include "chsim/sources.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chsim/errors.h"

namespace chsim {

namespace {

constexpr double kPi = std::numbers::pi;

Click port_of(double setting, const HiddenVariable &lambda) {
    return std::cos(2.0 * (setting - lambda.value[0])) > 0.0 ? Click::kPlus : Click::kMinus;
}

Click detect_flag_to_click(bool detected) {
    return detected ? Click::kPlus : Click::kMinus;
}

}  // namespace

QuantumStateParam::QuantumStateParam(double r) : r_(r) {
    if (!(r >= 0.0 && r <= kPi / 4 + 1e-15)) {
        throw DomainError("state parameter r must lie in [0, pi/4], got " + std::to_string(r));
    }
}

DetectionDistribution quantum_joint_probs(QuantumStateParam state, double a, double b) {
    double c = std::cos(state.r());
    double s = std::sin(state.r());
    double amplitude = c * std::cos(a) * std::cos(b) + s * std::sin(a) * std::sin(b);
    double both = amplitude * amplitude;
    double alice = c * c * std::cos(a) * std::cos(a) + s * s * std::sin(a) * std::sin(a);
    double bob = c * c * std::cos(b) * std::cos(b) + s * s * std::sin(b) * std::sin(b);

    DetectionDistribution d;
    d.p[1][1] = both;
    d.p[1][0] = std::max(0.0, alice - both);
    d.p[0][1] = std::max(0.0, bob - both);
    d.p[0][0] = std::max(0.0, 1.0 - alice - bob + both);
    return d;
}

ProbabilityTable quantum_table(QuantumStateParam state, const AngleSet &angles, double eta_alice, double eta_bob) {
    ProbabilityTable table;
    for (auto p : kSettingPairs) {
        auto d = quantum_joint_probs(state, angles.alice_angle(p), angles.bob_angle(p));
        table.joint[p.index()] = Probability(eta_alice * eta_bob * d.coincidence());
        // With both ports, -1 at angle x is +1 at x + pi/2; efficiency cancels in the ratio.
        table.coincident_correlation[p.index()] = d.p[1][1] + d.p[0][0] - d.p[1][0] - d.p[0][1];
    }
    for (std::uint8_t s = 0; s < 2; ++s) {
        table.alice[s] = Probability(eta_alice * quantum_joint_probs(state, angles.alice[s], 0.0).alice_marginal());
        table.bob[s] = Probability(eta_bob * quantum_joint_probs(state, 0.0, angles.bob[s]).bob_marginal());
    }
    return table;
}

HiddenVariable CosineSignModel::draw(RandomStream &shared) const {
    return HiddenVariable{{kPi * shared.uniform(), 0.0}};
}

Click CosineSignModel::alice_response(double setting, const HiddenVariable &lambda, RandomStream &) const {
    return port_of(setting, lambda);
}

Click CosineSignModel::bob_response(double setting, const HiddenVariable &lambda, RandomStream &) const {
    return port_of(setting, lambda);
}

DetectionBiasedModel::DetectionBiasedModel(double exponent) : exponent_(exponent) {
    if (!(exponent >= 0.0 && std::isfinite(exponent))) {
        throw DomainError("detection-biased exponent must be finite and >= 0");
    }
}

HiddenVariable DetectionBiasedModel::draw(RandomStream &shared) const {
    return HiddenVariable{{kPi * shared.uniform(), 0.0}};
}

Click DetectionBiasedModel::respond(double setting, const HiddenVariable &lambda, RandomStream &local) const {
    double c = std::cos(2.0 * (setting - lambda.value[0]));
    double keep = std::pow(std::abs(c), exponent_);
    if (!local.bernoulli(keep)) {
        return Click::kNone;
    }
    return c > 0.0 ? Click::kPlus : Click::kMinus;
}

Click DetectionBiasedModel::alice_response(double setting, const HiddenVariable &lambda, RandomStream &local) const {
    return respond(setting, lambda, local);
}

Click DetectionBiasedModel::bob_response(double setting, const HiddenVariable &lambda, RandomStream &local) const {
    return respond(setting, lambda, local);
}

BoundaryModel::BoundaryModel(double detect_rate) : rate_(detect_rate) {
    if (!(detect_rate >= 0.0 && detect_rate <= 1.0)) {
        throw DomainError("boundary detect_rate must lie in [0,1]");
    }
}

HiddenVariable BoundaryModel::draw(RandomStream &shared) const {
    return HiddenVariable{{shared.uniform(), 0.0}};
}

Click BoundaryModel::alice_response(double, const HiddenVariable &lambda, RandomStream &) const {
    return lambda.value[0] < rate_ ? Click::kPlus : Click::kNone;
}

Click BoundaryModel::bob_response(double, const HiddenVariable &lambda, RandomStream &) const {
    return lambda.value[0] < rate_ ? Click::kPlus : Click::kNone;
}

std::size_t TemporalMixtureSource::component_at(std::uint64_t trial) const {
    std::uint64_t cycle = std::accumulate(block_lengths.begin(), block_lengths.end(), std::uint64_t{0});
    std::uint64_t position = trial % cycle;
    for (std::size_t i = 0; i < block_lengths.size(); ++i) {
        if (position < block_lengths[i]) {
            return i;
        }
        position -= block_lengths[i];
    }
    return block_lengths.size() - 1;  // unreachable for a consistent schedule
}

SourceModel::SourceModel(QuantumJointSource source) : source_(std::move(source)) {
}

SourceModel::SourceModel(LocalSource source) : source_(std::move(source)) {
    if (!std::get<LocalSource>(source_).model) {
        throw DomainError("local source without a model");
    }
}

SourceModel::SourceModel(TemporalMixtureSource source) : source_(std::move(source)) {
    const auto &mix = std::get<TemporalMixtureSource>(source_);
    if (mix.components.empty() || mix.components.size() != mix.block_lengths.size()) {
        throw DomainError("temporal mixture needs one block length per component");
    }
    if (std::any_of(mix.components.begin(), mix.components.end(), [](const auto &c) { return !c; })) {
        throw DomainError("temporal mixture component is null");
    }
    if (std::accumulate(mix.block_lengths.begin(), mix.block_lengths.end(), std::uint64_t{0}) == 0) {
        throw DomainError("temporal mixture schedule has zero length");
    }
}

SourceKind SourceModel::kind() const {
    return static_cast<SourceKind>(source_.index());
}

std::string SourceModel::description() const {
    std::ostringstream out;
    std::visit(
        [&](const auto &s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, QuantumJointSource>) {
                out << "quantum joint sampler, r=" << s.state.r();
            } else if constexpr (std::is_same_v<T, LocalSource>) {
                out << "local model " << s.model->name();
            } else {
                out << "temporal mixture of";
                for (std::size_t i = 0; i < s.components.size(); ++i) {
                    out << (i ? ", " : " ") << s.components[i]->name() << " for " << s.block_lengths[i] << " trials";
                }
            }
        },
        source_);
    return out.str();
}

namespace {

RawOutcome sample_local(const LocalModel &model, double a, double b, const TrialKey &key) {
    RandomStream shared = key.stream(StreamDomain::kSource);
    HiddenVariable lambda = model.draw(shared);
    RandomStream alice_local = key.stream(StreamDomain::kAliceLocal);
    RandomStream bob_local = key.stream(StreamDomain::kBobLocal);
    return RawOutcome{model.alice_response(a, lambda, alice_local), model.bob_response(b, lambda, bob_local)};
}

}  // namespace

RawOutcome sample_trial(const SourceModel &model, double a, double b, const TrialKey &key) {
    return std::visit(
        [&](const auto &s) -> RawOutcome {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, QuantumJointSource>) {
                auto d = quantum_joint_probs(s.state, a, b);
                RandomStream rng = key.stream(StreamDomain::kSource);
                double u = rng.uniform();
                double cumulative = 0.0;
                for (int ad : {1, 0}) {
                    for (int bd : {1, 0}) {
                        cumulative += d.p[ad][bd];
                        if (u < cumulative) {
                            return RawOutcome{detect_flag_to_click(ad), detect_flag_to_click(bd)};
                        }
                    }
                }
                return RawOutcome{Click::kMinus, Click::kMinus};
            } else if constexpr (std::is_same_v<T, LocalSource>) {
                return sample_local(*s.model, a, b, key);
            } else {
                return sample_local(*s.components[s.component_at(key.index)], a, b, key);
            }
        },
        model.variant());
}

namespace {

double param(const ModelParams &params, std::string_view key) {
    return params.find(key)->second;
}

std::uint64_t positive_count(double value, std::string_view key) {
    if (!(value >= 1.0) || value != std::floor(value) || value > 1e15) {
        throw ConfigError("source." + std::string(key), "must be a positive integer");
    }
    return static_cast<std::uint64_t>(value);
}

void require_unit(double value, std::string_view key) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ConfigError("source." + std::string(key), "must lie in [0,1]");
    }
}

SourceModel build(const CatalogEntry &entry, const ModelParams &p) {
    if (entry.name == "quantum") {
        double r = param(p, "state_r");
        if (!(r >= 0.0 && r <= kPi / 4 + 1e-15)) {
            throw ConfigError("source.state_r", "must lie in [0, pi/4]");
        }
        return SourceModel(QuantumJointSource{QuantumStateParam(std::min(r, kPi / 4))});
    }
    if (entry.name == "cosine-sign") {
        return SourceModel(LocalSource{std::make_shared<CosineSignModel>()});
    }
    if (entry.name == "detection-biased") {
        double e = param(p, "exponent");
        if (!(e >= 0.0 && std::isfinite(e))) {
            throw ConfigError("source.exponent", "must be finite and >= 0");
        }
        return SourceModel(LocalSource{std::make_shared<DetectionBiasedModel>(e)});
    }
    if (entry.name == "boundary") {
        require_unit(param(p, "detect_rate"), "detect_rate");
        return SourceModel(LocalSource{std::make_shared<BoundaryModel>(param(p, "detect_rate"))});
    }
    // bierhorst-mixture
    require_unit(param(p, "low_rate"), "low_rate");
    require_unit(param(p, "high_rate"), "high_rate");
    require_unit(param(p, "weight"), "weight");
    std::uint64_t block = positive_count(param(p, "block_length"), "block_length");
    std::uint64_t cycle = 2 * block;
    auto first = static_cast<std::uint64_t>(std::llround(param(p, "weight") * static_cast<double>(cycle)));
    TemporalMixtureSource mix;
    mix.components = {std::make_shared<BoundaryModel>(param(p, "low_rate")),
                      std::make_shared<BoundaryModel>(param(p, "high_rate"))};
    mix.block_lengths = {first, cycle - first};
    return SourceModel(std::move(mix));
}

}  // namespace

const std::vector<CatalogEntry> &builtin_models() {
    static const std::vector<CatalogEntry> catalog = {
        {"quantum",
         "Quantum joint sampler for cos(r)|HH> + sin(r)|VV> with single-channel polarizers "
         "(nonlocal by construction). state_r in [0, pi/4].",
         SourceKind::kQuantumJoint,
         {{"state_r", kPi / 4}},
         AngleSet{}},
        {"cosine-sign",
         "Deterministic LHV: lambda ~ U[0,pi), plus iff cos 2(setting - lambda) > 0. "
         "CH variant 0 sits exactly on the bound at the default angles.",
         SourceKind::kLocal,
         {},
         AngleSet{}},
        {"detection-biased",
         "LHV with lambda ~ U[0,pi): port from sign(cos 2(setting - lambda)), click kept with "
         "probability |cos 2(setting - lambda)|^exponent.",
         SourceKind::kLocal,
         {{"exponent", 1.0}},
         AngleSet{}},
        {"boundary",
         "LHV with lambda ~ U[0,1): both sides detect at every setting iff lambda < detect_rate. "
         "All four CH variants have expectation 0.",
         SourceKind::kLocal,
         {{"detect_rate", 0.5}},
         AngleSet{}},
        {"bierhorst-mixture",
         "Temporal mixture of two boundary components with detection rates low_rate and "
         "high_rate; a cycle of 2*block_length trials gives component 0 a share `weight`.",
         SourceKind::kTemporalMixture,
         {{"low_rate", 0.3}, {"high_rate", 0.8}, {"block_length", 5000.0}, {"weight", 0.5}},
         AngleSet{}},
    };
    return catalog;
}

const CatalogEntry &find_model(std::string_view name) {
    const auto &catalog = builtin_models();
    auto it = std::find_if(catalog.begin(), catalog.end(), [&](const CatalogEntry &e) { return e.name == name; });
    if (it == catalog.end()) {
        throw NotFoundError("unknown source model '" + std::string(name) + "'");
    }
    return *it;
}

SourceModel make_model(std::string_view name, const ModelParams &overrides) {
    const CatalogEntry &entry = find_model(name);
    ModelParams params = entry.defaults;
    for (const auto &[key, value] : overrides) {
        auto it = params.find(key);
        if (it == params.end()) {
            throw ConfigError("source." + key, "unknown parameter for model '" + entry.name + "'");
        }
        it->second = value;
    }
    return build(entry, params);
}

}  // namespace chsim
