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

// Trial-outcome generators: the quantum joint sampler, local hidden-variable
// models, and temporal mixtures of local models.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "chsim/inequality.h"
#include "chsim/random.h"

namespace chsim {

/// What one side registered in one trial. kPlus is the single-channel detection event
/// the CH metric counts (transmission through the polarizer, then detection); kMinus is
/// a click on the orthogonal port, used only by the fair-sampled CHSH contrast.
enum class Click : std::uint8_t { kNone = 0, kPlus = 1, kMinus = 2 };

struct RawOutcome {
    Click alice = Click::kNone;
    Click bob = Click::kNone;

    bool operator==(const RawOutcome &) const = default;
};

/// Pure state cos(r)|HH> + sin(r)|VV>; r = pi/4 is maximally entangled, r -> 0 a product state.
class QuantumStateParam {
   public:
    explicit QuantumStateParam(double r);

    static QuantumStateParam maximal() {
        return QuantumStateParam(std::numbers::pi / 4);
    }

    double r() const {
        return r_;
    }

   private:
    double r_;
};

/// Outcome distribution over {detect, no detect}^2, indexed [alice_detect][bob_detect].
struct DetectionDistribution {
    std::array<std::array<double, 2>, 2> p{};

    double coincidence() const {
        return p[1][1];
    }
    double alice_marginal() const {
        return p[1][0] + p[1][1];
    }
    double bob_marginal() const {
        return p[0][1] + p[1][1];
    }
};

/// Polarizer transmission probabilities for the pure state at analyzer angles a, b (radians).
/// For the maximal state the coincidence probability is cos^2(a - b) / 2.
DetectionDistribution quantum_joint_probs(QuantumStateParam state, double a, double b);

/// Exact table of the quantum source seen through detectors of efficiency eta_alice / eta_bob.
ProbabilityTable quantum_table(QuantumStateParam state, const AngleSet &angles, double eta_alice = 1.0,
                               double eta_bob = 1.0);

/// Shared hidden variable, drawn once per trial before either setting is consulted.
struct HiddenVariable {
    std::array<double, 2> value{};
};

/// A local hidden-variable model. Each side's response sees only its own setting, the
/// shared hidden variable, and its own local randomness: there is no parameter through
/// which the remote setting could reach it.
class LocalModel {
   public:
    virtual ~LocalModel() = default;

    virtual std::string_view name() const = 0;
    virtual HiddenVariable draw(RandomStream &shared) const = 0;
    virtual Click alice_response(double setting, const HiddenVariable &lambda, RandomStream &local) const = 0;
    virtual Click bob_response(double setting, const HiddenVariable &lambda, RandomStream &local) const = 0;
};

/// lambda uniform on [0, pi); port plus iff cos 2(setting - lambda) > 0. Every pair is detected.
class CosineSignModel final : public LocalModel {
   public:
    std::string_view name() const override {
        return "cosine-sign";
    }
    HiddenVariable draw(RandomStream &shared) const override;
    Click alice_response(double setting, const HiddenVariable &lambda, RandomStream &local) const override;
    Click bob_response(double setting, const HiddenVariable &lambda, RandomStream &local) const override;
};

/// lambda uniform on [0, pi); the port follows the sign of cos 2(setting - lambda) and the
/// click survives with probability |cos 2(setting - lambda)|^exponent. Detection is
/// likeliest where the outcome is most "certain", which is what a fair-sampling
/// analysis mistakes for a correlation.
class DetectionBiasedModel final : public LocalModel {
   public:
    explicit DetectionBiasedModel(double exponent = 1.0);

    std::string_view name() const override {
        return "detection-biased";
    }
    double exponent() const {
        return exponent_;
    }
    HiddenVariable draw(RandomStream &shared) const override;
    Click alice_response(double setting, const HiddenVariable &lambda, RandomStream &local) const override;
    Click bob_response(double setting, const HiddenVariable &lambda, RandomStream &local) const override;

   private:
    Click respond(double setting, const HiddenVariable &lambda, RandomStream &local) const;

    double exponent_;
};

/// lambda uniform on [0,1): both sides register plus at every setting iff lambda < rate,
/// nothing otherwise. All four CH variants have expectation exactly 0, so the model sits
/// on the classical boundary and per-run estimates scatter symmetrically around it.
class BoundaryModel final : public LocalModel {
   public:
    explicit BoundaryModel(double detect_rate = 0.5);

    std::string_view name() const override {
        return "boundary";
    }
    double detect_rate() const {
        return rate_;
    }
    HiddenVariable draw(RandomStream &shared) const override;
    Click alice_response(double setting, const HiddenVariable &lambda, RandomStream &local) const override;
    Click bob_response(double setting, const HiddenVariable &lambda, RandomStream &local) const override;

   private:
    double rate_;
};

struct QuantumJointSource {
    QuantumStateParam state = QuantumStateParam::maximal();
};

struct LocalSource {
    std::shared_ptr<const LocalModel> model;
};

/// Local components that take turns in blocks: the schedule cycles through
/// `block_lengths[0]` trials of component 0, then `block_lengths[1]` of component 1, ...
struct TemporalMixtureSource {
    std::vector<std::shared_ptr<const LocalModel>> components;
    std::vector<std::uint64_t> block_lengths;

    std::size_t component_at(std::uint64_t trial) const;
};

enum class SourceKind { kQuantumJoint, kLocal, kTemporalMixture };

class SourceModel {
   public:
    using Variant = std::variant<QuantumJointSource, LocalSource, TemporalMixtureSource>;

    explicit SourceModel(QuantumJointSource source);
    explicit SourceModel(LocalSource source);
    explicit SourceModel(TemporalMixtureSource source);

    SourceKind kind() const;
    const Variant &variant() const {
        return source_;
    }
    std::string description() const;

   private:
    Variant source_;
};

/// Draws one trial's raw outcome at analyzer angles a (Alice) and b (Bob). Local kinds
/// draw lambda from the trial's shared stream and evaluate each side from its own local
/// stream; the quantum kind samples the joint distribution given both angles.
RawOutcome sample_trial(const SourceModel &model, double a, double b, const TrialKey &key);

using ModelParams = std::map<std::string, double, std::less<>>;

struct CatalogEntry {
    std::string name;
    std::string description;
    SourceKind kind;
    ModelParams defaults;
    AngleSet default_angles;
};

/// Named built-in sources: "quantum", "cosine-sign", "detection-biased", "boundary",
/// "bierhorst-mixture".
const std::vector<CatalogEntry> &builtin_models();

/// Throws NotFoundError for an unknown name.
const CatalogEntry &find_model(std::string_view name);

/// Builds a catalog model. `overrides` may only name parameters listed in the entry's
/// defaults (ConfigError otherwise); values are range-checked.
SourceModel make_model(std::string_view name, const ModelParams &overrides = {});

}  // namespace chsim
