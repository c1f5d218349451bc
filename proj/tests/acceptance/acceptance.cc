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


// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <unistd.h>

#include "chsim/analysis.h"
#include "chsim/channel.h"
#include "chsim/config.h"
#include "chsim/scan.h"
#include "chsim/simulation.h"
#include "cli.h"
#include "oracles.h"

namespace {

using namespace chsim;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass;
    std::string detail;
};

unsigned threads() {
    return resolve_threads(0);
}

std::string num(double v, int digits = 4) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

PartitionReport run_partitions(const Experiment &e, std::size_t k) {
    return score_partitions(simulate_partition_counts(e, k, threads()));
}

Outcome tautology_suite() {
    TautologyFuzzReport r = fuzz_tautologies(1000000, 2026);
    bool ok = r.tautology_violations == 0 && r.sum_violations == 0 && r.max_lhs <= kTautologySlack;
    return {ok, std::to_string(r.samples) + " samples, " + std::to_string(r.tautology_violations) + "+" +
                    std::to_string(r.sum_violations) + " violations, max lhs " + num(r.max_lhs, 6)};
}

Outcome quantum_oracle() {
    RandomStream rng(12, StreamDomain::kFuzz, 0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        double r = rng.uniform() * kPi / 4;
        double a = (rng.uniform() - 0.5) * 2 * kPi;
        double b = (rng.uniform() - 0.5) * 2 * kPi;
        auto d = quantum_joint_probs(QuantumStateParam(r), a, b);
        auto o = oracle::projector_probs(r, a, b);
        worst = std::max({worst, std::abs(d.coincidence() - o.joint), std::abs(d.alice_marginal() - o.alice),
                          std::abs(d.bob_marginal() - o.bob)});
    }
    double worst_maximal = 0.0;
    for (int i = 0; i < 100; ++i) {
        double a = rng.uniform() * kPi;
        double b = rng.uniform() * kPi;
        double c = quantum_joint_probs(QuantumStateParam::maximal(), a, b).coincidence();
        worst_maximal = std::max(worst_maximal, std::abs(c - 0.5 * std::pow(std::cos(a - b), 2)));
    }
    bool ok = worst <= 1e-12 && worst_maximal <= 4 * 2.220446049250313e-16;
    std::ostringstream s;
    s << "max |sampler - projector| " << worst << ", max |P(AB) - cos^2/2| " << worst_maximal;
    return {ok, s.str()};
}

Outcome ch_maximum() {
    Experiment e;
    e.n_trials = 4000000;
    e.seed = 301;
    CHReport whole = ch_values(estimate_probabilities(simulate_partition_counts(e, 1, threads())[0]));
    double expected = (std::numbers::sqrt2 - 1) / 2;
    Experiment long_run = e;
    long_run.n_trials = 10000000;
    long_run.seed = 302;
    PartitionReport parts = run_partitions(long_run, 100);
    bool ok = std::abs(whole.values[0] - expected) <= 0.005 && parts.violation_fraction[0] >= 0.95;
    return {ok, "variant 0 = " + num(whole.values[0]) + " (oracle " + num(expected) + "), fraction " +
                    num(parts.violation_fraction[0], 2) + " over 100 x 1e5"};
}

Outcome lhv_bound() {
    bool ok = true;
    std::ostringstream s;
    for (const char *name : {"cosine-sign", "detection-biased", "boundary"}) {
        Experiment e;
        e.source = make_model(name);
        e.n_trials = 4000000;
        e.seed = 401;
        PartitionReport r = run_partitions(e, 100);
        double worst_z = -1e9;
        for (std::size_t v = 0; v < kVariantCount; ++v) {
            double z = r.overall.values[v] / r.standard_error[v];
            worst_z = std::max(worst_z, z);
            ok = ok && r.overall.values[v] <= 3 * r.standard_error[v];
        }
        s << name << " max z " << num(worst_z, 2) << "; ";
        if (std::string(name) == "boundary") {
            s << "boundary fractions";
            for (double f : r.violation_fraction) {
                ok = ok && std::abs(f - 0.5) <= 0.15;
                s << " " << num(f, 2);
            }
        }
    }
    return {ok, s.str()};
}

Outcome bierhorst_mixture() {
    Experiment e;
    e.source = make_model("bierhorst-mixture");
    e.n_trials = 1000000;
    e.seed = 501;
    PartitionReport r = bierhorst_mixture_test(e, 100, {}, threads());
    bool ok = true;
    std::string detail = "fractions";
    for (double f : r.violation_fraction) {
        ok = ok && f >= 0.40 && f <= 0.60;
        detail += " " + num(f, 2);
    }
    return {ok, detail};
}

Experiment leakage(LeakageMode mode, std::uint64_t seed) {
    Experiment e;
    e.source = make_model("cosine-sign");
    e.leakage = LeakageChannel{mode};
    e.forger = make_forger("auto", mode, ForgingTarget::quantum(QuantumStateParam::maximal(), e.angles));
    e.n_trials = 4000000;
    e.seed = seed;
    return e;
}

Outcome leakage_dichotomy() {
    Experiment both = leakage(LeakageMode::kBoth, 605);
    auto tables = simulate_partition_counts(both, 100, threads());
    CountsTable all;
    for (const auto &t : tables) {
        all.merge(t);
    }
    ProbabilityTable got = estimate_probabilities(all);
    ProbabilityTable want = quantum_table(QuantumStateParam::maximal(), both.angles);
    double worst_z = 0.0;
    for (auto p : kSettingPairs) {
        double q = want.joint_at(p).value();
        double n = static_cast<double>(all.at(p).trials);
        worst_z = std::max(worst_z, std::abs(got.joint_at(p).value() - q) / std::sqrt(q * (1 - q) / n));
    }
    for (std::uint8_t s = 0; s < 2; ++s) {
        double na = static_cast<double>(all.at(SettingPair{s, 0}).trials + all.at(SettingPair{s, 1}).trials);
        double nb = static_cast<double>(all.at(SettingPair{0, s}).trials + all.at(SettingPair{1, s}).trials);
        double qa = want.alice[s].value(), qb = want.bob[s].value();
        worst_z = std::max(worst_z, std::abs(got.alice[s].value() - qa) / std::sqrt(qa * (1 - qa) / na));
        worst_z = std::max(worst_z, std::abs(got.bob[s].value() - qb) / std::sqrt(qb * (1 - qb) / nb));
    }
    double both_fraction = score_partitions(tables).violation_fraction[0];
    double outcome_fraction = run_partitions(leakage(LeakageMode::kOutcomeOnly, 602), 100).violation_fraction[0];
    double setting_fraction = run_partitions(leakage(LeakageMode::kSettingOnly, 603), 100).violation_fraction[0];
    bool ok = worst_z <= 3.0 && both_fraction >= 0.95 && outcome_fraction <= 0.55 && setting_fraction <= 0.55;
    return {ok, "both: max entry z " + num(worst_z, 2) + ", fraction " + num(both_fraction, 2) +
                    "; outcome-only fraction " + num(outcome_fraction, 2) + "; setting-only fraction " +
                    num(setting_fraction, 2)};
}

Outcome detection_loophole() {
    Experiment e;
    e.source = make_model("detection-biased");
    e.n_trials = 1000000;
    e.seed = 701;
    ProbabilityTable t = estimate_probabilities(simulate_partition_counts(e, 1, threads())[0]);
    double s = chsh_value(t, FairSampling::kOn);
    CHReport ch = ch_values(t);
    bool ok = s > 2.0 && !ch.any_violated;
    std::string detail = "fair-sampled S " + num(s, 3) + ", CH";
    for (double v : ch.values) {
        detail += " " + num(v);
    }
    return {ok, detail};
}

Outcome efficiency_scan_check() {
    ExperimentConfig cfg = parse_config("[run]\nseed = 801\n[scan]\n");
    ScanOptions o = make_scan_options(cfg);
    o.threads = threads();
    ScanTable t = efficiency_scan(o);

    auto column = [&](double eta) {
        for (std::size_t j = 0; j < t.etas.size(); ++j) {
            if (std::abs(t.etas[j] - eta) < 1e-9) {
                return j;
            }
        }
        return t.etas.size();
    };
    std::size_t j60 = column(0.60), j75 = column(0.75);
    bool ok = t.states.size() == 5 && t.etas.size() == 9 && j60 < 9 && j75 < 9;

    bool persistent_at_60 = false;
    for (std::size_t i = 0; i < t.states.size(); ++i) {
        for (std::size_t v = 0; v < kVariantCount; ++v) {
            persistent_at_60 = persistent_at_60 || t.at(i, j60).persistent(v);
        }
    }
    bool small_r_at_75 = false;
    for (std::size_t i = 0; i < t.states.size(); ++i) {
        small_r_at_75 = small_r_at_75 || (t.states[i] < kPi / 4 - 1e-9 && t.at(i, j75).violating());
    }
    // Within every state row, once a cell violates all higher efficiencies do too.
    bool monotone = true;
    for (std::size_t i = 0; i < t.states.size(); ++i) {
        bool seen = false;
        for (std::size_t j = 0; j < t.etas.size(); ++j) {
            bool v = t.at(i, j).violating();
            monotone = monotone && (!seen || v);
            seen = seen || v;
        }
    }
    ok = ok && !persistent_at_60 && small_r_at_75 && monotone;
    return {ok, std::string("persistent at 0.60: ") + (persistent_at_60 ? "yes" : "no") +
                    ", small-r violation at 0.75: " + (small_r_at_75 ? "yes" : "no") +
                    ", monotone in eta: " + (monotone ? "yes" : "no")};
}

Outcome no_signaling() {
    Experiment e;
    e.n_trials = 1000000;
    e.seed = 901;
    CountsTable counts = simulate_partition_counts(e, 1, threads())[0];
    ConditionalMarginals m = conditional_marginals(counts);
    auto se = pi_difference_standard_errors(counts);
    std::array<double, 4> diff{};
    for (std::uint8_t s = 0; s < 2; ++s) {
        diff[2 * s] = std::abs(m.alice[SettingPair{s, 0}.index()].value() - m.alice[SettingPair{s, 1}.index()].value());
        diff[2 * s + 1] = std::abs(m.bob[SettingPair{0, s}.index()].value() - m.bob[SettingPair{1, s}.index()].value());
    }
    double worst_z = 0.0;
    for (int i = 0; i < 4; ++i) {
        worst_z = std::max(worst_z, diff[i] / se[i]);
    }

    Experiment aligned = e;
    aligned.angles.alice = {0.0, kPi / 4};
    aligned.angles.bob = {0.0, kPi / 4};
    aligned.seed = 902;
    double oi = oi_residual(outcome_conditionals(simulate_partition_counts(aligned, 1, threads())[0]));
    bool ok = worst_z <= 3.0 && oi >= 0.3;
    return {ok, "pi residual " + num(pi_residual(m), 5) + " (max z " + num(worst_z, 2) + "), aligned oi residual " +
                    num(oi)};
}

Outcome signaling_pattern() {
    bool ok = true;
    std::string detail;
    for (int c = 0; c < 2; ++c) {
        SignalingDemo d = signaling_pattern_demo(c, 1024);
        ok = ok && d.marginal_one == 0.5 && d.decoder_accuracy == 1.0 && d.decoded == c;
        detail += "c=" + std::to_string(c) + " P('1') " + num(d.marginal_one, 3) + " accuracy " +
                  num(d.decoder_accuracy, 3) + "; ";
    }
    return {ok, detail};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    fs::path dir = fs::temp_directory_path() / ("chsim_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    {
        std::ofstream cfg(dir / "run.ini");
        cfg << "[source]\nmodel = quantum\n[detector]\neta_alice = 0.9\neta_bob = 0.85\nempty_window_rate = 0.02\n"
               "noise_rate = 0.001\n[run]\ntrials = 300000\npartitions = 30\nseed = 1101\n"
               "[scan]\nstates = maximal, 0.3\netas = 0.75, 1\ntrials_per_cell = 40000\npartitions = 10\n";
    }
    std::ostringstream sink;
    bool ok = true;
    for (const char *t : {"1", "4"}) {
        std::string out = (dir / (std::string("t") + t)).string();
        ok = ok && cli::run({"chsim", "simulate", "--config", (dir / "run.ini").string(), "--threads", t, "--out", out},
                            sink, sink) == 0;
        ok = ok && cli::run({"chsim", "scan", "--config", (dir / "run.ini").string(), "--threads", t, "--out",
                             out + "/scan.csv"},
                            sink, sink) == 0;
    }
    int identical = 0;
    for (const char *f : {"trials.csv", "report.csv", "partitions.csv", "scan.csv"}) {
        std::string a = slurp(dir / "t1" / f);
        bool same = !a.empty() && a == slurp(dir / "t4" / f);
        identical += same;
        ok = ok && same;
    }
    fs::remove_all(dir);
    return {ok, std::to_string(identical) + "/4 output files byte-identical at --threads 1 and 4"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char *name;
        std::function<Outcome()> check;
    };
    const Criterion criteria[] = {
        {1, "tautology suite", tautology_suite},
        {2, "quantum oracle equivalence", quantum_oracle},
        {3, "CH maximum", ch_maximum},
        {4, "LHV bound", lhv_bound},
        {5, "temporal mixture", bierhorst_mixture},
        {6, "leakage dichotomy", leakage_dichotomy},
        {7, "detection-loophole contrast", detection_loophole},
        {8, "efficiency scan", efficiency_scan_check},
        {9, "no-signaling / outcome independence", no_signaling},
        {10, "signaling pattern demo", signaling_pattern},
        {11, "determinism across threads", determinism},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << c.id << "  " << c.name << ": " << o.detail
                  << "  [" << num(seconds, 1) << "s]" << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
