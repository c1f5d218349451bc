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


#include "chsim/config.h"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "chsim/errors.h"

namespace chsim {

namespace {

namespace pt = boost::property_tree;

constexpr double kPi = std::numbers::pi;

std::string_view trim(std::string_view s) {
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

double number(std::string_view text, const std::string &field) {
    if (auto v = to_double(text)) {
        return *v;
    }
    throw ConfigError(field, "expected a number, got '" + std::string(text) + "'");
}

double unit_interval(std::string_view text, const std::string &field) {
    double v = number(text, field);
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ConfigError(field, "must lie in [0,1], got " + std::string(trim(text)));
    }
    return v;
}

std::uint64_t count(std::string_view text, const std::string &field, std::uint64_t minimum) {
    text = trim(text);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        // Allow exact scientific notation such as 1e6.
        auto d = to_double(text);
        if (!d || *d < 0.0 || *d != std::floor(*d) || *d > 9.0e18) {
            throw ConfigError(field, "expected a nonnegative integer, got '" + std::string(text) + "'");
        }
        value = static_cast<std::uint64_t>(*d);
    }
    if (value < minimum) {
        throw ConfigError(field, "must be at least " + std::to_string(minimum));
    }
    return value;
}

bool boolean(std::string_view text, const std::string &field) {
    text = trim(text);
    if (text == "true" || text == "yes" || text == "1") {
        return true;
    }
    if (text == "false" || text == "no" || text == "0") {
        return false;
    }
    throw ConfigError(field, "expected true or false, got '" + std::string(text) + "'");
}

double state_param(std::string_view text, const std::string &field) {
    text = trim(text);
    double r = text == "maximal" ? kPi / 4 : 0.0;
    if (text != "maximal") {
        try {
            r = parse_angle(text);
        } catch (const DomainError &e) {
            throw ConfigError(field, e.what());
        }
    }
    if (!(r >= 0.0 && r <= kPi / 4 + 1e-12)) {
        throw ConfigError(field, "state parameter must lie in [0, pi/4]");
    }
    return std::min(r, kPi / 4);
}

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> items;
    while (true) {
        auto comma = text.find(',');
        auto item = trim(text.substr(0, comma));
        if (!item.empty()) {
            items.push_back(item);
        }
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    return items;
}

void reject_unknown(const pt::ptree &section, const std::string &name, const std::set<std::string> &allowed) {
    for (const auto &[key, child] : section) {
        if (!allowed.count(key)) {
            throw ConfigError(name + "." + key, "unknown key");
        }
        if (!child.empty()) {
            throw ConfigError(name + "." + key, "nested values are not supported");
        }
    }
}

void read_source(const pt::ptree &section, ExperimentConfig &config) {
    if (auto model = section.get_optional<std::string>("model")) {
        config.source.model = std::string(trim(*model));
    }
    const CatalogEntry *entry = nullptr;
    try {
        entry = &find_model(config.source.model);
    } catch (const NotFoundError &e) {
        throw ConfigError("source.model", e.what());
    }
    for (const auto &[key, child] : section) {
        if (key == "model") {
            continue;
        }
        if (!entry->defaults.count(key)) {
            throw ConfigError("source." + key, "unknown key for model '" + entry->name + "'");
        }
        std::string field = "source." + key;
        config.source.params[key] = key == "state_r" ? state_param(child.data(), field) : number(child.data(), field);
    }
}

void read_detector(const pt::ptree &section, ExperimentConfig &config) {
    reject_unknown(section, "detector", {"eta_alice", "eta_bob", "empty_window_rate", "noise_rate"});
    auto &d = config.detector;
    if (auto v = section.get_optional<std::string>("eta_alice")) {
        d.eta_alice = unit_interval(*v, "detector.eta_alice");
    }
    if (auto v = section.get_optional<std::string>("eta_bob")) {
        d.eta_bob = unit_interval(*v, "detector.eta_bob");
    }
    if (auto v = section.get_optional<std::string>("empty_window_rate")) {
        d.empty_window_rate = unit_interval(*v, "detector.empty_window_rate");
    }
    if (auto v = section.get_optional<std::string>("noise_rate")) {
        d.noise_rate = unit_interval(*v, "detector.noise_rate");
    }
}

void read_leakage(const pt::ptree &section, ExperimentConfig &config) {
    reject_unknown(section, "leakage", {"mode", "strategy", "strength", "target_state"});
    auto &l = config.leakage;
    if (auto v = section.get_optional<std::string>("mode")) {
        try {
            l.mode = parse_leakage_mode(trim(*v));
        } catch (const NotFoundError &e) {
            throw ConfigError("leakage.mode", e.what());
        }
    }
    if (auto v = section.get_optional<std::string>("strategy")) {
        l.strategy = std::string(trim(*v));
        static const std::set<std::string> kStrategies{"auto", "conditional", "outcome-average", "assume-detect"};
        if (!kStrategies.count(l.strategy)) {
            throw ConfigError("leakage.strategy", "unknown strategy '" + l.strategy + "'");
        }
    }
    if (auto v = section.get_optional<std::string>("strength")) {
        l.strength = unit_interval(*v, "leakage.strength");
    }
    if (auto v = section.get_optional<std::string>("target_state")) {
        l.target_state = state_param(*v, "leakage.target_state");
    }
}

void read_angles(const pt::ptree &section, ExperimentConfig &config) {
    reject_unknown(section, "angles", {"alpha", "alpha_prime", "beta", "beta_prime"});
    if (section.size() != 4) {
        throw ConfigError("angles", "expected exactly 4 angles (alpha, alpha_prime, beta, beta_prime), got " +
                                        std::to_string(section.size()));
    }
    auto angle = [&](const char *key) {
        std::string field = std::string("angles.") + key;
        try {
            return parse_angle(section.get<std::string>(key));
        } catch (const DomainError &e) {
            throw ConfigError(field, e.what());
        }
    };
    config.angles.alice = {angle("alpha"), angle("alpha_prime")};
    config.angles.bob = {angle("beta"), angle("beta_prime")};
}

void read_run(const pt::ptree &section, ExperimentConfig &config) {
    reject_unknown(section, "run",
                   {"trials", "partitions", "seed", "marginal_mode", "include_empty_windows",
                    "min_trials_per_partition"});
    auto &r = config.run;
    if (auto v = section.get_optional<std::string>("trials")) {
        r.trials = count(*v, "run.trials", 1);
    }
    if (auto v = section.get_optional<std::string>("partitions")) {
        r.partitions = count(*v, "run.partitions", 1);
    }
    if (auto v = section.get_optional<std::string>("seed")) {
        r.seed = count(*v, "run.seed", 0);
    }
    if (auto v = section.get_optional<std::string>("marginal_mode")) {
        try {
            r.marginal_mode = parse_marginal_mode(trim(*v));
        } catch (const NotFoundError &e) {
            throw ConfigError("run.marginal_mode", e.what());
        }
    }
    if (auto v = section.get_optional<std::string>("include_empty_windows")) {
        r.include_empty_windows = boolean(*v, "run.include_empty_windows");
    }
    if (auto v = section.get_optional<std::string>("min_trials_per_partition")) {
        r.min_trials_per_partition = count(*v, "run.min_trials_per_partition", 1);
    }
}

void read_scan(const pt::ptree &section, ExperimentConfig &config) {
    reject_unknown(section, "scan", {"states", "etas", "angles", "trials_per_cell", "partitions"});
    ScanSpec s;
    s.states = {kPi / 4, 0.55, 0.4, 0.3, 0.2};
    s.etas = {0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95, 1.00};
    if (auto v = section.get_optional<std::string>("states")) {
        s.states.clear();
        for (auto item : split_list(*v)) {
            s.states.push_back(state_param(item, "scan.states"));
        }
        if (s.states.empty()) {
            throw ConfigError("scan.states", "grid is empty");
        }
    }
    if (auto v = section.get_optional<std::string>("etas")) {
        s.etas.clear();
        for (auto item : split_list(*v)) {
            s.etas.push_back(unit_interval(item, "scan.etas"));
        }
        if (s.etas.empty()) {
            throw ConfigError("scan.etas", "grid is empty");
        }
    }
    if (auto v = section.get_optional<std::string>("angles")) {
        auto mode = trim(*v);
        if (mode != "optimal" && mode != "fixed") {
            throw ConfigError("scan.angles", "expected optimal or fixed");
        }
        s.optimize_angles = mode == "optimal";
    }
    if (auto v = section.get_optional<std::string>("trials_per_cell")) {
        s.trials_per_cell = count(*v, "scan.trials_per_cell", 1);
    }
    if (auto v = section.get_optional<std::string>("partitions")) {
        s.partitions = count(*v, "scan.partitions", 1);
    }
    config.scan = std::move(s);
}

// The INI reader drops sections without keys, and an empty [scan] still asks for a scan.
bool declares_section(std::string_view text, std::string_view name) {
    while (!text.empty()) {
        auto eol = text.find('\n');
        auto line = trim(text.substr(0, eol));
        if (line.size() == name.size() + 2 && line.front() == '[' && line.back() == ']' &&
            line.substr(1, name.size()) == name) {
            return true;
        }
        if (eol == std::string_view::npos) {
            break;
        }
        text.remove_prefix(eol + 1);
    }
    return false;
}

}  // namespace

double parse_angle(std::string_view text) {
    text = trim(text);
    bool degrees = text.size() > 3 && text.substr(text.size() - 3) == "deg";
    if (degrees) {
        text = trim(text.substr(0, text.size() - 3));
    }
    auto v = to_double(text);
    if (!v) {
        throw DomainError("expected an angle in radians or with a 'deg' suffix, got '" + std::string(text) + "'");
    }
    return degrees ? *v * kPi / 180.0 : *v;
}

ExperimentConfig parse_config(std::string_view text) {
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw ConfigError("", "line " + std::to_string(e.line()) + ": " + e.message());
    }

    ExperimentConfig config;
    static const std::set<std::string> kSections{"source", "detector", "leakage", "angles", "run", "scan"};
    for (const auto &[name, child] : tree) {
        if (child.empty()) {
            throw ConfigError(name, "key outside of a section");
        }
        if (!kSections.count(name)) {
            throw ConfigError(name, "unknown section");
        }
    }
    read_source(tree.get_child("source", pt::ptree()), config);
    if (auto s = tree.get_child_optional("detector")) {
        read_detector(*s, config);
    }
    if (auto s = tree.get_child_optional("leakage")) {
        read_leakage(*s, config);
    }
    if (auto s = tree.get_child_optional("angles")) {
        read_angles(*s, config);
    }
    if (auto s = tree.get_child_optional("run")) {
        read_run(*s, config);
    }
    if (auto s = tree.get_child_optional("scan")) {
        read_scan(*s, config);
    } else if (declares_section(text, "scan")) {
        read_scan(pt::ptree(), config);
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

Experiment make_experiment(const ExperimentConfig &config) {
    Experiment e;
    e.source = make_model(config.source.model, config.source.params);
    e.angles = config.angles;
    e.detector = DetectorConfig{Probability(config.detector.eta_alice), Probability(config.detector.eta_bob),
                                Probability(config.detector.empty_window_rate)};
    e.noise_rate = Probability(config.detector.noise_rate);
    e.leakage = LeakageChannel{config.leakage.mode};
    e.forger = make_forger(config.leakage.strategy, config.leakage.mode,
                           ForgingTarget::quantum(QuantumStateParam(config.leakage.target_state), config.angles));
    e.forgery_strength = config.leakage.strength;
    e.include_empty_windows = config.run.include_empty_windows;
    e.n_trials = config.run.trials;
    e.seed = config.run.seed;
    return e;
}

ScanOptions make_scan_options(const ExperimentConfig &config) {
    if (!config.scan) {
        throw ConfigError("scan", "configuration has no [scan] section");
    }
    const ScanSpec &s = *config.scan;
    ScanOptions o;
    o.states = s.states;
    o.etas = s.etas;
    if (!s.optimize_angles) {
        o.fixed_angles = config.angles;
    }
    o.trials_per_cell = s.trials_per_cell;
    o.partitions = s.partitions;
    o.seed = config.run.seed;
    o.empty_window_rate = config.detector.empty_window_rate;
    o.marginal_mode = config.run.marginal_mode;
    return o;
}

}  // namespace chsim
