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


#include "cli.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "chsim/analysis.h"
#include "chsim/config.h"
#include "chsim/errors.h"
#include "chsim/report_io.h"
#include "chsim/scan.h"
#include "chsim/simulation.h"
#include "chsim/trial_io.h"

namespace chsim::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::uint64_t> trials;
    std::optional<std::size_t> partitions;
    unsigned threads = 0;
    std::string marginal_mode;
};

void add_common(CLI::App &cmd, Common &c, bool with_config = true) {
    if (with_config) {
        cmd.add_option("--config", c.config, "Experiment configuration file");
    }
    cmd.add_option("--seed", c.seed, "Override the configured seed");
    cmd.add_option("--out", c.out, "Output path");
    cmd.add_option("--trials", c.trials, "Override the trial count")->check(CLI::PositiveNumber);
    cmd.add_option("--partitions", c.partitions, "Number of partitions k")->check(CLI::PositiveNumber);
    cmd.add_option("--threads", c.threads, "Worker threads (default: $CHSIM_THREADS or all cores)");
    cmd.add_option("--marginal-mode", c.marginal_mode, "pooled or per-pair");
}

std::string fixed(double v, int digits = 6) {
    std::ostringstream s;
    s << std::showpos << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

std::string plain(double v, int digits = 3) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

std::optional<double> fair_sampled_chsh(const CountsTable &counts, MarginalMode mode) {
    try {
        return chsh_value(estimate_probabilities(counts, mode), FairSampling::kOn);
    } catch (const UndefinedEstimateError &) {
        return std::nullopt;
    }
}

void print_summary(std::ostream &out, std::size_t n, const PartitionReport &report, MarginalMode mode,
                   std::optional<double> fair_chsh) {
    out << "trials " << n << ", partitions " << report.k << ", marginals " << to_string(mode) << "\n";
    out << "variant  value       violated  fraction  chance band\n";
    for (std::size_t v = 0; v < kVariantCount; ++v) {
        out << "ch" << v << "      " << fixed(report.overall.values[v]) << "  " << std::left << std::setw(8)
            << (report.overall.violated[v] ? "yes" : "no") << std::right << "  " << plain(report.violation_fraction[v])
            << "     0.5 +/- " << plain(report.chance_band()) << "\n";
    }
    out << "any-variant fraction " << plain(report.any_violation_fraction)
        << " (chance baseline exceeds 0.5)\n";
    if (report.overall.chsh) {
        out << "CHSH S, all trials    " << fixed(*report.overall.chsh) << "\n";
    }
    if (fair_chsh) {
        out << "CHSH S, fair-sampled  " << fixed(*fair_chsh) << "\n";
    }
}

void write_reports(const fs::path &dir, const PartitionReport &report) {
    export_report(report.overall, dir / "report.csv", ReportFormat::kCsv);
    export_report(report, dir / "partitions.csv", ReportFormat::kCsv);
}

ExperimentConfig load_with_overrides(const Common &c) {
    if (c.config.empty()) {
        throw ConfigError("--config", "a configuration file is required");
    }
    ExperimentConfig cfg = load_config(c.config);
    if (c.seed) {
        cfg.run.seed = *c.seed;
    }
    if (c.trials) {
        cfg.run.trials = *c.trials;
    }
    if (c.partitions) {
        cfg.run.partitions = *c.partitions;
    }
    if (!c.marginal_mode.empty()) {
        cfg.run.marginal_mode = parse_marginal_mode(c.marginal_mode);
    }
    return cfg;
}

int simulate(const Common &c, const std::string &trial_format, std::ostream &out) {
    ExperimentConfig cfg = load_with_overrides(c);
    Experiment e = make_experiment(cfg);
    auto records = simulate_trials(e, resolve_threads(c.threads));
    PartitionOptions options{cfg.run.min_trials_per_partition, cfg.run.marginal_mode};
    PartitionReport report = partition_and_score(records, cfg.run.partitions, options);

    out << "source " << e.source.description() << ", seed " << cfg.run.seed << "\n";
    print_summary(out, records.size(), report, cfg.run.marginal_mode,
                  fair_sampled_chsh(accumulate_counts(records), cfg.run.marginal_mode));
    if (!c.out.empty()) {
        fs::path dir(c.out);
        fs::create_directories(dir);
        TrialFormat format = parse_trial_format(trial_format);
        write_trials(records, dir / (format == TrialFormat::kCsv ? "trials.csv" : "trials.jsonl"), format);
        write_reports(dir, report);
        out << "wrote " << dir.string() << "\n";
    }
    return kOk;
}

int analyze(const Common &c, const std::string &trials_path, std::size_t min_trials, std::ostream &out) {
    std::size_t k = 100;
    MarginalMode mode = MarginalMode::kPooled;
    if (!c.config.empty()) {
        ExperimentConfig cfg = load_with_overrides(c);
        k = cfg.run.partitions;
        mode = cfg.run.marginal_mode;
        min_trials = cfg.run.min_trials_per_partition;
    }
    if (c.partitions) {
        k = *c.partitions;
    }
    if (!c.marginal_mode.empty()) {
        mode = parse_marginal_mode(c.marginal_mode);
    }
    auto records = read_trials(fs::path(trials_path));
    PartitionReport report = partition_and_score(records, k, PartitionOptions{min_trials, mode});
    print_summary(out, records.size(), report, mode, fair_sampled_chsh(accumulate_counts(records), mode));
    if (!c.out.empty()) {
        fs::path dir(c.out);
        fs::create_directories(dir);
        write_reports(dir, report);
        out << "wrote " << dir.string() << "\n";
    }
    return kOk;
}

int scan(const Common &c, const std::string &states, const std::string &etas, std::ostream &out) {
    ExperimentConfig cfg = load_with_overrides(c);
    if (!states.empty() || !etas.empty()) {
        // Command-line grids go through the same validation as the [scan] section.
        std::string text = "[scan]\n";
        if (!states.empty()) {
            text += "states = " + states + "\n";
        }
        if (!etas.empty()) {
            text += "etas = " + etas + "\n";
        }
        ScanSpec grid = *parse_config(text).scan;
        if (!cfg.scan) {
            cfg.scan = grid;
        }
        if (!states.empty()) {
            cfg.scan->states = grid.states;
        }
        if (!etas.empty()) {
            cfg.scan->etas = grid.etas;
        }
    }
    ScanOptions options = make_scan_options(cfg);
    if (c.trials) {
        options.trials_per_cell = *c.trials;
    }
    if (c.partitions) {
        options.partitions = *c.partitions;
    }
    options.threads = resolve_threads(c.threads);
    ScanTable table = efficiency_scan(options);

    out << "variant-0 estimate per cell; '+' whole cell violates, '*' partition fraction above chance band\n";
    out << "r \\ eta ";
    for (double eta : table.etas) {
        out << std::setw(11) << plain(eta, 2);
    }
    out << "\n";
    for (std::size_t i = 0; i < table.states.size(); ++i) {
        out << std::left << std::setw(8) << plain(table.states[i], 4) << std::right;
        for (std::size_t j = 0; j < table.etas.size(); ++j) {
            const ScanCell &cell = table.at(i, j);
            std::string mark = cell.persistent() ? "*" : cell.violating() ? "+" : " ";
            out << std::setw(10) << fixed(cell.report.overall.values[0], 4) << mark;
        }
        out << "\n";
    }
    if (!c.out.empty()) {
        fs::path path(c.out);
        export_report(table, path, report_format_for(path));
        out << "wrote " << path.string() << "\n";
    }
    return kOk;
}

int demo_signaling(std::ostream &out) {
    for (int c = 0; c < 2; ++c) {
        SignalingDemo d = signaling_pattern_demo(c, 64);
        out << "c=" << c << "  bits " << d.bits.substr(0, 16) << "...  P('1') " << plain(d.marginal_one)
            << "  decoded " << d.decoded << "  decoder accuracy " << plain(d.decoder_accuracy) << "\n";
    }
    out << "marginals carry no trace of c, yet every 4-bit block reveals it\n";
    return kOk;
}

int demo_detection_loophole(const Common &c, std::ostream &out) {
    Experiment e;
    e.source = make_model("detection-biased");
    e.angles = find_model("detection-biased").default_angles;
    e.n_trials = c.trials.value_or(1000000);
    e.seed = c.seed.value_or(1);
    auto tables = simulate_partition_counts(e, 1, resolve_threads(c.threads));
    ProbabilityTable table = estimate_probabilities(tables[0]);
    CHReport ch = ch_values(table);
    double s_fair = chsh_value(table, FairSampling::kOn);
    double s_all = chsh_value(table, FairSampling::kOff);

    out << "source " << e.source.description() << ", " << e.n_trials << " trials\n";
    out << "CHSH S, fair-sampled  " << fixed(s_fair) << (s_fair > 2.0 ? "  exceeds 2" : "  within 2") << "\n";
    out << "CHSH S, all trials    " << fixed(s_all) << "\n";
    for (std::size_t v = 0; v < kVariantCount; ++v) {
        out << "ch" << v << "  " << fixed(ch.values[v]) << (ch.violated[v] ? "  violated" : "  not violated") << "\n";
    }
    bool contrast = s_fair > 2.0 && !ch.any_violated;
    out << (contrast ? "detection losses alone fake the post-selected CHSH violation; CH is not fooled\n"
                     : "contrast not observed on this run\n");
    return kOk;
}

int fuzz(std::uint64_t samples, std::uint64_t seed, std::ostream &out) {
    TautologyFuzzReport r = fuzz_tautologies(samples, seed);
    out << "samples " << r.samples << "\n";
    out << "tautology violations " << r.tautology_violations << " (slack " << kTautologySlack << ")\n";
    out << "m+n >= m violations " << r.sum_violations << "\n";
    out << "max lhs " << std::setprecision(17) << r.max_lhs << "\n";
    return r.tautology_violations == 0 && r.sum_violations == 0 ? kOk : kDataError;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Monte Carlo simulator and analyzer for CH-inequality experiments", "chsim"};
    app.require_subcommand(1);

    Common sim;
    std::string trial_format = "csv";
    auto *simulate_cmd = app.add_subcommand("simulate", "Run a configured experiment and score it");
    add_common(*simulate_cmd, sim);
    simulate_cmd->add_option("--trial-format", trial_format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));

    Common ana;
    std::string trials_path;
    std::size_t min_trials = 1000;
    auto *analyze_cmd = app.add_subcommand("analyze", "Score a recorded trial file");
    add_common(*analyze_cmd, ana);
    analyze_cmd->add_option("trials_file", trials_path, "Trial file (csv or jsonl)")->required();
    analyze_cmd->add_option("--min-trials", min_trials, "Minimum trials per partition")->check(CLI::PositiveNumber);

    Common sc;
    std::string states;
    std::string etas;
    auto *scan_cmd = app.add_subcommand("scan", "Efficiency scan over a (state, eta) grid");
    add_common(*scan_cmd, sc);
    scan_cmd->add_option("--states", states, "Comma-separated state parameters r");
    scan_cmd->add_option("--etas", etas, "Comma-separated detection efficiencies");

    Common dm;
    std::string demo_name;
    auto *demo_cmd = app.add_subcommand("demo", "Run a demonstration: signaling, detection-loophole");
    add_common(*demo_cmd, dm, false);
    demo_cmd->add_option("name", demo_name, "Demonstration name")->required();

    std::uint64_t samples = 1000000;
    std::uint64_t fuzz_seed = 1;
    auto *fuzz_cmd = app.add_subcommand("fuzz", "Random checks of the CH numerical tautology");
    fuzz_cmd->add_option("--samples", samples, "Number of random points");
    fuzz_cmd->add_option("--seed", fuzz_seed, "Seed");

    std::vector<std::string> rest(args.rbegin(), args.rend());
    if (!rest.empty()) {
        rest.pop_back();
    }
    try {
        app.parse(rest);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*simulate_cmd) {
            return simulate(sim, trial_format, out);
        }
        if (*analyze_cmd) {
            return analyze(ana, trials_path, min_trials, out);
        }
        if (*scan_cmd) {
            return scan(sc, states, etas, out);
        }
        if (*demo_cmd) {
            if (demo_name == "signaling") {
                return demo_signaling(out);
            }
            if (demo_name == "detection-loophole") {
                return demo_detection_loophole(dm, out);
            }
            throw NotFoundError("unknown demo '" + demo_name + "' (expected signaling or detection-loophole)");
        }
        return fuzz(samples, fuzz_seed, out);
    } catch (const ConfigError &e) {
        err << "chsim: config error";
        if (!e.field().empty()) {
            err << " in " << e.field();
        }
        err << ": " << e.what() << "\n";
        return kUsage;
    } catch (const InsufficientDataError &e) {
        err << "chsim: insufficient data: " << e.what() << "\n";
        return kInsufficientData;
    } catch (const ParseError &e) {
        err << "chsim: malformed input: " << e.what() << "\n";
        return kDataError;
    } catch (const IoError &e) {
        err << "chsim: " << e.what() << "\n";
        return kDataError;
    } catch (const UndefinedEstimateError &e) {
        err << "chsim: " << e.what() << "\n";
        return kDataError;
    } catch (const Error &e) {
        err << "chsim: " << e.what() << "\n";
        return kUsage;
    } catch (const fs::filesystem_error &e) {
        err << "chsim: " << e.what() << "\n";
        return kDataError;
    }
}

}  // namespace chsim::cli
