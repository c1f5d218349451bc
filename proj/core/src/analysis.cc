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


#include "chsim/analysis.h"

#include <algorithm>

#include "chsim/errors.h"

namespace chsim {

void CountsTable::add(const TrialRecord &record) {
    PairCounts &c = at(record.settings());
    ++c.trials;
    bool a = record.alice_detect();
    bool b = record.bob_detect();
    c.alice_singles += a;
    c.bob_singles += b;
    c.coinc += a && b;
    if (record.alice != Click::kNone && record.bob != Click::kNone) {
        ++c.two_sided[record.alice == Click::kMinus][record.bob == Click::kMinus];
    }
}

CountsTable &CountsTable::merge(const CountsTable &other) {
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        PairCounts &c = pairs_[i];
        const PairCounts &o = other.pairs_[i];
        c.trials += o.trials;
        c.coinc += o.coinc;
        c.alice_singles += o.alice_singles;
        c.bob_singles += o.bob_singles;
        for (int x = 0; x < 2; ++x) {
            for (int y = 0; y < 2; ++y) {
                c.two_sided[x][y] += o.two_sided[x][y];
            }
        }
    }
    return *this;
}

std::uint64_t CountsTable::total_trials() const {
    std::uint64_t total = 0;
    for (const auto &c : pairs_) {
        total += c.trials;
    }
    return total;
}

bool CountsTable::valid() const {
    return std::all_of(pairs_.begin(), pairs_.end(), [](const PairCounts &c) {
        return c.coinc <= std::min(c.alice_singles, c.bob_singles) && c.alice_singles <= c.trials &&
               c.bob_singles <= c.trials;
    });
}

CountsTable accumulate_counts(std::span<const TrialRecord> records) {
    CountsTable table;
    for (const auto &r : records) {
        table.add(r);
    }
    return table;
}

std::string_view to_string(MarginalMode mode) {
    return mode == MarginalMode::kPooled ? "pooled" : "per-pair";
}

MarginalMode parse_marginal_mode(std::string_view text) {
    if (text == "pooled") {
        return MarginalMode::kPooled;
    }
    if (text == "per-pair") {
        return MarginalMode::kPerPair;
    }
    throw NotFoundError("unknown marginal mode '" + std::string(text) + "' (pooled|per-pair)");
}

std::string pair_name(SettingPair pair) {
    return std::string("(") + (pair.alice ? "alpha'" : "alpha") + "," + (pair.bob ? "beta'" : "beta") + ")";
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ProbabilityTable estimate_probabilities(const CountsTable &counts, MarginalMode mode) {
    std::uint64_t fewest = UINT64_MAX;
    for (auto p : kSettingPairs) {
        if (counts.at(p).trials == 0) {
            throw InsufficientDataError("no trials at setting pair " + pair_name(p));
        }
        fewest = std::min(fewest, counts.at(p).trials);
    }

    ProbabilityTable table;
    for (auto p : kSettingPairs) {
        const PairCounts &c = counts.at(p);
        table.joint[p.index()] = Probability(ratio(c.coinc, c.trials));
        std::uint64_t clicks = 0;
        for (const auto &row : c.two_sided) {
            clicks += row[0] + row[1];
        }
        if (clicks > 0) {
            auto agree = static_cast<double>(c.two_sided[0][0] + c.two_sided[1][1]);
            auto disagree = static_cast<double>(c.two_sided[0][1] + c.two_sided[1][0]);
            table.coincident_correlation[p.index()] = (agree - disagree) / static_cast<double>(clicks);
        }
    }
    for (std::uint8_t s = 0; s < 2; ++s) {
        const PairCounts &a0 = counts.at(SettingPair{s, 0});
        const PairCounts &a1 = counts.at(SettingPair{s, 1});
        const PairCounts &b0 = counts.at(SettingPair{0, s});
        const PairCounts &b1 = counts.at(SettingPair{1, s});
        if (mode == MarginalMode::kPooled) {
            table.alice[s] = Probability(ratio(a0.alice_singles + a1.alice_singles, a0.trials + a1.trials));
            table.bob[s] = Probability(ratio(b0.bob_singles + b1.bob_singles, b0.trials + b1.trials));
        } else {
            table.alice[s] = Probability(ratio(a0.alice_singles, a0.trials));
            table.bob[s] = Probability(ratio(b0.bob_singles, b0.trials));
        }
    }
    // Marginals come from other trials than the joint; allow 5 binomial sigmas.
    table.tolerance = 5.0 * 0.5 / std::sqrt(static_cast<double>(fewest));
    return table;
}

ConditionalMarginals conditional_marginals(const CountsTable &counts) {
    ConditionalMarginals m;
    for (auto p : kSettingPairs) {
        const PairCounts &c = counts.at(p);
        if (c.trials == 0) {
            throw InsufficientDataError("no trials at setting pair " + pair_name(p));
        }
        m.alice[p.index()] = Probability(ratio(c.alice_singles, c.trials));
        m.bob[p.index()] = Probability(ratio(c.bob_singles, c.trials));
    }
    return m;
}

OutcomeConditionals outcome_conditionals(const CountsTable &counts) {
    OutcomeConditionals o;
    for (auto p : kSettingPairs) {
        const PairCounts &c = counts.at(p);
        std::size_t i = p.index();
        if (c.trials > 0) {
            o.alice[i] = ratio(c.alice_singles, c.trials);
            o.bob[i] = ratio(c.bob_singles, c.trials);
        }
        if (c.bob_singles > 0) {
            o.alice_given_bob[i] = ratio(c.coinc, c.bob_singles);
        }
        if (c.alice_singles > 0) {
            o.bob_given_alice[i] = ratio(c.coinc, c.alice_singles);
        }
    }
    return o;
}

std::array<double, 4> pi_difference_standard_errors(const CountsTable &counts) {
    auto variance = [](std::uint64_t hits, std::uint64_t n) {
        if (n == 0) {
            throw InsufficientDataError("empty setting pair");
        }
        double p = ratio(hits, n);
        return p * (1.0 - p) / static_cast<double>(n);
    };
    std::array<double, 4> se{};
    std::size_t slot = 0;
    for (std::uint8_t s = 0; s < 2; ++s) {
        const PairCounts &a0 = counts.at(SettingPair{s, 0});
        const PairCounts &a1 = counts.at(SettingPair{s, 1});
        se[slot++] = std::sqrt(variance(a0.alice_singles, a0.trials) + variance(a1.alice_singles, a1.trials));
        const PairCounts &b0 = counts.at(SettingPair{0, s});
        const PairCounts &b1 = counts.at(SettingPair{1, s});
        se[slot++] = std::sqrt(variance(b0.bob_singles, b0.trials) + variance(b1.bob_singles, b1.trials));
    }
    return se;
}

std::pair<std::uint64_t, std::uint64_t> partition_bounds(std::uint64_t n, std::size_t k, std::size_t j) {
    auto edge = [&](std::size_t i) {
        // floor(n * i / k) without overflow for any k below 2^32.
        return (n / k) * i + ((n % k) * i) / k;
    };
    return {edge(j), edge(j + 1)};
}

PartitionReport score_partitions(std::span<const CountsTable> partitions, MarginalMode mode) {
    if (partitions.empty()) {
        throw DomainError("partition count must be positive");
    }
    PartitionReport report;
    report.k = partitions.size();
    report.partitions.reserve(report.k);
    CountsTable all;
    for (std::size_t j = 0; j < partitions.size(); ++j) {
        try {
            report.partitions.push_back(ch_values(estimate_probabilities(partitions[j], mode)));
        } catch (const InsufficientDataError &e) {
            throw InsufficientDataError("partition " + std::to_string(j) + ": " + e.what());
        }
        all.merge(partitions[j]);
    }

    std::array<std::size_t, kVariantCount> violating{};
    std::size_t any = 0;
    for (const auto &r : report.partitions) {
        for (std::size_t v = 0; v < kVariantCount; ++v) {
            violating[v] += r.violated[v];
            report.mean[v] += r.values[v];
        }
        any += r.any_violated;
    }
    auto k = static_cast<double>(report.k);
    for (std::size_t v = 0; v < kVariantCount; ++v) {
        report.violation_fraction[v] = static_cast<double>(violating[v]) / k;
        report.mean[v] /= k;
        if (report.k > 1) {
            double ss = 0.0;
            for (const auto &r : report.partitions) {
                double d = r.values[v] - report.mean[v];
                ss += d * d;
            }
            report.standard_error[v] = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
        }
    }
    report.any_violation_fraction = static_cast<double>(any) / k;

    ProbabilityTable overall = estimate_probabilities(all, mode);
    report.overall = ch_values(overall);
    report.overall.chsh = chsh_value(overall, FairSampling::kOff);
    return report;
}

PartitionReport partition_and_score(std::span<const TrialRecord> records, std::size_t k,
                                    const PartitionOptions &options) {
    if (k == 0) {
        throw DomainError("partition count must be positive");
    }
    std::uint64_t n = records.size();
    std::uint64_t per = std::max<std::size_t>(options.min_trials_per_partition, 1);
    if (n / per < k) {
        throw InsufficientDataError(std::to_string(n) + " records cannot fill " + std::to_string(k) +
                                    " partitions of at least " +
                                    std::to_string(std::max<std::size_t>(options.min_trials_per_partition, 1)) +
                                    " trials");
    }
    std::vector<CountsTable> blocks(k);
    for (std::size_t j = 0; j < k; ++j) {
        auto [begin, end] = partition_bounds(n, k, j);
        blocks[j] = accumulate_counts(records.subspan(begin, end - begin));
    }
    return score_partitions(blocks, options.marginal_mode);
}

}  // namespace chsim
