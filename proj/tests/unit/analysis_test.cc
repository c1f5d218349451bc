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


#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "chsim/analysis.h"
#include "chsim/channel.h"
#include "chsim/errors.h"
#include "chsim/simulation.h"

namespace chsim {
namespace {

std::vector<TrialRecord> quantum_run(std::uint64_t n, std::uint64_t seed) {
    Experiment e;
    e.n_trials = n;
    e.seed = seed;
    return simulate_trials(e, 2);
}

TEST(Counts, AddTallies) {
    CountsTable t;
    t.add(TrialRecord{0, 1, 0, Click::kPlus, Click::kPlus});
    t.add(TrialRecord{1, 1, 0, Click::kPlus, Click::kMinus});
    t.add(TrialRecord{2, 1, 0, Click::kNone, Click::kPlus});
    const PairCounts &c = t.at(SettingPair{1, 0});
    EXPECT_EQ(c.trials, 3u);
    EXPECT_EQ(c.coinc, 1u);
    EXPECT_EQ(c.alice_singles, 2u);
    EXPECT_EQ(c.bob_singles, 2u);
    EXPECT_EQ(c.two_sided[0][0], 1u);
    EXPECT_EQ(c.two_sided[0][1], 1u);
    EXPECT_EQ(t.total_trials(), 3u);
    EXPECT_TRUE(t.valid());
}

TEST(Counts, ReorderInvariant) {
    auto records = quantum_run(20000, 3);
    auto shuffled = records;
    std::mt19937_64 g(1);
    std::shuffle(shuffled.begin(), shuffled.end(), g);
    EXPECT_EQ(accumulate_counts(records), accumulate_counts(shuffled));
}

TEST(Counts, MergeMatchesWhole) {
    auto records = quantum_run(30000, 4);
    std::span<const TrialRecord> all(records);
    CountsTable merged = accumulate_counts(all.subspan(20000));
    merged.merge(accumulate_counts(all.subspan(0, 7000))).merge(accumulate_counts(all.subspan(7000, 13000)));
    EXPECT_EQ(merged, accumulate_counts(all));
}

TEST(Counts, ChainRuleHoldsOnEmpiricalCounts) {
    auto counts = accumulate_counts(quantum_run(40000, 5));
    for (auto p : kSettingPairs) {
        const PairCounts &c = counts.at(p);
        double joint = double(c.coinc) / c.trials;
        double a_given_b = double(c.coinc) / c.bob_singles;
        double b = double(c.bob_singles) / c.trials;
        double b_given_a = double(c.coinc) / c.alice_singles;
        double a = double(c.alice_singles) / c.trials;
        EXPECT_NEAR(joint, a_given_b * b, 1e-15);
        EXPECT_NEAR(joint, b_given_a * a, 1e-15);
    }
}

TEST(Estimate, MissingPairIsNamed) {
    std::vector<TrialRecord> records;
    for (std::uint64_t i = 0; i < 30; ++i) {
        auto pair = SettingPair::from_index(i % 3);
        records.push_back(TrialRecord{i, pair.alice, pair.bob, Click::kPlus, Click::kNone});
    }
    try {
        estimate_probabilities(accumulate_counts(records));
        FAIL() << "expected InsufficientDataError";
    } catch (const InsufficientDataError &e) {
        EXPECT_NE(std::string(e.what()).find("(alpha',beta')"), std::string::npos) << e.what();
    }
}

TEST(Estimate, MarginalModes) {
    CountsTable t;
    auto add = [&](std::uint8_t a, std::uint8_t b, int n, int alice, int bob) {
        for (int i = 0; i < n; ++i) {
            t.add(TrialRecord{0, a, b, i < alice ? Click::kPlus : Click::kNone, i < bob ? Click::kPlus : Click::kNone});
        }
    };
    add(0, 0, 10, 5, 2);
    add(0, 1, 10, 7, 4);
    add(1, 0, 20, 4, 6);
    add(1, 1, 20, 10, 10);
    auto pooled = estimate_probabilities(t, MarginalMode::kPooled);
    EXPECT_DOUBLE_EQ(pooled.alice[0].value(), 12.0 / 20);
    EXPECT_DOUBLE_EQ(pooled.bob[0].value(), 8.0 / 30);
    auto per_pair = estimate_probabilities(t, MarginalMode::kPerPair);
    EXPECT_DOUBLE_EQ(per_pair.alice[0].value(), 0.5);
    EXPECT_DOUBLE_EQ(per_pair.alice[1].value(), 4.0 / 20);
    EXPECT_DOUBLE_EQ(per_pair.bob[0].value(), 0.2);
    EXPECT_DOUBLE_EQ(per_pair.bob[1].value(), 0.4);
    EXPECT_EQ(parse_marginal_mode("per-pair"), MarginalMode::kPerPair);
    EXPECT_THROW(parse_marginal_mode("pairwise"), NotFoundError);
}

TEST(Estimate, ResidualsOnQuantumRun) {
    auto counts = accumulate_counts(quantum_run(200000, 6));
    auto se = pi_difference_standard_errors(counts);
    double worst = *std::max_element(se.begin(), se.end());
    EXPECT_LT(pi_residual(conditional_marginals(counts)), 4 * worst);
    EXPECT_GT(oi_residual(outcome_conditionals(counts)), 0.1);
}

TEST(PartitionBounds, CoverEverything) {
    for (std::uint64_t n : {0ull, 1ull, 7ull, 100ull, 1000003ull}) {
        for (std::size_t k : {1u, 3u, 7u, 100u}) {
            std::uint64_t expected_begin = 0;
            for (std::size_t j = 0; j < k; ++j) {
                auto [b, e] = partition_bounds(n, k, j);
                EXPECT_EQ(b, expected_begin);
                EXPECT_GE(e, b);
                EXPECT_LE(e - b, n / k + 1);
                EXPECT_GE(e - b, n / k);
                expected_begin = e;
            }
            EXPECT_EQ(expected_begin, n);
        }
    }
}

TEST(Partition, SingleBlockEqualsWholeRun) {
    auto records = quantum_run(50000, 7);
    auto report = partition_and_score(records, 1);
    auto whole = ch_values(estimate_probabilities(accumulate_counts(records)));
    ASSERT_EQ(report.partitions.size(), 1u);
    EXPECT_EQ(report.partitions[0].values, whole.values);
    EXPECT_EQ(report.overall.values, whole.values);
    EXPECT_EQ(report.standard_error[0], 0.0);
}

TEST(Partition, NoBlockDropped) {
    auto records = quantum_run(10007, 8);
    auto report = partition_and_score(records, 10);
    EXPECT_EQ(report.k, 10u);
    EXPECT_EQ(report.partitions.size(), 10u);
    EXPECT_EQ(report.violation_fraction[0], 1.0);
    EXPECT_NEAR(report.chance_band(), 3 * std::sqrt(0.25 / 10), 1e-15);
}

TEST(Partition, Errors) {
    auto records = quantum_run(5000, 9);
    EXPECT_THROW(partition_and_score(records, 0), DomainError);
    EXPECT_THROW(partition_and_score(records, 6), InsufficientDataError);
    EXPECT_NO_THROW(partition_and_score(records, 6, PartitionOptions{500, MarginalMode::kPooled}));
}

TEST(Partition, MeanAndStandardError) {
    auto records = quantum_run(40000, 10);
    auto report = partition_and_score(records, 4);
    for (std::size_t v = 0; v < kVariantCount; ++v) {
        double mean = 0;
        for (const auto &p : report.partitions) {
            mean += p.values[v] / 4;
        }
        double ss = 0;
        for (const auto &p : report.partitions) {
            ss += (p.values[v] - mean) * (p.values[v] - mean);
        }
        EXPECT_NEAR(report.mean[v], mean, 1e-15);
        EXPECT_NEAR(report.standard_error[v], std::sqrt(ss / 3) / 2, 1e-15);
    }
}

// Blocks of heavy readout noise pull the pooled estimate below the bound while the clean
// majority of blocks still violate, so the partition fraction and the pooled value disagree.
TEST(Partition, NoisyBlocksSplitFractionFromPooledValue) {
    const std::size_t k = 50;
    auto records = quantum_run(500000, 11);
    for (std::size_t j = 0; j < k; ++j) {
        if (j % 5 < 2) {
            auto [b, e] = partition_bounds(records.size(), k, j);
            bit_flip_noise(std::span(records).subspan(b, e - b), Probability(0.5), 99);
        }
    }
    auto report = partition_and_score(records, k);
    EXPECT_NEAR(report.violation_fraction[0], 0.6, 1e-12);
    EXPECT_LT(report.overall.values[0], -0.05);
    EXPECT_FALSE(report.overall.violated[0]);
}

}  // namespace
}  // namespace chsim
