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

// Counts accumulation, probability estimation, and partitioned scoring of long runs
// (the fraction of sequential sub-runs that violate each CH variant).

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chsim/inequality.h"
#include "chsim/records.h"

namespace chsim {

struct PairCounts {
    std::uint64_t trials = 0;
    std::uint64_t coinc = 0;
    std::uint64_t alice_singles = 0;
    std::uint64_t bob_singles = 0;
    /// Trials with a click on both sides, by port: [alice port][bob port], 0 = plus, 1 = minus.
    std::array<std::array<std::uint64_t, 2>, 2> two_sided{};

    bool operator==(const PairCounts &) const = default;
};

/// Per-setting-pair tallies. Merging is associative and commutative, so partial tables
/// from record chunks can be combined in any grouping.
class CountsTable {
   public:
    void add(const TrialRecord &record);
    CountsTable &merge(const CountsTable &other);

    const PairCounts &at(SettingPair pair) const {
        return pairs_[pair.index()];
    }
    PairCounts &at(SettingPair pair) {
        return pairs_[pair.index()];
    }
    std::uint64_t total_trials() const;

    /// coinc <= min(alice_singles, bob_singles) <= trials for every pair.
    bool valid() const;

    bool operator==(const CountsTable &) const = default;

   private:
    std::array<PairCounts, 4> pairs_{};
};

CountsTable accumulate_counts(std::span<const TrialRecord> records);

/// How single-side probabilities are estimated: pooled over both remote settings, or
/// from one designated pair (Alice's P(A|a) from (a, beta), Bob's P(B|b) from (alpha, b)).
enum class MarginalMode { kPooled, kPerPair };

std::string_view to_string(MarginalMode mode);
/// Accepts pooled, per-pair. Throws NotFoundError otherwise.
MarginalMode parse_marginal_mode(std::string_view text);

/// "(alpha,beta')" style name of a setting pair.
std::string pair_name(SettingPair pair);

/// Joint = coincidences / trials per pair; marginals per `mode`. Every pair needs at
/// least one trial (InsufficientDataError naming the pair otherwise).
ProbabilityTable estimate_probabilities(const CountsTable &counts, MarginalMode mode = MarginalMode::kPooled);

/// P(A|a,b) and P(B|a,b) from each pair's own trials.
ConditionalMarginals conditional_marginals(const CountsTable &counts);

/// P(A|B,a,b), P(A|a,b), P(B|A,a,b), P(B|a,b); conditionals with a zero-count
/// conditioning event are left empty.
OutcomeConditionals outcome_conditionals(const CountsTable &counts);

/// Binomial standard error of each |P(A|a,b) - P(A|a,b')| and |P(B|a,b) - P(B|a',b)|
/// difference, in the order pi_residual visits them (Alice s=0, Bob s=0, Alice s=1, Bob s=1).
std::array<double, 4> pi_difference_standard_errors(const CountsTable &counts);

struct PartitionOptions {
    std::size_t min_trials_per_partition = 1000;
    MarginalMode marginal_mode = MarginalMode::kPooled;
};

struct PartitionReport {
    std::size_t k = 0;
    std::vector<CHReport> partitions;
    /// Share of partitions violating each variant.
    std::array<double, kVariantCount> violation_fraction{};
    /// Share violating at least one variant. Its chance baseline exceeds 1/2.
    double any_violation_fraction = 0.0;
    /// Mean and standard error (sample sd / sqrt(k); 0 when k = 1) of the per-partition values.
    std::array<double, kVariantCount> mean{};
    std::array<double, kVariantCount> standard_error{};
    /// CH values on the whole stream; chsh holds the non-post-selected CHSH.
    CHReport overall;

    /// Half-width of the 3-sigma band of a fair coin's violation fraction over k runs.
    double chance_band() const {
        return k == 0 ? 0.0 : 3.0 * std::sqrt(0.25 / static_cast<double>(k));
    }

    bool operator==(const PartitionReport &) const = default;
};

/// Splits the records into k contiguous blocks of floor/ceil(n/k) records and scores
/// each with ch_values. No partition is ever dropped. Throws DomainError for k == 0 and
/// InsufficientDataError when n < k * min_trials_per_partition or a block misses a pair.
PartitionReport partition_and_score(std::span<const TrialRecord> records, std::size_t k,
                                    const PartitionOptions &options = {});

/// Scores already-accumulated partition tables (same contract as partition_and_score).
PartitionReport score_partitions(std::span<const CountsTable> partitions, MarginalMode mode = MarginalMode::kPooled);

/// [begin, end) of block j when n items are split into k near-equal contiguous blocks.
std::pair<std::uint64_t, std::uint64_t> partition_bounds(std::uint64_t n, std::size_t k, std::size_t j);

}  // namespace chsim
