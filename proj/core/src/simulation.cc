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


#include "chsim/simulation.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "chsim/errors.h"

namespace chsim {

namespace {

constexpr std::uint64_t kChunk = 1u << 15;

}  // namespace

std::optional<TrialRecord> run_trial(const Experiment &e, std::uint64_t index) {
    TrialKey key{e.seed, index};
    SettingPair settings = draw_settings(key);
    RawOutcome raw = sample_trial(e.source, e.angles.alice_angle(settings), e.angles.bob_angle(settings), key);

    if (e.leakage.mode != LeakageMode::kNone) {
        RandomStream leak = key.stream(StreamDomain::kLeakage);
        raw.bob = leak_and_forge(settings.alice, raw.alice, e.leakage, e.forger.get(), settings.bob, raw.bob, leak,
                                 e.forgery_strength);
    }

    RandomStream detection = key.stream(StreamDomain::kDetection);
    DetectedOutcome detected = apply_detection(raw, e.detector, detection);
    if (detected.empty_window && !e.include_empty_windows) {
        return std::nullopt;
    }

    TrialRecord record{index, settings.alice, settings.bob, detected.outcome.alice, detected.outcome.bob};
    if (e.noise_rate.value() > 0.0) {
        RandomStream noise = key.stream(StreamDomain::kNoise);
        record = bit_flip(record, e.noise_rate, noise);
    }
    return record;
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char *env = std::getenv("CHSIM_THREADS")) {
        char *end = nullptr;
        unsigned long value = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) {
            return static_cast<unsigned>(std::min<unsigned long>(value, 1024));
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &body) {
    unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                        next = n;
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

std::vector<TrialRecord> simulate_trials(const Experiment &e, unsigned threads) {
    std::size_t chunks = (e.n_trials + kChunk - 1) / kChunk;
    std::vector<std::vector<TrialRecord>> parts(chunks);
    parallel_for(chunks, threads, [&](std::size_t c) {
        std::uint64_t begin = c * kChunk;
        std::uint64_t end = std::min<std::uint64_t>(e.n_trials, begin + kChunk);
        auto &out = parts[c];
        out.reserve(end - begin);
        for (std::uint64_t i = begin; i < end; ++i) {
            if (auto r = run_trial(e, i)) {
                out.push_back(*r);
            }
        }
    });
    std::vector<TrialRecord> records;
    std::size_t total = 0;
    for (const auto &p : parts) {
        total += p.size();
    }
    records.reserve(total);
    for (auto &p : parts) {
        records.insert(records.end(), p.begin(), p.end());
    }
    return records;
}

std::vector<CountsTable> simulate_partition_counts(const Experiment &e, std::size_t k, unsigned threads) {
    if (k == 0) {
        throw DomainError("partition count must be positive");
    }
    if (!e.include_empty_windows) {
        throw DomainError("streaming partition counts need empty windows included; use simulate_trials");
    }
    // Work items never straddle a partition boundary, so each item feeds one table.
    struct Item {
        std::size_t partition;
        std::uint64_t begin;
        std::uint64_t end;
    };
    std::vector<Item> items;
    for (std::size_t j = 0; j < k; ++j) {
        auto [begin, end] = partition_bounds(e.n_trials, k, j);
        for (std::uint64_t b = begin; b < end; b += kChunk) {
            items.push_back(Item{j, b, std::min(end, b + kChunk)});
        }
    }
    std::vector<CountsTable> partial(items.size());
    parallel_for(items.size(), threads, [&](std::size_t i) {
        for (std::uint64_t t = items[i].begin; t < items[i].end; ++t) {
            partial[i].add(*run_trial(e, t));
        }
    });
    std::vector<CountsTable> tables(k);
    for (std::size_t i = 0; i < items.size(); ++i) {
        tables[items[i].partition].merge(partial[i]);
    }
    return tables;
}

}  // namespace chsim
