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

#include <cstdint>
#include <limits>

namespace chsim {

/// Independent purposes that draw randomness for a single trial. Each purpose gets
/// its own stream so adding draws to one stage never shifts another.
enum class StreamDomain : std::uint64_t {
    kSettings = 1,
    kSource = 2,
    kAliceLocal = 3,
    kBobLocal = 4,
    kLeakage = 5,
    kDetection = 6,
    kNoise = 7,
    kFuzz = 8,
};

/// Counter-based random stream: the state is a hash of (seed, domain, index), so the
/// numbers drawn for trial `index` do not depend on which worker generates it or in
/// what order. Satisfies UniformRandomBitGenerator.
class RandomStream {
   public:
    using result_type = std::uint64_t;

    RandomStream(std::uint64_t seed, StreamDomain domain, std::uint64_t index);

    static constexpr result_type min() {
        return 0;
    }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// True with probability p (p <= 0 never, p >= 1 always).
    bool bernoulli(double p);

   private:
    std::uint64_t state_;
};

/// Identifies one trial of one run; hands out the trial's streams.
struct TrialKey {
    std::uint64_t seed = 0;
    std::uint64_t index = 0;

    RandomStream stream(StreamDomain domain) const {
        return RandomStream(seed, domain, index);
    }
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

}  // namespace chsim
