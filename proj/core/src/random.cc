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


#include "chsim/random.h"

namespace chsim {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t seed, StreamDomain domain, std::uint64_t index) {
    std::uint64_t key = mix64(seed + kGolden);
    key = mix64(key ^ (static_cast<std::uint64_t>(domain) * 0xD1B54A32D192ED03ull));
    state_ = mix64(key ^ mix64(index + 0x632BE59BD9B4E019ull));
}

RandomStream::result_type RandomStream::operator()() {
    state_ += kGolden;
    return mix64(state_);
}

double RandomStream::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

bool RandomStream::bernoulli(double p) {
    return uniform() < p;
}

}  // namespace chsim
