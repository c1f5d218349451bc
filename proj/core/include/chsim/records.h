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

#include "chsim/inequality.h"
#include "chsim/sources.h"

namespace chsim {

/// One recorded trial. `alice_detect()` / `bob_detect()` are the CH detection events;
/// the click carries the port for the fair-sampled CHSH contrast.
struct TrialRecord {
    std::uint64_t index = 0;
    std::uint8_t alice_setting = 0;
    std::uint8_t bob_setting = 0;
    Click alice = Click::kNone;
    Click bob = Click::kNone;

    bool alice_detect() const {
        return alice == Click::kPlus;
    }
    bool bob_detect() const {
        return bob == Click::kPlus;
    }
    SettingPair settings() const {
        return SettingPair{alice_setting, bob_setting};
    }

    bool operator==(const TrialRecord &) const = default;
};

}  // namespace chsim
