// Copyright 2026 The guardrun Authors.
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

#include <vector>

#include "guardrun/action.hpp"
#include "guardrun/rng.hpp"

namespace guardrun::testutil {

inline std::vector<ActionUnit> units_with_durations(const std::vector<double>& durations,
                                                    ActionId first_id = 1) {
    std::vector<ActionUnit> units;
    units.reserve(durations.size());
    ActionId id = first_id;
    for (double d : durations) {
        units.push_back({id++, ActionKind::Primitive, d});
    }
    return units;
}

inline Continuation continuation_of(int round, const std::vector<double>& durations,
                                    ActionId first_id = 1) {
    Continuation c;
    c.round = round;
    c.units = units_with_durations(durations, first_id);
    return c;
}

inline bool ids_match(const std::vector<ActionUnit>& units, const std::vector<ActionId>& ids) {
    if (units.size() != ids.size()) {
        return false;
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (units[i].id != ids[i]) {
            return false;
        }
    }
    return true;
}

inline std::vector<double> random_durations(Rng& rng, std::size_t count, double lo, double hi) {
    std::vector<double> out(count);
    for (double& d : out) {
        d = rng.uniform(lo, hi);
    }
    return out;
}

}  // namespace guardrun::testutil
