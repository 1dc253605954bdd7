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

#include <stdexcept>
#include <string>

#include "guardrun/sim.hpp"

namespace guardrun {

/// Scenario-file problem: names the offending key and constraint.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parses a scenario from its JSON text. Configuration is fail-closed:
/// unknown keys, missing required keys, and out-of-range values are all
/// rejected with a diagnostic naming the key.
sim::Scenario parse_scenario_json(const std::string& text);

sim::Scenario parse_scenario_file(const std::string& path);

/// Inverse of parse_scenario_json (used to ship and round-trip scenarios).
std::string scenario_to_json(const sim::Scenario& scenario);

}  // namespace guardrun
