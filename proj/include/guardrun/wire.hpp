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

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "guardrun/action.hpp"
#include "guardrun/scheduler.hpp"  // ProtocolError

namespace guardrun {

// Framing: one JSON object per message, UTF-8, terminated by a single
// linefeed. Rounds strictly increase per connection and every observation is
// answered by exactly one continuation or stop for the same round.

struct ObservationMsg {
    int round = 0;
    double client_send_time = 0.0;
    std::vector<ActionId> committed_guard_ids;
    std::string instruction_id;

    friend bool operator==(const ObservationMsg&, const ObservationMsg&) = default;
};

struct ContinuationMsg {
    int round = 0;
    std::vector<ActionUnit> units;
    double server_compute_time = 0.0;

    friend bool operator==(const ContinuationMsg&, const ContinuationMsg&) = default;
};

struct StopMsg {
    int round = 0;

    friend bool operator==(const StopMsg&, const StopMsg&) = default;
};

using WireMessage = std::variant<ObservationMsg, ContinuationMsg, StopMsg>;

/// Serializes a message as one linefeed-terminated JSON line.
std::string encode_message(const WireMessage& message);

/// Parses one frame (with or without its trailing linefeed). Malformed JSON,
/// missing fields, or an unknown message kind raise ProtocolError.
WireMessage decode_message(std::string_view line);

}  // namespace guardrun
