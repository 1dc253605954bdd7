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

#include "guardrun/wire.hpp"

#include <json.hpp>

namespace guardrun {
namespace {

using nlohmann::json;

json unit_to_json(const ActionUnit& unit) {
    return json{{"id", unit.id},
                {"kind", to_string(unit.kind)},
                {"predicted_duration", unit.predicted_duration}};
}

ActionUnit unit_from_json(const json& obj) {
    if (!obj.is_object()) {
        throw ProtocolError("action unit is not an object");
    }
    ActionUnit unit;
    unit.id = obj.at("id").get<ActionId>();
    unit.kind = action_kind_from_string(obj.at("kind").get<std::string>());
    unit.predicted_duration = obj.at("predicted_duration").get<double>();
    if (unit.predicted_duration < 0.0) {
        throw ProtocolError("action unit has negative predicted_duration");
    }
    return unit;
}

}  // namespace

std::string encode_message(const WireMessage& message) {
    json obj;
    if (const auto* observation = std::get_if<ObservationMsg>(&message)) {
        obj["type"] = "observation";
        obj["round"] = observation->round;
        obj["client_send_time"] = observation->client_send_time;
        obj["committed_guard_ids"] = observation->committed_guard_ids;
        obj["instruction_id"] = observation->instruction_id;
    } else if (const auto* continuation = std::get_if<ContinuationMsg>(&message)) {
        obj["type"] = "continuation";
        obj["round"] = continuation->round;
        json units = json::array();
        for (const ActionUnit& unit : continuation->units) {
            units.push_back(unit_to_json(unit));
        }
        obj["units"] = std::move(units);
        obj["server_compute_time"] = continuation->server_compute_time;
    } else {
        obj["type"] = "stop";
        obj["round"] = std::get<StopMsg>(message).round;
    }
    return obj.dump() + "\n";
}

WireMessage decode_message(std::string_view line) {
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        throw ProtocolError("malformed frame: not a JSON object");
    }
    try {
        const std::string type = obj.at("type").get<std::string>();
        if (type == "observation") {
            ObservationMsg msg;
            msg.round = obj.at("round").get<int>();
            msg.client_send_time = obj.at("client_send_time").get<double>();
            msg.committed_guard_ids = obj.at("committed_guard_ids").get<std::vector<ActionId>>();
            msg.instruction_id = obj.at("instruction_id").get<std::string>();
            return msg;
        }
        if (type == "continuation") {
            ContinuationMsg msg;
            msg.round = obj.at("round").get<int>();
            for (const json& unit : obj.at("units")) {
                msg.units.push_back(unit_from_json(unit));
            }
            msg.server_compute_time = obj.at("server_compute_time").get<double>();
            return msg;
        }
        if (type == "stop") {
            StopMsg msg;
            msg.round = obj.at("round").get<int>();
            return msg;
        }
        throw ProtocolError("unknown message kind: " + type);
    } catch (const json::exception& err) {
        throw ProtocolError(std::string("malformed frame: ") + err.what());
    } catch (const std::invalid_argument& err) {
        throw ProtocolError(std::string("malformed frame: ") + err.what());
    }
}

}  // namespace guardrun
