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

#include "guardrun/scenario_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace guardrun {
namespace {

using nlohmann::json;
using sim::Scenario;
using sim::StubNavigatorSpec;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& context) {
    for (const auto& item : obj.items()) {
        if (!known.contains(item.key())) {
            throw ConfigError("unknown key '" + item.key() + "' in " + context);
        }
    }
}

double get_number(const json& obj, const std::string& key, const std::string& context) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
        throw ConfigError("missing or non-numeric '" + key + "' in " + context);
    }
    return it->get<double>();
}

LatencyModel parse_model(const json& obj, const std::string& context) {
    if (!obj.is_object()) {
        throw ConfigError(context + " must be an object like {\"model\":\"constant\",...}");
    }
    auto model_it = obj.find("model");
    if (model_it == obj.end() || !model_it->is_string()) {
        throw ConfigError("missing 'model' in " + context);
    }
    const std::string kind = model_it->get<std::string>();
    LatencyModel model;
    if (kind == "constant") {
        reject_unknown_keys(obj, {"model", "value", "seed"}, context);
        model = LatencyModel::constant(get_number(obj, "value", context));
    } else if (kind == "uniform") {
        reject_unknown_keys(obj, {"model", "lo", "hi", "seed"}, context);
        model = LatencyModel::uniform(get_number(obj, "lo", context),
                                      get_number(obj, "hi", context));
    } else if (kind == "gaussian") {
        reject_unknown_keys(obj, {"model", "mean", "stddev", "seed"}, context);
        model = LatencyModel::gaussian(get_number(obj, "mean", context),
                                       get_number(obj, "stddev", context));
    } else if (kind == "trace") {
        reject_unknown_keys(obj, {"model", "values", "seed"}, context);
        auto values_it = obj.find("values");
        if (values_it == obj.end() || !values_it->is_array() || values_it->empty()) {
            throw ConfigError("trace model needs a non-empty 'values' array in " + context);
        }
        model = LatencyModel::replay(values_it->get<std::vector<double>>());
    } else {
        throw ConfigError("unknown model kind '" + kind + "' in " + context +
                          " (expected constant, uniform, gaussian, or trace)");
    }
    if (obj.contains("seed")) {
        model.seed = obj.at("seed").get<std::uint64_t>();
    }
    try {
        model.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(context + ": " + err.what());
    }
    return model;
}

json model_to_json(const LatencyModel& model) {
    json obj;
    switch (model.kind) {
        case LatencyModel::Kind::Constant:
            obj = {{"model", "constant"}, {"value", model.a}};
            break;
        case LatencyModel::Kind::Uniform:
            obj = {{"model", "uniform"}, {"lo", model.a}, {"hi", model.b}};
            break;
        case LatencyModel::Kind::Gaussian:
            obj = {{"model", "gaussian"}, {"mean", model.a}, {"stddev", model.b}};
            break;
        case LatencyModel::Kind::Trace:
            obj = {{"model", "trace"}, {"values", model.trace}};
            break;
    }
    if (model.seed != 0) {
        obj["seed"] = model.seed;
    }
    return obj;
}

SchedulerConfig parse_scheduler(const json& obj) {
    SchedulerConfig cfg;
    reject_unknown_keys(
        obj, {"alpha", "delta", "initial_estimate", "pause_threshold", "max_backups"},
        "scheduler");
    if (obj.contains("alpha")) cfg.alpha = get_number(obj, "alpha", "scheduler");
    if (obj.contains("delta")) cfg.delta = get_number(obj, "delta", "scheduler");
    if (obj.contains("initial_estimate")) {
        cfg.initial_estimate = get_number(obj, "initial_estimate", "scheduler");
    }
    if (obj.contains("pause_threshold")) {
        cfg.pause_threshold = get_number(obj, "pause_threshold", "scheduler");
    }
    if (obj.contains("max_backups")) {
        cfg.max_consecutive_backups = obj.at("max_backups").get<int>();
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("scheduler: ") + err.what());
    }
    return cfg;
}

GuardSizing parse_guard(const json& obj) {
    GuardSizing guard;
    reject_unknown_keys(obj, {"mode", "count"}, "guard");
    auto mode_it = obj.find("mode");
    if (mode_it == obj.end() || !mode_it->is_string()) {
        throw ConfigError("missing 'mode' in guard (expected \"adaptive\" or \"fixed\")");
    }
    const std::string mode = mode_it->get<std::string>();
    if (mode == "adaptive") {
        guard.mode = GuardSizing::Mode::AdaptiveWallClock;
        if (obj.contains("count")) {
            throw ConfigError("guard 'count' only applies to fixed mode");
        }
    } else if (mode == "fixed") {
        guard.mode = GuardSizing::Mode::FixedCount;
        if (!obj.contains("count")) {
            throw ConfigError("fixed guard mode needs 'count'");
        }
        const long count = obj.at("count").get<long>();
        if (count < 1) {
            throw ConfigError("guard count must be >= 1");
        }
        guard.fixed_count = static_cast<std::size_t>(count);
    } else {
        throw ConfigError("unknown guard mode '" + mode + "'");
    }
    return guard;
}

StubNavigatorSpec parse_navigator(const json& obj) {
    StubNavigatorSpec spec;
    reject_unknown_keys(obj,
                        {"horizon", "action_duration", "compute_latency", "stop_after_round",
                         "use_tail_hint", "respects_guard"},
                        "navigator");
    if (obj.contains("horizon")) {
        const long horizon = obj.at("horizon").get<long>();
        if (horizon < 1) {
            throw ConfigError("navigator horizon must be >= 1");
        }
        spec.horizon = static_cast<std::size_t>(horizon);
    }
    if (!obj.contains("action_duration")) {
        throw ConfigError("navigator needs 'action_duration'");
    }
    spec.action_duration = parse_model(obj.at("action_duration"), "navigator.action_duration");
    if (!obj.contains("compute_latency")) {
        throw ConfigError("navigator needs 'compute_latency'");
    }
    spec.compute_latency = parse_model(obj.at("compute_latency"), "navigator.compute_latency");
    if (obj.contains("stop_after_round")) {
        const long stop_round = obj.at("stop_after_round").get<long>();
        if (stop_round < 0) {
            throw ConfigError("stop_after_round must be >= 0");
        }
        spec.stop_after_round = stop_round;
    }
    if (obj.contains("use_tail_hint")) {
        spec.use_tail_hint = obj.at("use_tail_hint").get<bool>();
    }
    if (obj.contains("respects_guard")) {
        spec.respects_guard = obj.at("respects_guard").get<bool>();
    }
    return spec;
}

}  // namespace

sim::Scenario parse_scenario_json(const std::string& text) {
    json obj = json::parse(text, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
        throw ConfigError("scenario is not a JSON object");
    }
    reject_unknown_keys(obj,
                        {"name", "mode", "episodes", "seed", "max_rounds", "scheduler", "guard",
                         "navigator", "controller_overhead", "refresh_dispatch_delay",
                         "refresh_timeout", "instruction_id"},
                        "scenario");
    Scenario scenario;
    if (obj.contains("name")) {
        scenario.name = obj.at("name").get<std::string>();
    }
    auto mode_it = obj.find("mode");
    if (mode_it == obj.end() || !mode_it->is_string()) {
        throw ConfigError("missing 'mode' (expected \"blocking\" or \"live\")");
    }
    const std::string mode = mode_it->get<std::string>();
    if (mode == "blocking") {
        scenario.episode.mode = RunMode::Blocking;
    } else if (mode == "live") {
        scenario.episode.mode = RunMode::Live;
    } else {
        throw ConfigError("unknown mode '" + mode + "' (expected \"blocking\" or \"live\")");
    }
    if (obj.contains("episodes")) {
        scenario.episodes = obj.at("episodes").get<int>();
        if (scenario.episodes < 1) {
            throw ConfigError("episodes must be >= 1");
        }
    }
    if (obj.contains("seed")) {
        scenario.seed = obj.at("seed").get<std::uint64_t>();
    }
    if (obj.contains("max_rounds")) {
        scenario.episode.max_rounds = obj.at("max_rounds").get<int>();
        if (scenario.episode.max_rounds < 1) {
            throw ConfigError("max_rounds must be >= 1");
        }
    }
    if (obj.contains("scheduler")) {
        scenario.episode.scheduler = parse_scheduler(obj.at("scheduler"));
    }
    if (obj.contains("guard")) {
        scenario.episode.guard = parse_guard(obj.at("guard"));
    }
    if (!obj.contains("navigator")) {
        throw ConfigError("missing 'navigator'");
    }
    scenario.navigator = parse_navigator(obj.at("navigator"));
    if (obj.contains("controller_overhead")) {
        scenario.controller_overhead =
            parse_model(obj.at("controller_overhead"), "controller_overhead");
    }
    if (obj.contains("refresh_dispatch_delay")) {
        scenario.episode.refresh_dispatch_delay =
            get_number(obj, "refresh_dispatch_delay", "scenario");
    }
    if (obj.contains("refresh_timeout")) {
        scenario.episode.refresh_timeout = get_number(obj, "refresh_timeout", "scenario");
    }
    if (obj.contains("instruction_id")) {
        scenario.episode.instruction_id = obj.at("instruction_id").get<std::string>();
    }
    try {
        scenario.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
    }
    return scenario;
}

sim::Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open scenario file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_json(buf.str());
}

std::string scenario_to_json(const sim::Scenario& scenario) {
    json obj;
    obj["name"] = scenario.name;
    obj["mode"] = scenario.episode.mode == RunMode::Blocking ? "blocking" : "live";
    obj["episodes"] = scenario.episodes;
    obj["seed"] = scenario.seed;
    obj["max_rounds"] = scenario.episode.max_rounds;
    obj["scheduler"] = {{"alpha", scenario.episode.scheduler.alpha},
                        {"delta", scenario.episode.scheduler.delta},
                        {"initial_estimate", scenario.episode.scheduler.initial_estimate},
                        {"pause_threshold", scenario.episode.scheduler.pause_threshold},
                        {"max_backups", scenario.episode.scheduler.max_consecutive_backups}};
    if (scenario.episode.guard.mode == GuardSizing::Mode::AdaptiveWallClock) {
        obj["guard"] = {{"mode", "adaptive"}};
    } else {
        obj["guard"] = {{"mode", "fixed"},
                        {"count", static_cast<long>(scenario.episode.guard.fixed_count)}};
    }
    json navigator;
    navigator["horizon"] = static_cast<long>(scenario.navigator.horizon);
    navigator["action_duration"] = model_to_json(scenario.navigator.action_duration);
    navigator["compute_latency"] = model_to_json(scenario.navigator.compute_latency);
    if (scenario.navigator.stop_after_round.has_value()) {
        navigator["stop_after_round"] = *scenario.navigator.stop_after_round;
    }
    if (!scenario.navigator.use_tail_hint) {
        navigator["use_tail_hint"] = false;
    }
    if (!scenario.navigator.respects_guard) {
        navigator["respects_guard"] = false;
    }
    obj["navigator"] = std::move(navigator);
    obj["controller_overhead"] = model_to_json(scenario.controller_overhead);
    obj["refresh_dispatch_delay"] = scenario.episode.refresh_dispatch_delay;
    obj["refresh_timeout"] = scenario.episode.refresh_timeout;
    obj["instruction_id"] = scenario.episode.instruction_id;
    return obj.dump(2) + "\n";
}

}  // namespace guardrun
