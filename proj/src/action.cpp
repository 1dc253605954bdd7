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

#include "guardrun/action.hpp"

#include <algorithm>

namespace guardrun {

const char* to_string(ActionKind kind) {
    switch (kind) {
        case ActionKind::Primitive: return "primitive";
        case ActionKind::Macro: return "macro";
        case ActionKind::Backup: return "backup";
        case ActionKind::Stop: return "stop";
    }
    return "unknown";
}

ActionKind action_kind_from_string(const std::string& name) {
    if (name == "primitive") return ActionKind::Primitive;
    if (name == "macro") return ActionKind::Macro;
    if (name == "backup") return ActionKind::Backup;
    if (name == "stop") return ActionKind::Stop;
    throw std::invalid_argument("unknown action kind: " + name);
}

double predicted_prefix_time(std::span<const ActionUnit> units, std::size_t k) {
    if (k > units.size()) {
        throw std::out_of_range("predicted_prefix_time: k=" + std::to_string(k) +
                                " exceeds horizon " + std::to_string(units.size()));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        total += units[i].predicted_duration;
    }
    return total;
}

std::pair<std::vector<ActionUnit>, std::vector<ActionUnit>>
split_at(const Continuation& continuation, std::size_t k) {
    const std::size_t horizon = continuation.units.size();
    if (k == 0 || k > horizon) {
        throw std::out_of_range("split_at: k=" + std::to_string(k) +
                                " outside [1, " + std::to_string(horizon) + "]");
    }
    if (continuation.executed_prefix_len != 0) {
        throw std::invalid_argument("split_at: continuation already partially executed");
    }
    std::vector<ActionUnit> guard(continuation.units.begin(),
                                  continuation.units.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<ActionUnit> tail(continuation.units.begin() + static_cast<std::ptrdiff_t>(k),
                                 continuation.units.end());
    return {std::move(guard), std::move(tail)};
}

std::pair<ActionUnit, ShortHorizonState> consume_next(ShortHorizonState state) {
    if (state.guard.empty()) {
        throw GuardUnderflowError("consume_next: guard is empty at round " +
                                  std::to_string(state.round));
    }
    ActionUnit unit = state.guard.front();
    state.guard.erase(state.guard.begin());
    state.executed.push_back(unit);
    return {unit, std::move(state)};
}

ShortHorizonState apply_handoff(const ShortHorizonState& state,
                                const Continuation& refreshed,
                                std::size_t k_star) {
    if (refreshed.round != state.round + 1) {
        throw SequencingError("apply_handoff: refreshed round " +
                              std::to_string(refreshed.round) + " does not follow round " +
                              std::to_string(state.round));
    }
    auto [guard, tail] = split_at(refreshed, k_star);

    ShortHorizonState next;
    next.round = state.round + 1;
    // The retiring guard becomes the next executed prefix: the units consumed
    // from it this round, plus any remainder certified to complete before a
    // refreshed unit is issued. Older history drops out.
    next.executed.assign(state.executed.begin() +
                             static_cast<std::ptrdiff_t>(
                                 std::min(state.executed_at_handoff, state.executed.size())),
                         state.executed.end());
    next.executed.insert(next.executed.end(), state.guard.begin(), state.guard.end());
    next.executed_at_handoff = next.executed.size();
    next.guard = std::move(guard);
    next.tail = std::move(tail);
    return next;
}

}  // namespace guardrun
