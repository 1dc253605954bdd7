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

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace guardrun {

/// Identity of one action unit. Ids are unique within an episode and
/// strictly increasing in generation order.
using ActionId = std::int64_t;

enum class ActionKind : std::uint8_t {
    Primitive,
    Macro,
    Backup,
    Stop,
};

const char* to_string(ActionKind kind);
ActionKind action_kind_from_string(const std::string& name);

/// One executable action, primitive or macro, with the controller-side
/// duration predicted for it at generation time.
struct ActionUnit {
    ActionId id = 0;
    ActionKind kind = ActionKind::Primitive;
    double predicted_duration = 0.0;  // seconds, >= 0; Stop units carry 0

    bool is_stop() const { return kind == ActionKind::Stop; }

    friend bool operator==(const ActionUnit&, const ActionUnit&) = default;
};

/// The ordered multi-step sequence emitted by one inference round.
struct Continuation {
    int round = 0;                        // inference-round index, >= 0
    std::vector<ActionUnit> units;        // length H
    std::size_t executed_prefix_len = 0;  // in [0, H]

    std::size_t horizon() const { return units.size(); }
};

/// The three-role runtime state over the current continuation:
/// units already consumed since the latest handoff, the released guard
/// the controller may draw from, and the unreleased revisable tail.
///
/// The three sequences are pairwise disjoint by id and concatenate to the
/// in-flight continuation order. Only guard units are ever visible to a
/// controller; the tail stays private to the refresh path until a handoff
/// promotes a refreshed prefix.
struct ShortHorizonState {
    std::vector<ActionUnit> executed;
    std::vector<ActionUnit> guard;
    std::vector<ActionUnit> tail;
    int round = 0;
    // Length of `executed` right after the latest handoff. Entries past this
    // point were consumed from the current guard; a handoff keeps only those
    // (plus any certified remainder) as the next executed prefix, so the
    // state never accumulates episode history.
    std::size_t executed_at_handoff = 0;
};

/// Raised when the controller asks for a unit but the guard is empty; the
/// runtime must fall back (backup action or stop).
struct GuardUnderflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a refreshed continuation does not carry the expected round
/// index for the handoff it is applied to.
struct SequencingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sum of predicted durations over the first `k` units (0 for k = 0).
/// Throws std::out_of_range for k > units.size().
double predicted_prefix_time(std::span<const ActionUnit> units, std::size_t k);

/// Splits a freshly refreshed continuation into (guard, tail) at `k`.
/// Requires 1 <= k <= H and executed_prefix_len == 0: a released guard is
/// never empty, and a partially executed continuation cannot be re-split.
std::pair<std::vector<ActionUnit>, std::vector<ActionUnit>>
split_at(const Continuation& continuation, std::size_t k);

/// Moves the first guard unit into the executed prefix and returns it.
/// Throws GuardUnderflowError on an empty guard.
std::pair<ActionUnit, ShortHorizonState> consume_next(ShortHorizonState state);

/// Installs a refreshed continuation once the current guard is fully
/// consumed (or certified to be consumed before any refreshed unit is
/// issued): the outgoing guard becomes the executed prefix of round t+1,
/// the first `k_star` refreshed units become the next guard, and the
/// remainder becomes the new tail. The previous tail is replaced outright.
ShortHorizonState apply_handoff(const ShortHorizonState& state,
                                const Continuation& refreshed,
                                std::size_t k_star);

}  // namespace guardrun
