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
#include <optional>
#include <string>
#include <vector>

#include "guardrun/action.hpp"
#include "guardrun/metrics.hpp"
#include "guardrun/scheduler.hpp"

namespace guardrun {

/// Everything a navigator needs to refresh the continuation for one round:
/// the newest observation, the guard it must treat as committed, and the
/// replaceable previous tail as a hint.
struct NavigatorRequest {
    int round = 0;
    std::int64_t observation_id = 0;
    std::vector<ActionId> committed_guard_ids;
    std::vector<ActionKind> committed_guard_kinds;
    std::vector<ActionUnit> tail_hint;
    std::string instruction_id;
};

/// Blocking continuation generator: one request, one response.
class NavigatorPort {
public:
    virtual ~NavigatorPort() = default;
    virtual Continuation refresh(const NavigatorRequest& request) = 0;
};

/// Executes one action unit, blocking the calling activity for its real
/// duration, and reports the measured duration.
class ControllerPort {
public:
    virtual ~ControllerPort() = default;
    virtual double execute(const ActionUnit& unit) = 0;
};

/// Monotonic episode clock, virtual or wall.
class Clock {
public:
    virtual ~Clock() = default;
    virtual double now() const = 0;
};

struct RefreshOutcome {
    Continuation continuation;
    double sent_at = 0.0;      // observation dispatch instant (t_send)
    double received_at = 0.0;  // response receipt instant (t_recv)
};

/// Asynchronous refresh endpoint used by the live loop. At most one request
/// is in flight; the executor activity polls or waits at guard boundaries
/// while the refresh path (background thread or virtual event) fills in the
/// outcome. Waiting is the only place the live executor may idle.
class RefreshChannel {
public:
    virtual ~RefreshChannel() = default;

    virtual void dispatch(NavigatorRequest request) = 0;

    /// Consumes the outcome if the pending refresh has already completed.
    virtual std::optional<RefreshOutcome> poll() = 0;

    /// Blocks (or advances virtual time) until the pending refresh completes
    /// or `deadline` on the episode clock passes, whichever is first.
    virtual std::optional<RefreshOutcome> wait_until(double deadline) = 0;

    virtual bool has_pending() const = 0;

    /// Sticky failure of the refresh path (port threw, connection lost).
    virtual std::optional<std::string> error() const = 0;
};

enum class RunMode { Blocking, Live };

struct GuardSizing {
    enum class Mode { AdaptiveWallClock, FixedCount };
    Mode mode = Mode::AdaptiveWallClock;
    std::size_t fixed_count = 2;  // used by FixedCount, clamped to the horizon
};

struct EpisodeConfig {
    RunMode mode = RunMode::Live;
    int max_rounds = 64;
    SchedulerConfig scheduler;
    GuardSizing guard;
    // Dispatch of the round-(t+1) refresh happens this long after the round-t
    // handoff; 0 maximizes slack, larger values trade continuity for fresher
    // observations.
    double refresh_dispatch_delay = 0.0;
    // How long the executor will wait on an in-flight refresh (measured from
    // its dispatch) before falling back to a backup action or stop.
    double refresh_timeout = 60.0;
    bool record_trace = true;
    std::string instruction_id = "episode";

    void validate() const;
};

/// Guard/tail split installed at one handoff, kept for auditing that the
/// controller only ever ran released units.
struct HandoffRecord {
    int round = 0;
    std::vector<ActionId> guard_ids;
    std::vector<ActionId> tail_ids;
};

struct EpisodeResult {
    EpisodeReport report;
    std::vector<RoundTrace> trace;
    std::vector<ActionId> executed_ids;    // every unit the controller ran, in order
    std::vector<HandoffRecord> handoffs;   // live mode only
    std::vector<ActionId> backup_ids;      // backup bridges issued, in order
    bool aborted = false;
    std::string abort_reason;
};

/// Serialized sense -> inference -> execution loop: the controller idles
/// through every refresh, then executes the entire returned continuation.
EpisodeResult run_blocking_episode(NavigatorPort& nav, ControllerPort& ctrl,
                                   const EpisodeConfig& cfg, Clock& clock);

/// Overlapped loop: the executor consumes the released guard while the
/// refresh for the next round is in flight; arrivals that beat guard
/// exhaustion hand off seamlessly, late arrivals are still released after a
/// visible gap, and a refresh that exceeds its timeout falls back to the
/// backup unit and then stop.
EpisodeResult run_live_episode(RefreshChannel& channel, ControllerPort& ctrl,
                               const EpisodeConfig& cfg, Clock& clock);

std::vector<ActionId> ids_of(std::span<const ActionUnit> units);

}  // namespace guardrun
