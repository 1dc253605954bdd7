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

#include <optional>
#include <string>
#include <vector>

#include "guardrun/engine.hpp"
#include "guardrun/latency_model.hpp"

namespace guardrun::sim {

/// Virtual episode clock: time advances only through event processing, with
/// microsecond-grade reasoning left to plain doubles. An arrival whose
/// timestamp coincides with a guard-exhaustion check is visible to the
/// executor at that instant, which keeps the seamless-handoff condition
/// inclusive (latency == coverage is still seamless).
class VirtualClock final : public Clock {
public:
    double now() const override { return now_; }

    void advance(double seconds) {
        if (seconds < 0.0) {
            throw std::logic_error("virtual clock cannot move backwards");
        }
        now_ += seconds;
    }

    void advance_to(double instant) {
        if (instant > now_) {
            now_ = instant;
        }
    }

private:
    double now_ = 0.0;
};

/// Configuration for the scripted navigator standing in for a real policy:
/// it emits `horizon` units per refresh with durations drawn from
/// `action_duration`, and a terminal stop once `stop_after_round` is passed.
struct StubNavigatorSpec {
    std::size_t horizon = 4;
    LatencyModel action_duration = LatencyModel::constant(1.0);
    LatencyModel compute_latency = LatencyModel::constant(0.5);
    std::optional<long> stop_after_round;
    // Whether the generator reads the revisable-tail hint (the no-tail
    // ablation clears this). Timing is unaffected either way; the flag exists
    // so the variant is expressible and auditable.
    bool use_tail_hint = true;
    // When set, the navigator records the committed guard it was conditioned
    // on, letting audits confirm the runtime never leaked tail units.
    bool respects_guard = true;
};

/// Deterministic continuation generator. Unit ids are unique and strictly
/// increasing within an episode, assigned in generation order.
class StubNavigator {
public:
    StubNavigator(const StubNavigatorSpec& spec, std::uint64_t duration_seed);

    Continuation generate(const NavigatorRequest& request);

    /// Committed-guard ids seen per request, for tail-leak audits.
    const std::vector<std::vector<ActionId>>& conditioning_log() const {
        return conditioning_log_;
    }

private:
    StubNavigatorSpec spec_;
    LatencyStream durations_;
    ActionId next_id_ = 1;
    std::vector<std::vector<ActionId>> conditioning_log_;
};

/// Controller that burns virtual time: actual duration is the unit's
/// prediction plus a sample of the execution-overhead model.
class SimController final : public ControllerPort {
public:
    SimController(VirtualClock& clock, const LatencyModel& overhead, std::uint64_t seed)
        : clock_(clock), overhead_(overhead, seed) {}

    double execute(const ActionUnit& unit) override {
        const double actual = unit.predicted_duration + overhead_.sample();
        clock_.advance(actual);
        return actual;
    }

private:
    VirtualClock& clock_;
    LatencyStream overhead_;
};

/// Blocking navigator port for the serialized baseline: the refresh consumes
/// virtual time equal to the sampled sense-and-inference latency.
class SimNavigatorPort final : public NavigatorPort {
public:
    SimNavigatorPort(VirtualClock& clock, StubNavigator& navigator, const LatencyModel& latency,
                     std::uint64_t seed)
        : clock_(clock), navigator_(navigator), latency_(latency, seed) {}

    Continuation refresh(const NavigatorRequest& request) override {
        clock_.advance(latency_.sample());
        return navigator_.generate(request);
    }

private:
    VirtualClock& clock_;
    StubNavigator& navigator_;
    LatencyStream latency_;
};

/// Virtual-time refresh channel: the continuation and its arrival instant are
/// fixed at dispatch (the stub navigator consumes its RNG stream in dispatch
/// order), and the executor observes the arrival once the clock reaches it.
class VirtualRefreshChannel final : public RefreshChannel {
public:
    VirtualRefreshChannel(VirtualClock& clock, StubNavigator& navigator,
                          const LatencyModel& latency, std::uint64_t seed, double dispatch_delay)
        : clock_(clock), navigator_(navigator), latency_(latency, seed),
          dispatch_delay_(dispatch_delay) {}

    void dispatch(NavigatorRequest request) override;
    std::optional<RefreshOutcome> poll() override;
    std::optional<RefreshOutcome> wait_until(double deadline) override;
    bool has_pending() const override { return pending_.has_value(); }
    std::optional<std::string> error() const override { return std::nullopt; }

private:
    VirtualClock& clock_;
    StubNavigator& navigator_;
    LatencyStream latency_;
    double dispatch_delay_;
    std::optional<RefreshOutcome> pending_;
};

/// One fully specified simulation run.
struct Scenario {
    std::string name = "scenario";
    EpisodeConfig episode;
    StubNavigatorSpec navigator;
    LatencyModel controller_overhead = LatencyModel::constant(0.0);
    int episodes = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Runs every episode of the scenario on a fresh virtual clock. Identical
/// (scenario, seed) pairs produce identical results; a per-episode abort is
/// reported in that episode's result without halting the batch.
std::vector<EpisodeResult> simulate_scenario(const Scenario& scenario);

/// Single-episode variant used by tests that need the audit trail of one run.
EpisodeResult simulate_episode(const Scenario& scenario, int episode_index);

}  // namespace guardrun::sim
