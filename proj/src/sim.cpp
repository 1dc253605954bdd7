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

#include "guardrun/sim.hpp"

namespace guardrun::sim {

StubNavigator::StubNavigator(const StubNavigatorSpec& spec, std::uint64_t duration_seed)
    : spec_(spec), durations_(spec.action_duration, duration_seed) {
    if (spec_.horizon == 0) {
        throw std::invalid_argument("navigator horizon must be >= 1");
    }
}

Continuation StubNavigator::generate(const NavigatorRequest& request) {
    if (spec_.respects_guard) {
        conditioning_log_.push_back(request.committed_guard_ids);
    }
    if (spec_.use_tail_hint) {
        // The hint carries no timing information for a scripted policy; it is
        // accepted so the request surface matches a real generator's.
        (void)request.tail_hint;
    }
    Continuation continuation;
    continuation.round = request.round;
    if (spec_.stop_after_round.has_value() && request.round > *spec_.stop_after_round) {
        continuation.units.push_back({next_id_++, ActionKind::Stop, 0.0});
        return continuation;
    }
    continuation.units.reserve(spec_.horizon);
    for (std::size_t i = 0; i < spec_.horizon; ++i) {
        continuation.units.push_back({next_id_++, ActionKind::Primitive, durations_.sample()});
    }
    return continuation;
}

void VirtualRefreshChannel::dispatch(NavigatorRequest request) {
    if (pending_.has_value()) {
        throw std::logic_error("refresh already in flight");
    }
    RefreshOutcome outcome;
    outcome.sent_at = clock_.now() + dispatch_delay_;
    // The continuation is fixed at dispatch so the generator's stream is
    // consumed in a deterministic order; it only becomes visible at arrival.
    outcome.continuation = navigator_.generate(request);
    outcome.received_at = outcome.sent_at + latency_.sample();
    pending_ = std::move(outcome);
}

std::optional<RefreshOutcome> VirtualRefreshChannel::poll() {
    if (pending_.has_value() && pending_->received_at <= clock_.now()) {
        auto outcome = std::move(pending_);
        pending_.reset();
        return outcome;
    }
    return std::nullopt;
}

std::optional<RefreshOutcome> VirtualRefreshChannel::wait_until(double deadline) {
    if (!pending_.has_value()) {
        return std::nullopt;
    }
    if (pending_->received_at <= deadline) {
        clock_.advance_to(pending_->received_at);
        auto outcome = std::move(pending_);
        pending_.reset();
        return outcome;
    }
    clock_.advance_to(deadline);
    return std::nullopt;
}

void Scenario::validate() const {
    episode.validate();
    navigator.action_duration.validate();
    navigator.compute_latency.validate();
    controller_overhead.validate();
    if (navigator.horizon == 0) {
        throw std::invalid_argument("navigator horizon must be >= 1");
    }
    if (episodes < 1) {
        throw std::invalid_argument("episodes must be >= 1");
    }
}

namespace {

enum StreamRole : std::uint64_t {
    kDurationStream = 1,
    kLatencyStream = 2,
    kOverheadStream = 3,
};

std::uint64_t stream_seed(const Scenario& scenario, const LatencyModel& model, int episode,
                          StreamRole role) {
    std::uint64_t seed = mix_seed(scenario.seed, model.seed);
    seed = mix_seed(seed, static_cast<std::uint64_t>(episode));
    return mix_seed(seed, role);
}

}  // namespace

EpisodeResult simulate_episode(const Scenario& scenario, int episode_index) {
    scenario.validate();
    VirtualClock clock;
    StubNavigator navigator(
        scenario.navigator,
        stream_seed(scenario, scenario.navigator.action_duration, episode_index,
                    kDurationStream));
    SimController controller(
        clock, scenario.controller_overhead,
        stream_seed(scenario, scenario.controller_overhead, episode_index, kOverheadStream));
    const std::uint64_t latency_seed =
        stream_seed(scenario, scenario.navigator.compute_latency, episode_index, kLatencyStream);

    if (scenario.episode.mode == RunMode::Blocking) {
        SimNavigatorPort port(clock, navigator, scenario.navigator.compute_latency, latency_seed);
        return run_blocking_episode(port, controller, scenario.episode, clock);
    }
    VirtualRefreshChannel channel(clock, navigator, scenario.navigator.compute_latency,
                                  latency_seed, scenario.episode.refresh_dispatch_delay);
    return run_live_episode(channel, controller, scenario.episode, clock);
}

std::vector<EpisodeResult> simulate_scenario(const Scenario& scenario) {
    scenario.validate();
    std::vector<EpisodeResult> results;
    results.reserve(static_cast<std::size_t>(scenario.episodes));
    for (int episode = 0; episode < scenario.episodes; ++episode) {
        results.push_back(simulate_episode(scenario, episode));
    }
    return results;
}

}  // namespace guardrun::sim
