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

#include "guardrun/engine.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace guardrun {

void EpisodeConfig::validate() const {
    scheduler.validate();
    if (max_rounds < 1) {
        throw std::invalid_argument("max_rounds must be >= 1");
    }
    if (guard.mode == GuardSizing::Mode::FixedCount && guard.fixed_count < 1) {
        throw std::invalid_argument("fixed guard count must be >= 1");
    }
    if (refresh_dispatch_delay < 0.0) {
        throw std::invalid_argument("refresh_dispatch_delay must be >= 0");
    }
    if (!(refresh_timeout > 0.0)) {
        throw std::invalid_argument("refresh_timeout must be > 0");
    }
}

std::vector<ActionId> ids_of(std::span<const ActionUnit> units) {
    std::vector<ActionId> ids;
    ids.reserve(units.size());
    for (const ActionUnit& unit : units) {
        ids.push_back(unit.id);
    }
    return ids;
}

namespace {

/// Per-episode bookkeeping shared by both loops.
struct Recorder {
    explicit Recorder(const EpisodeConfig& cfg) : cfg(cfg) {}

    const EpisodeConfig& cfg;
    EpisodeResult result;
    std::vector<RoundMetrics> metrics;
    double t_wait = 0.0;
    double t_execution = 0.0;
    double abs_error_sum = 0.0;
    long units_executed = 0;
    long rounds_completed = 0;
    double first_round_gap = 0.0;

    void add_idle(double seconds) { t_wait += seconds; }

    void add_execution(const ActionUnit& unit, double actual) {
        t_execution += actual;
        abs_error_sum += std::fabs(actual - unit.predicted_duration);
        ++units_executed;
        result.executed_ids.push_back(unit.id);
    }

    void close_round(const RoundTrace& trace) {
        ++rounds_completed;
        RoundMetrics m = derive_round_metrics(trace, cfg.scheduler.pause_threshold);
        if (trace.round == 0) {
            first_round_gap = m.l_gap;
        }
        metrics.push_back(m);
        if (cfg.record_trace) {
            result.trace.push_back(trace);
        }
    }

    EpisodeResult finish() {
        result.report = aggregate_episode(metrics, t_wait, t_execution);
        result.report.n_round = rounds_completed;
        result.report.t_wait_first_round = first_round_gap;
        if (units_executed > 0) {
            result.report.mean_abs_duration_error =
                abs_error_sum / static_cast<double>(units_executed);
        }
        result.report.aborted = result.aborted;
        return std::move(result);
    }

    EpisodeResult abort(const std::string& reason) {
        result.aborted = true;
        result.abort_reason = reason;
        return finish();
    }
};

}  // namespace

EpisodeResult run_blocking_episode(NavigatorPort& nav, ControllerPort& ctrl,
                                   const EpisodeConfig& cfg, Clock& clock) {
    cfg.validate();
    Recorder rec(cfg);
    std::int64_t observation_counter = 0;
    try {
        for (int round = 0; round < cfg.max_rounds; ++round) {
            // The queue is empty from the instant the previous continuation
            // finished; sense and dispatch happen immediately after.
            const double t_send = clock.now();
            NavigatorRequest request;
            request.round = round;
            request.observation_id = observation_counter++;
            request.instruction_id = cfg.instruction_id;
            Continuation continuation = nav.refresh(request);
            const double t_recv = clock.now();
            if (continuation.round != round) {
                throw SequencingError("navigator answered round " +
                                      std::to_string(continuation.round) + " for request " +
                                      std::to_string(round));
            }
            if (continuation.units.empty()) {
                throw ProtocolError("navigator returned an empty continuation");
            }
            rec.add_idle(t_recv - t_send);

            RoundTrace trace;
            trace.round = round;
            trace.t_send = t_send;
            trace.t_recv = t_recv;
            trace.t_empty = t_send;
            bool first_unit = true;
            bool stopped = false;
            for (const ActionUnit& unit : continuation.units) {
                const double issue = clock.now();
                const double actual = ctrl.execute(unit);
                rec.add_execution(unit, actual);
                if (first_unit) {
                    trace.t_issue = issue;
                    trace.t_done = clock.now();
                    first_unit = false;
                }
                if (unit.is_stop()) {
                    stopped = true;
                    break;
                }
            }
            rec.close_round(trace);
            if (stopped) {
                break;
            }
        }
    } catch (const std::exception& err) {
        return rec.abort(err.what());
    }
    return rec.finish();
}

namespace {

struct LiveLoop {
    LiveLoop(RefreshChannel& channel, ControllerPort& ctrl, const EpisodeConfig& cfg,
             Clock& clock)
        : channel(channel), ctrl(ctrl), cfg(cfg), clock(clock), rec(cfg),
          estimator(make_estimator(cfg.scheduler)), psi(guard_budget(estimator, cfg.scheduler)) {
        state.round = -1;  // the round-0 handoff brings it to 0
    }

    RefreshChannel& channel;
    ControllerPort& ctrl;
    const EpisodeConfig& cfg;
    Clock& clock;
    Recorder rec;

    LatencyEstimator estimator;
    double psi;
    ShortHorizonState state;
    double guard_coverage = 0.0;  // T_t^guard: predicted coverage of the current guard
    std::optional<ActionUnit> backup;
    int consecutive_backups = 0;
    double pending_deadline = 0.0;
    std::int64_t observation_counter = 0;

    void dispatch_refresh(int round) {
        NavigatorRequest request;
        request.round = round;
        request.observation_id = observation_counter++;
        request.committed_guard_ids = ids_of(state.guard);
        for (const ActionUnit& unit : state.guard) {
            request.committed_guard_kinds.push_back(unit.kind);
        }
        request.tail_hint = state.tail;
        request.instruction_id = cfg.instruction_id;
        pending_deadline = clock.now() + cfg.refresh_dispatch_delay + cfg.refresh_timeout;
        channel.dispatch(std::move(request));
    }

    void check_channel() {
        if (auto err = channel.error()) {
            throw ProtocolError("refresh path failed: " + *err);
        }
    }

    /// Runs one unit on the controller, stamping the round trace when it is
    /// the first unit issued after a handoff. Returns true if it was a stop.
    bool execute_unit(const ActionUnit& unit, RoundTrace* open_trace) {
        const double issue = clock.now();
        const double actual = ctrl.execute(unit);
        rec.add_execution(unit, actual);
        if (open_trace != nullptr) {
            open_trace->t_issue = issue;
            open_trace->t_done = clock.now();
        }
        return unit.is_stop();
    }

    /// Waits for the in-flight refresh once the executor has nothing to run.
    /// Timeouts walk the fallback ladder: backup bridges (each buys its own
    /// execution time of extra slack), then stop. Idle time is accumulated on
    /// the recorder; backup motion is execution, not waiting.
    std::optional<RefreshOutcome> await_refresh() {
        for (;;) {
            const double wait_start = clock.now();
            std::optional<RefreshOutcome> outcome = channel.wait_until(pending_deadline);
            rec.add_idle(clock.now() - wait_start);
            check_channel();
            if (outcome.has_value()) {
                return outcome;
            }
            HandoffDecision decision = decide_handoff(
                clock.now() - (pending_deadline - cfg.refresh_timeout), guard_coverage, nullptr,
                backup.has_value() ? &*backup : nullptr, consecutive_backups, cfg.scheduler, psi);
            if (decision.kind == HandoffDecision::Kind::Backup) {
                ++consecutive_backups;
                rec.result.backup_ids.push_back(decision.backup->id);
                if (execute_unit(*decision.backup, nullptr)) {
                    return std::nullopt;  // the backup itself was a stop unit
                }
                if (auto late = channel.poll()) {
                    return late;
                }
                check_channel();
                continue;
            }
            return std::nullopt;  // total fallback: stop
        }
    }

    /// Releases a refreshed continuation: scheduler update, guard sizing,
    /// handoff, trace record, and dispatch of the next refresh.
    void release(const RefreshOutcome& outcome, std::optional<double> t_empty) {
        const double latency = outcome.received_at - outcome.sent_at;
        estimator = update_estimate(estimator, latency, cfg.scheduler);
        psi = guard_budget(estimator, cfg.scheduler);

        const Continuation& refreshed = outcome.continuation;
        if (refreshed.round != state.round + 1) {
            throw SequencingError("refresh answered round " + std::to_string(refreshed.round) +
                                  " while runtime is at round " + std::to_string(state.round));
        }
        HandoffDecision decision =
            decide_handoff(latency, guard_coverage, &refreshed,
                           backup.has_value() ? &*backup : nullptr, consecutive_backups,
                           cfg.scheduler, psi);
        std::size_t k_star = decision.k_star;
        if (cfg.guard.mode == GuardSizing::Mode::FixedCount) {
            k_star = std::min(cfg.guard.fixed_count, refreshed.horizon());
        }

        std::vector<ActionUnit> replaced_tail = state.tail;
        state = apply_handoff(state, refreshed, k_star);
        backup = replaced_tail.empty() ? std::nullopt
                                       : std::optional<ActionUnit>(replaced_tail.front());
        consecutive_backups = 0;
        guard_coverage = predicted_prefix_time(state.guard, state.guard.size());
        rec.result.handoffs.push_back({state.round, ids_of(state.guard), ids_of(state.tail)});

        open_trace = RoundTrace{};
        open_trace->round = state.round;
        open_trace->t_send = outcome.sent_at;
        open_trace->t_recv = outcome.received_at;
        open_trace->t_empty = t_empty;

        bool guard_stops = false;
        for (const ActionUnit& unit : state.guard) {
            guard_stops = guard_stops || unit.is_stop();
        }
        if (!guard_stops && state.round + 1 < cfg.max_rounds) {
            dispatch_refresh(state.round + 1);
        }
    }

    std::optional<RoundTrace> open_trace;

    EpisodeResult run() {
        try {
            // Round 0: no guard exists, so the first refresh is fully exposed.
            dispatch_refresh(0);
            std::optional<RefreshOutcome> first = await_refresh();
            if (!first.has_value()) {
                return rec.finish();  // timed out with no fallback before any action
            }
            release(*first, first->sent_at);

            while (true) {
                // Drain the current guard.
                while (!state.guard.empty()) {
                    auto [unit, next_state] = consume_next(std::move(state));
                    state = std::move(next_state);
                    const bool was_stop =
                        execute_unit(unit, open_trace.has_value() ? &*open_trace : nullptr);
                    if (open_trace.has_value()) {
                        rec.close_round(*open_trace);
                        open_trace.reset();
                    }
                    if (was_stop) {
                        return rec.finish();
                    }
                }
                if (!channel.has_pending()) {
                    check_channel();
                    return rec.finish();  // round budget exhausted
                }
                const double exhausted_at = clock.now();
                std::optional<RefreshOutcome> outcome = channel.poll();
                check_channel();
                std::optional<double> t_empty;
                if (!outcome.has_value()) {
                    // The refresh missed guard exhaustion: the queue-empty
                    // instant becomes visible and the round is interrupted.
                    t_empty = exhausted_at;
                    outcome = await_refresh();
                    if (!outcome.has_value()) {
                        return rec.finish();  // fallback ended the episode
                    }
                }
                release(*outcome, t_empty);
            }
        } catch (const std::exception& err) {
            return rec.abort(err.what());
        }
    }
};

}  // namespace

EpisodeResult run_live_episode(RefreshChannel& channel, ControllerPort& ctrl,
                               const EpisodeConfig& cfg, Clock& clock) {
    cfg.validate();
    LiveLoop loop(channel, ctrl, cfg, clock);
    return loop.run();
}

}  // namespace guardrun
