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

#include <cstddef>
#include <optional>
#include <stdexcept>

#include "guardrun/action.hpp"

namespace guardrun {

struct MeasurementError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a port hands the scheduler something structurally invalid,
/// e.g. an empty continuation where units are required.
struct ProtocolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchedulerConfig {
    double alpha = 0.5;             // EWMA update factor, in (0, 1]
    double delta = 0.1;             // safety margin added to the estimate, >= 0
    double initial_estimate = 0.5;  // latency prior before the first sample, >= 0
    double pause_threshold = 0.5;   // a gap strictly above this counts as a pause
    int max_consecutive_backups = 1;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Exponentially weighted running estimate of the sense-and-inference latency.
struct LatencyEstimator {
    double estimate = 0.0;  // seconds, >= 0
    long samples_seen = 0;
};

LatencyEstimator make_estimator(const SchedulerConfig& cfg);

/// Blends one measured latency sample into the estimate:
/// new = (1 - alpha) * old + alpha * sample.
/// The very first sample replaces the configured prior outright.
LatencyEstimator update_estimate(LatencyEstimator est, double sample,
                                 const SchedulerConfig& cfg);

/// Wall-clock coverage target for the next guard: estimate + delta.
double guard_budget(const LatencyEstimator& est, const SchedulerConfig& cfg);

/// Smallest k in [1, H] whose predicted prefix time reaches `psi`; H when no
/// prefix does. A released guard is never empty, so psi = 0 yields 1.
std::size_t select_guard_prefix(std::span<const ActionUnit> units, double psi);

/// Outcome of one handoff evaluation.
struct HandoffDecision {
    enum class Kind { Release, Backup, Stop };

    Kind kind = Kind::Stop;
    std::size_t k_star = 0;            // set for Release
    std::optional<ActionUnit> backup;  // set for Backup

    static HandoffDecision release(std::size_t k) { return {Kind::Release, k, std::nullopt}; }
    static HandoffDecision run_backup(ActionUnit unit) { return {Kind::Backup, 0, unit}; }
    static HandoffDecision stop() { return {Kind::Stop, 0, std::nullopt}; }
};

/// Per-round handoff rule.
///
/// A refreshed continuation, once present, is always released: when it
/// completed within the guard's predicted coverage the handoff is seamless,
/// and a late arrival is still fresher than anything else available, so
/// discarding it would only worsen continuity (the caller records the visible
/// gap). Only when no refresh is available does the fallback ladder apply:
/// a previously validated backup unit bridges the overrun while quota lasts,
/// and stop is the total fallback.
HandoffDecision decide_handoff(double refresh_latency, double guard_time_remaining,
                               const Continuation* refreshed, const ActionUnit* backup,
                               int consecutive_backups, const SchedulerConfig& cfg,
                               double psi);

}  // namespace guardrun
