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

#include "guardrun/scheduler.hpp"

#include <string>

namespace guardrun {

void SchedulerConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("alpha must be in (0,1]");
    }
    if (delta < 0.0) {
        throw std::invalid_argument("delta must be >= 0");
    }
    if (initial_estimate < 0.0) {
        throw std::invalid_argument("initial_estimate must be >= 0");
    }
    if (!(pause_threshold > 0.0)) {
        throw std::invalid_argument("pause_threshold must be > 0");
    }
    if (max_consecutive_backups < 0) {
        throw std::invalid_argument("max_backups must be >= 0");
    }
}

LatencyEstimator make_estimator(const SchedulerConfig& cfg) {
    return {cfg.initial_estimate, 0};
}

LatencyEstimator update_estimate(LatencyEstimator est, double sample,
                                 const SchedulerConfig& cfg) {
    if (sample < 0.0) {
        throw MeasurementError("latency sample is negative: " + std::to_string(sample));
    }
    if (est.samples_seen == 0) {
        // A configured prior should not bias the first real measurement.
        est.estimate = sample;
    } else {
        est.estimate = (1.0 - cfg.alpha) * est.estimate + cfg.alpha * sample;
    }
    ++est.samples_seen;
    return est;
}

double guard_budget(const LatencyEstimator& est, const SchedulerConfig& cfg) {
    return est.estimate + cfg.delta;
}

std::size_t select_guard_prefix(std::span<const ActionUnit> units, double psi) {
    if (units.empty()) {
        throw ProtocolError("select_guard_prefix: empty continuation");
    }
    double covered = 0.0;
    for (std::size_t k = 1; k <= units.size(); ++k) {
        covered += units[k - 1].predicted_duration;
        if (covered >= psi) {
            return k;
        }
    }
    return units.size();  // no prefix covers psi; commit the whole horizon
}

HandoffDecision decide_handoff(double refresh_latency, double guard_time_remaining,
                               const Continuation* refreshed, const ActionUnit* backup,
                               int consecutive_backups, const SchedulerConfig& cfg,
                               double psi) {
    // The latency-vs-coverage comparison classifies the handoff as seamless
    // or interrupted; the caller records that in the round trace. It does not
    // change what gets released, so both values are accepted but unused here.
    (void)refresh_latency;
    (void)guard_time_remaining;
    if (refreshed != nullptr) {
        return HandoffDecision::release(
            select_guard_prefix(std::span<const ActionUnit>(refreshed->units), psi));
    }
    if (backup != nullptr && consecutive_backups < cfg.max_consecutive_backups) {
        return HandoffDecision::run_backup(*backup);
    }
    return HandoffDecision::stop();
}

}  // namespace guardrun
