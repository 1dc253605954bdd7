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
#include <span>
#include <stdexcept>
#include <vector>

namespace guardrun {

struct MalformedTraceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The five client-side timestamps of one inference round, all on one
/// monotonic clock domain:
///   t_send   observation dispatched to the navigator
///   t_recv   navigator response received
///   t_empty  execution queue exhausted (absent when the refresh arrived
///            before the queue emptied; the round was seamless)
///   t_issue  first action from the refreshed continuation issued
///   t_done   that control step finished
struct RoundTrace {
    int round = 0;
    double t_send = 0.0;
    double t_recv = 0.0;
    std::optional<double> t_empty;
    double t_issue = 0.0;
    double t_done = 0.0;

    /// Throws MalformedTraceError naming the violated pair.
    void validate() const;
};

struct RoundMetrics {
    int round = 0;
    double l_infer = 0.0;      // t_recv - t_send
    double l_gap = 0.0;        // t_issue - t_empty; 0 when the round was seamless
    double l_execution = 0.0;  // t_done - t_issue
    double l_total = 0.0;      // l_gap + l_execution, exactly
    bool interrupted = false;  // t_empty was present
    bool is_pause = false;     // l_gap strictly above the pause threshold
};

RoundMetrics derive_round_metrics(const RoundTrace& trace, double pause_threshold);

/// Episode-level continuity aggregate.
///
/// Mean denominators follow the metric roles: l_infer averages over all
/// rounds; l_gap averages over all rounds with seamless rounds contributing
/// zero; l_execution and l_total describe resumption after an interruption,
/// so they average over interrupted rounds only (zero when there were none).
struct EpisodeReport {
    long n_round = 0;
    double t_execution = 0.0;
    double t_wait = 0.0;
    double t_episode = 0.0;  // t_execution + t_wait
    double eta_wait = 0.0;   // t_wait / t_episode, 0 when t_episode == 0
    long n_pause = 0;
    double mean_l_infer = 0.0;
    double mean_l_gap = 0.0;
    double mean_l_execution = 0.0;
    double mean_l_total = 0.0;
    // Waiting charged to the very first inference pass, before any action
    // existed; reported separately so it can be excluded downstream.
    double t_wait_first_round = 0.0;
    // Mean |actual - predicted| controller-side duration over executed units.
    double mean_abs_duration_error = 0.0;
    bool aborted = false;

    friend bool operator==(const EpisodeReport&, const EpisodeReport&) = default;
};

EpisodeReport aggregate_episode(std::span<const RoundMetrics> rounds, double t_wait,
                                double t_execution);

}  // namespace guardrun
