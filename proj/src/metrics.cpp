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

#include "guardrun/metrics.hpp"

#include <string>

namespace guardrun {
namespace {

void require_ordered(double earlier, double later, const char* pair, int round) {
    if (later < earlier) {
        throw MalformedTraceError("round " + std::to_string(round) +
                                  ": ordering violated for " + pair);
    }
}

}  // namespace

void RoundTrace::validate() const {
    require_ordered(t_send, t_recv, "t_send <= t_recv", round);
    if (t_empty.has_value()) {
        require_ordered(*t_empty, t_issue, "t_empty <= t_issue", round);
    }
    require_ordered(t_issue, t_done, "t_issue <= t_done", round);
}

RoundMetrics derive_round_metrics(const RoundTrace& trace, double pause_threshold) {
    trace.validate();
    RoundMetrics m;
    m.round = trace.round;
    m.l_infer = trace.t_recv - trace.t_send;
    m.interrupted = trace.t_empty.has_value();
    m.l_gap = m.interrupted ? trace.t_issue - *trace.t_empty : 0.0;
    m.l_execution = trace.t_done - trace.t_issue;
    m.l_total = m.l_gap + m.l_execution;
    m.is_pause = m.l_gap > pause_threshold;
    return m;
}

EpisodeReport aggregate_episode(std::span<const RoundMetrics> rounds, double t_wait,
                                double t_execution) {
    EpisodeReport report;
    report.n_round = static_cast<long>(rounds.size());
    report.t_wait = t_wait;
    report.t_execution = t_execution;
    report.t_episode = t_execution + t_wait;
    report.eta_wait = report.t_episode > 0.0 ? t_wait / report.t_episode : 0.0;

    double sum_infer = 0.0;
    double sum_gap = 0.0;
    double sum_execution = 0.0;
    double sum_total = 0.0;
    long interrupted = 0;
    for (const RoundMetrics& m : rounds) {
        sum_infer += m.l_infer;
        sum_gap += m.l_gap;  // seamless rounds contribute 0
        if (m.interrupted) {
            sum_execution += m.l_execution;
            sum_total += m.l_total;
            ++interrupted;
        }
        if (m.is_pause) {
            ++report.n_pause;
        }
    }
    if (!rounds.empty()) {
        report.mean_l_infer = sum_infer / static_cast<double>(rounds.size());
        report.mean_l_gap = sum_gap / static_cast<double>(rounds.size());
    }
    if (interrupted > 0) {
        report.mean_l_execution = sum_execution / static_cast<double>(interrupted);
        report.mean_l_total = sum_total / static_cast<double>(interrupted);
    }
    return report;
}

}  // namespace guardrun
