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

#include <span>
#include <string>
#include <vector>

#include "guardrun/metrics.hpp"

namespace guardrun {

struct MetricComparison {
    std::string metric;
    double mean_a = 0.0;
    double mean_b = 0.0;
    double relative_change = 0.0;  // (b - a) / a, 0 when a == 0
};

/// Side-by-side comparison of two runs (e.g. a serialized baseline vs the
/// overlapped runtime), with the headline reductions both as raw ratios and
/// rounded to one decimal place for table display.
struct RunComparison {
    std::vector<MetricComparison> metrics;  // fixed episode-table order
    double wait_reduction_ratio = 0.0;      // 1 - mean(t_wait_b) / mean(t_wait_a)
    double wait_reduction_pct = 0.0;        // the ratio as a percentage, 1dp
    double episode_reduction_ratio = 0.0;   // 1 - mean(t_episode_b) / mean(t_episode_a)
    double episode_reduction_pct = 0.0;
};

RunComparison compare_runs(std::span<const EpisodeReport> runs_a,
                           std::span<const EpisodeReport> runs_b);

std::string comparison_to_json(const RunComparison& comparison);
std::string comparison_to_csv(const RunComparison& comparison);
/// Text table mirroring the episode-table column order for side-by-side
/// reading.
std::string comparison_to_table(const RunComparison& comparison);

/// Mean of each report field over a run (aborted episodes included).
EpisodeReport mean_report(std::span<const EpisodeReport> reports);

}  // namespace guardrun
