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

#include "guardrun/compare.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace guardrun {
namespace {

double round1(double value) { return std::round(value * 10.0) / 10.0; }

double mean_of(std::span<const EpisodeReport> reports, double EpisodeReport::* field) {
    double sum = 0.0;
    for (const EpisodeReport& report : reports) {
        sum += report.*field;
    }
    return sum / static_cast<double>(reports.size());
}

double mean_of_long(std::span<const EpisodeReport> reports, long EpisodeReport::* field) {
    double sum = 0.0;
    for (const EpisodeReport& report : reports) {
        sum += static_cast<double>(report.*field);
    }
    return sum / static_cast<double>(reports.size());
}

}  // namespace

EpisodeReport mean_report(std::span<const EpisodeReport> reports) {
    if (reports.empty()) {
        throw std::invalid_argument("mean_report: empty run");
    }
    EpisodeReport mean;
    const double n = static_cast<double>(reports.size());
    for (const EpisodeReport& report : reports) {
        mean.t_execution += report.t_execution;
        mean.t_wait += report.t_wait;
        mean.t_episode += report.t_episode;
        mean.eta_wait += report.eta_wait;
        mean.mean_l_infer += report.mean_l_infer;
        mean.mean_l_gap += report.mean_l_gap;
        mean.mean_l_execution += report.mean_l_execution;
        mean.mean_l_total += report.mean_l_total;
        mean.t_wait_first_round += report.t_wait_first_round;
        mean.mean_abs_duration_error += report.mean_abs_duration_error;
    }
    mean.t_execution /= n;
    mean.t_wait /= n;
    mean.t_episode /= n;
    mean.eta_wait /= n;
    mean.mean_l_infer /= n;
    mean.mean_l_gap /= n;
    mean.mean_l_execution /= n;
    mean.mean_l_total /= n;
    mean.t_wait_first_round /= n;
    mean.mean_abs_duration_error /= n;
    mean.n_round = std::lround(mean_of_long(reports, &EpisodeReport::n_round));
    mean.n_pause = std::lround(mean_of_long(reports, &EpisodeReport::n_pause));
    return mean;
}

RunComparison compare_runs(std::span<const EpisodeReport> runs_a,
                           std::span<const EpisodeReport> runs_b) {
    if (runs_a.empty() || runs_b.empty()) {
        throw std::invalid_argument("compare_runs: both runs must be non-empty");
    }
    RunComparison cmp;
    auto add = [&cmp](const std::string& name, double a, double b) {
        MetricComparison metric;
        metric.metric = name;
        metric.mean_a = a;
        metric.mean_b = b;
        metric.relative_change = a != 0.0 ? (b - a) / a : 0.0;
        cmp.metrics.push_back(std::move(metric));
    };
    add("n_round", mean_of_long(runs_a, &EpisodeReport::n_round),
        mean_of_long(runs_b, &EpisodeReport::n_round));
    add("t_execution", mean_of(runs_a, &EpisodeReport::t_execution),
        mean_of(runs_b, &EpisodeReport::t_execution));
    const double wait_a = mean_of(runs_a, &EpisodeReport::t_wait);
    const double wait_b = mean_of(runs_b, &EpisodeReport::t_wait);
    add("t_wait", wait_a, wait_b);
    const double episode_a = mean_of(runs_a, &EpisodeReport::t_episode);
    const double episode_b = mean_of(runs_b, &EpisodeReport::t_episode);
    add("t_episode", episode_a, episode_b);
    add("eta_wait", mean_of(runs_a, &EpisodeReport::eta_wait),
        mean_of(runs_b, &EpisodeReport::eta_wait));
    add("n_pause", mean_of_long(runs_a, &EpisodeReport::n_pause),
        mean_of_long(runs_b, &EpisodeReport::n_pause));
    add("mean_l_infer", mean_of(runs_a, &EpisodeReport::mean_l_infer),
        mean_of(runs_b, &EpisodeReport::mean_l_infer));
    add("mean_l_gap", mean_of(runs_a, &EpisodeReport::mean_l_gap),
        mean_of(runs_b, &EpisodeReport::mean_l_gap));
    add("mean_l_execution", mean_of(runs_a, &EpisodeReport::mean_l_execution),
        mean_of(runs_b, &EpisodeReport::mean_l_execution));
    add("mean_l_total", mean_of(runs_a, &EpisodeReport::mean_l_total),
        mean_of(runs_b, &EpisodeReport::mean_l_total));

    cmp.wait_reduction_ratio = wait_a != 0.0 ? 1.0 - wait_b / wait_a : 0.0;
    cmp.wait_reduction_pct = round1(cmp.wait_reduction_ratio * 100.0);
    cmp.episode_reduction_ratio = episode_a != 0.0 ? 1.0 - episode_b / episode_a : 0.0;
    cmp.episode_reduction_pct = round1(cmp.episode_reduction_ratio * 100.0);
    return cmp;
}

std::string comparison_to_json(const RunComparison& cmp) {
    nlohmann::json metrics = nlohmann::json::array();
    for (const MetricComparison& metric : cmp.metrics) {
        metrics.push_back({{"metric", metric.metric},
                           {"mean_a", metric.mean_a},
                           {"mean_b", metric.mean_b},
                           {"relative_change", metric.relative_change}});
    }
    nlohmann::json obj{{"metrics", std::move(metrics)},
                       {"wait_reduction_ratio", cmp.wait_reduction_ratio},
                       {"wait_reduction_pct", cmp.wait_reduction_pct},
                       {"episode_reduction_ratio", cmp.episode_reduction_ratio},
                       {"episode_reduction_pct", cmp.episode_reduction_pct}};
    return obj.dump(2) + "\n";
}

std::string comparison_to_csv(const RunComparison& cmp) {
    std::string out = "metric,mean_a,mean_b,relative_change\n";
    char buf[160];
    for (const MetricComparison& metric : cmp.metrics) {
        std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f\n", metric.metric.c_str(),
                      metric.mean_a, metric.mean_b, metric.relative_change);
        out += buf;
    }
    std::snprintf(buf, sizeof(buf), "wait_reduction_pct,%.1f,,\n", cmp.wait_reduction_pct);
    out += buf;
    std::snprintf(buf, sizeof(buf), "episode_reduction_pct,%.1f,,\n", cmp.episode_reduction_pct);
    out += buf;
    return out;
}

std::string comparison_to_table(const RunComparison& cmp) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-18s %12s %12s %10s\n", "metric", "run_a", "run_b",
                  "change%");
    out << buf;
    for (const MetricComparison& metric : cmp.metrics) {
        std::snprintf(buf, sizeof(buf), "%-18s %12.3f %12.3f %9.1f%%\n", metric.metric.c_str(),
                      metric.mean_a, metric.mean_b, metric.relative_change * 100.0);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "waiting-time reduction: %.1f%%\n", cmp.wait_reduction_pct);
    out << buf;
    std::snprintf(buf, sizeof(buf), "episode-time reduction: %.1f%%\n", cmp.episode_reduction_pct);
    out << buf;
    return out.str();
}

}  // namespace guardrun
