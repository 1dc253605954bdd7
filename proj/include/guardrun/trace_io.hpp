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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "guardrun/metrics.hpp"

namespace guardrun {

// Trace logs are newline-delimited JSON, one object per round with keys
// {round, t_send, t_recv, t_empty?, t_issue, t_done}; seconds are written
// with microsecond precision so identical runs serialize byte-identically.

std::string trace_record_line(const RoundTrace& trace);
void write_trace_log(std::ostream& out, std::span<const RoundTrace> rounds);
void write_trace_log_file(const std::string& path, std::span<const RoundTrace> rounds);

/// Parses a trace log, validating each record's ordering invariants.
/// Malformed records raise MalformedTraceError naming the line number.
std::vector<RoundTrace> read_trace_log(std::istream& in);
std::vector<RoundTrace> read_trace_log_file(const std::string& path);

/// Recomputes an EpisodeReport from a recorded trace alone.
///
/// Waiting is reconstructed as the sum of visible gaps, and the episode span
/// runs from the first dispatch to the last recorded completion, so
/// t_execution = span - t_wait. For episodes that end with an explicit stop
/// unit this matches the runtime's own report exactly; for truncated logs it
/// covers only the trace-visible span.
EpisodeReport analyze_trace(std::span<const RoundTrace> rounds, double pause_threshold);
EpisodeReport analyze_trace_file(const std::string& path, double pause_threshold);

std::string report_to_json(const EpisodeReport& report);
EpisodeReport report_from_json(const std::string& text);
void write_report_file(const std::string& path, const EpisodeReport& report);
EpisodeReport read_report_file(const std::string& path);

/// CSV mirrors the episode-table column order:
/// n_round, t_execution, t_wait, t_episode, eta_wait, n_pause,
/// mean_l_infer, mean_l_gap, mean_l_execution, mean_l_total.
std::string report_csv_header();
std::string report_csv_row(const EpisodeReport& report);

}  // namespace guardrun
