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

#include "guardrun/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace guardrun {
namespace {

using nlohmann::json;

std::string fixed6(double seconds) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", seconds);
    return buf;
}

double require_number(const json& obj, const char* key, int line) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) {
        throw MalformedTraceError("line " + std::to_string(line) + ": missing or non-numeric '" +
                                  key + "'");
    }
    return it->get<double>();
}

}  // namespace

std::string trace_record_line(const RoundTrace& trace) {
    std::string line = "{\"round\":" + std::to_string(trace.round);
    line += ",\"t_send\":" + fixed6(trace.t_send);
    line += ",\"t_recv\":" + fixed6(trace.t_recv);
    if (trace.t_empty.has_value()) {
        line += ",\"t_empty\":" + fixed6(*trace.t_empty);
    }
    line += ",\"t_issue\":" + fixed6(trace.t_issue);
    line += ",\"t_done\":" + fixed6(trace.t_done);
    line += "}";
    return line;
}

void write_trace_log(std::ostream& out, std::span<const RoundTrace> rounds) {
    for (const RoundTrace& trace : rounds) {
        out << trace_record_line(trace) << '\n';
    }
}

void write_trace_log_file(const std::string& path, std::span<const RoundTrace> rounds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open trace log for writing: " + path);
    }
    write_trace_log(out, rounds);
}

std::vector<RoundTrace> read_trace_log(std::istream& in) {
    std::vector<RoundTrace> rounds;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            throw MalformedTraceError("line " + std::to_string(line_no) + ": not a JSON object");
        }
        RoundTrace trace;
        auto round_it = obj.find("round");
        if (round_it == obj.end() || !round_it->is_number_integer()) {
            throw MalformedTraceError("line " + std::to_string(line_no) +
                                      ": missing or non-integer 'round'");
        }
        trace.round = round_it->get<int>();
        trace.t_send = require_number(obj, "t_send", line_no);
        trace.t_recv = require_number(obj, "t_recv", line_no);
        if (obj.contains("t_empty")) {
            trace.t_empty = require_number(obj, "t_empty", line_no);
        }
        trace.t_issue = require_number(obj, "t_issue", line_no);
        trace.t_done = require_number(obj, "t_done", line_no);
        try {
            trace.validate();
        } catch (const MalformedTraceError& err) {
            throw MalformedTraceError("line " + std::to_string(line_no) + ": " + err.what());
        }
        rounds.push_back(trace);
    }
    return rounds;
}

std::vector<RoundTrace> read_trace_log_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open trace log: " + path);
    }
    return read_trace_log(in);
}

EpisodeReport analyze_trace(std::span<const RoundTrace> rounds, double pause_threshold) {
    std::vector<RoundMetrics> metrics;
    metrics.reserve(rounds.size());
    double t_wait = 0.0;
    for (const RoundTrace& trace : rounds) {
        RoundMetrics m = derive_round_metrics(trace, pause_threshold);
        t_wait += m.l_gap;
        metrics.push_back(m);
    }
    double span = 0.0;
    double first_gap = 0.0;
    if (!rounds.empty()) {
        span = rounds.back().t_done - rounds.front().t_send;
        first_gap = metrics.front().l_gap;
    }
    EpisodeReport report = aggregate_episode(metrics, t_wait, span - t_wait);
    report.t_wait_first_round = first_gap;
    return report;
}

EpisodeReport analyze_trace_file(const std::string& path, double pause_threshold) {
    auto rounds = read_trace_log_file(path);
    return analyze_trace(rounds, pause_threshold);
}

std::string report_to_json(const EpisodeReport& r) {
    json obj{
        {"n_round", r.n_round},
        {"t_execution", r.t_execution},
        {"t_wait", r.t_wait},
        {"t_episode", r.t_episode},
        {"eta_wait", r.eta_wait},
        {"n_pause", r.n_pause},
        {"mean_l_infer", r.mean_l_infer},
        {"mean_l_gap", r.mean_l_gap},
        {"mean_l_execution", r.mean_l_execution},
        {"mean_l_total", r.mean_l_total},
        {"t_wait_first_round", r.t_wait_first_round},
        {"mean_abs_duration_error", r.mean_abs_duration_error},
        {"aborted", r.aborted},
    };
    return obj.dump();
}

EpisodeReport report_from_json(const std::string& text) {
    json obj = json::parse(text);
    EpisodeReport r;
    r.n_round = obj.at("n_round").get<long>();
    r.t_execution = obj.at("t_execution").get<double>();
    r.t_wait = obj.at("t_wait").get<double>();
    r.t_episode = obj.at("t_episode").get<double>();
    r.eta_wait = obj.at("eta_wait").get<double>();
    r.n_pause = obj.at("n_pause").get<long>();
    r.mean_l_infer = obj.at("mean_l_infer").get<double>();
    r.mean_l_gap = obj.at("mean_l_gap").get<double>();
    r.mean_l_execution = obj.at("mean_l_execution").get<double>();
    r.mean_l_total = obj.at("mean_l_total").get<double>();
    r.t_wait_first_round = obj.value("t_wait_first_round", 0.0);
    r.mean_abs_duration_error = obj.value("mean_abs_duration_error", 0.0);
    r.aborted = obj.value("aborted", false);
    return r;
}

void write_report_file(const std::string& path, const EpisodeReport& report) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open report for writing: " + path);
    }
    out << report_to_json(report) << '\n';
}

EpisodeReport read_report_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open report: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return report_from_json(buf.str());
}

std::string report_csv_header() {
    return "n_round,t_execution,t_wait,t_episode,eta_wait,n_pause,"
           "mean_l_infer,mean_l_gap,mean_l_execution,mean_l_total";
}

std::string report_csv_row(const EpisodeReport& r) {
    std::string row = std::to_string(r.n_round);
    row += ',' + fixed6(r.t_execution);
    row += ',' + fixed6(r.t_wait);
    row += ',' + fixed6(r.t_episode);
    row += ',' + fixed6(r.eta_wait);
    row += ',' + std::to_string(r.n_pause);
    row += ',' + fixed6(r.mean_l_infer);
    row += ',' + fixed6(r.mean_l_gap);
    row += ',' + fixed6(r.mean_l_execution);
    row += ',' + fixed6(r.mean_l_total);
    return row;
}

}  // namespace guardrun
