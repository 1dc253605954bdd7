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

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "guardrun/compare.hpp"
#include "guardrun/net.hpp"
#include "guardrun/scenario_config.hpp"
#include "guardrun/sim.hpp"
#include "guardrun/trace_io.hpp"

namespace fs = std::filesystem;
using namespace guardrun;

namespace {

std::string report_table(const EpisodeReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "n_round            %ld\n"
                  "t_execution        %.3f s\n"
                  "t_wait             %.3f s\n"
                  "t_episode          %.3f s\n"
                  "eta_wait           %.1f%%\n"
                  "n_pause            %ld\n"
                  "mean_l_infer       %.3f s\n"
                  "mean_l_gap         %.3f s\n"
                  "mean_l_execution   %.3f s\n"
                  "mean_l_total       %.3f s\n",
                  r.n_round, r.t_execution, r.t_wait, r.t_episode, r.eta_wait * 100.0, r.n_pause,
                  r.mean_l_infer, r.mean_l_gap, r.mean_l_execution, r.mean_l_total);
    return buf;
}

void print_report(const EpisodeReport& report, const std::string& format) {
    if (format == "json") {
        std::cout << report_to_json(report) << "\n";
    } else if (format == "csv") {
        std::cout << report_csv_header() << "\n" << report_csv_row(report) << "\n";
    } else {
        std::cout << report_table(report);
    }
}

std::vector<EpisodeReport> load_run_dir(const std::string& dir) {
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("report_", 0) == 0 && entry.path().extension() == ".json") {
            paths.push_back(entry.path());
        }
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) {
        throw std::runtime_error("no report_*.json files in " + dir);
    }
    std::vector<EpisodeReport> reports;
    reports.reserve(paths.size());
    for (const fs::path& path : paths) {
        reports.push_back(read_report_file(path.string()));
    }
    return reports;
}

int cmd_sim(const std::string& scenario_path, int episodes_override, long seed_override,
            const std::string& out_dir, const std::string& format) {
    sim::Scenario scenario = parse_scenario_file(scenario_path);
    if (episodes_override > 0) {
        scenario.episodes = episodes_override;
    }
    if (seed_override >= 0) {
        scenario.seed = static_cast<std::uint64_t>(seed_override);
    }
    std::vector<EpisodeResult> results = sim::simulate_scenario(scenario);

    bool any_aborted = false;
    std::vector<EpisodeReport> reports;
    reports.reserve(results.size());
    for (const EpisodeResult& result : results) {
        reports.push_back(result.report);
        any_aborted = any_aborted || result.aborted;
    }

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::string csv = report_csv_header() + "\n";
        for (std::size_t i = 0; i < results.size(); ++i) {
            char suffix[32];
            std::snprintf(suffix, sizeof(suffix), "ep%03zu", i);
            write_trace_log_file(out_dir + "/trace_" + suffix + ".jsonl", results[i].trace);
            write_report_file(out_dir + "/report_" + suffix + ".json", results[i].report);
            csv += report_csv_row(results[i].report) + "\n";
        }
        std::ofstream csv_file(out_dir + "/reports.csv", std::ios::binary);
        csv_file << csv;
    }

    std::cout << "scenario " << scenario.name << ": " << results.size() << " episode(s), mean:\n";
    print_report(mean_report(reports), format);
    for (const EpisodeResult& result : results) {
        if (result.aborted) {
            std::cerr << "episode aborted: " << result.abort_reason << "\n";
        }
    }
    return any_aborted ? 1 : 0;
}

std::unique_ptr<net::InferenceServer> g_server;

int cmd_serve(const std::string& bind, const std::string& latency_spec, long seed, long horizon,
              const std::string& duration_spec, long stop_after_round, bool verbose) {
    auto [host, port] = net::parse_endpoint(bind);
    net::ServerConfig config;
    config.bind_host = host;
    config.port = port;
    config.latency = LatencyModel::parse(latency_spec);
    config.seed = static_cast<std::uint64_t>(seed);
    config.navigator.horizon = static_cast<std::size_t>(horizon);
    config.navigator.action_duration = LatencyModel::parse(duration_spec);
    if (stop_after_round >= 0) {
        config.navigator.stop_after_round = stop_after_round;
    }
    config.log_rounds = verbose;

    g_server = std::make_unique<net::InferenceServer>(config);
    g_server->start();
    std::signal(SIGINT, [](int) { g_server->stop(); });
    std::signal(SIGTERM, [](int) { g_server->stop(); });
    std::cerr << "serving on " << host << ":" << g_server->port() << " (delay "
              << config.latency.describe() << ")\n";
    g_server->serve_forever();
    return 0;
}

int cmd_client(const std::string& connect, const EpisodeConfig& cfg, const std::string& out_dir,
               const std::string& format) {
    auto [host, port] = net::parse_endpoint(connect);
    EpisodeResult result = net::run_client_episode(host, port, cfg);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_trace_log_file(out_dir + "/trace_ep000.jsonl", result.trace);
        write_report_file(out_dir + "/report_ep000.json", result.report);
    }
    print_report(result.report, format);
    if (result.aborted) {
        std::cerr << "episode aborted: " << result.abort_reason << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"latency-hiding action runtime: simulator, loopback harness, trace analysis"};
    app.require_subcommand(1);

    std::string format = "table";

    // sim
    auto* sim_cmd = app.add_subcommand("sim", "run a scenario batch on the virtual clock");
    std::string scenario_path;
    std::string out_dir;
    int episodes_override = 0;
    long seed_override = -1;
    sim_cmd->add_option("--scenario", scenario_path, "scenario file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sim_cmd->add_option("--episodes", episodes_override, "override episode count");
    sim_cmd->add_option("--seed", seed_override, "override scenario seed");
    sim_cmd->add_option("--out", out_dir, "directory for per-episode traces and reports");
    sim_cmd->add_option("--format", format, "summary format: json, csv, table")
        ->check(CLI::IsMember({"json", "csv", "table"}));

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "run the inference-server stub");
    std::string bind = "127.0.0.1:7420";
    std::string latency_spec = "constant:0.3";
    std::string duration_spec = "constant:0.5";
    long serve_seed = 0;
    long horizon = 4;
    long stop_after_round = -1;
    bool verbose = false;
    serve_cmd->add_option("--bind", bind, "host:port to listen on");
    serve_cmd->add_option("--latency-model", latency_spec,
                          "injected response delay, e.g. constant:0.3 or gaussian:0.3,0.05");
    serve_cmd->add_option("--seed", serve_seed, "server-side RNG seed");
    serve_cmd->add_option("--horizon", horizon, "units per continuation")->check(CLI::PositiveNumber);
    serve_cmd->add_option("--action-duration", duration_spec, "per-unit duration model");
    serve_cmd->add_option("--stop-after-round", stop_after_round,
                          "answer stop once the round index exceeds this");
    serve_cmd->add_flag("--verbose", verbose, "log each answered round");

    // client
    auto* client_cmd = app.add_subcommand("client", "run one episode against a server");
    std::string connect = "127.0.0.1:7420";
    std::string mode = "live";
    std::string guard_spec = "adaptive";
    EpisodeConfig cfg;
    client_cmd->add_option("--connect", connect, "server host:port");
    client_cmd->add_option("--mode", mode, "blocking or live")
        ->check(CLI::IsMember({"blocking", "live"}));
    client_cmd->add_option("--alpha", cfg.scheduler.alpha, "EWMA update factor in (0,1]");
    client_cmd->add_option("--delta", cfg.scheduler.delta, "guard budget safety margin (s)");
    client_cmd->add_option("--initial-estimate", cfg.scheduler.initial_estimate,
                           "latency prior before the first sample (s)");
    client_cmd->add_option("--pause-threshold", cfg.scheduler.pause_threshold,
                           "gap length that counts as a pause (s)");
    client_cmd->add_option("--max-backups", cfg.scheduler.max_consecutive_backups,
                           "consecutive backup bridges before stop");
    client_cmd->add_option("--guard", guard_spec, "adaptive or fixed:<count>");
    client_cmd->add_option("--max-rounds", cfg.max_rounds, "round budget");
    client_cmd->add_option("--refresh-timeout", cfg.refresh_timeout,
                           "seconds to wait on an in-flight refresh before fallback");
    client_cmd->add_option("--refresh-dispatch-delay", cfg.refresh_dispatch_delay,
                           "delay between handoff and the next dispatch (s)");
    client_cmd->add_option("--instruction", cfg.instruction_id, "instruction id");
    client_cmd->add_option("--out", out_dir, "directory for the trace and report");
    client_cmd->add_option("--format", format, "report format: json, csv, table")
        ->check(CLI::IsMember({"json", "csv", "table"}));

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "recompute a report from a trace log");
    std::string trace_path;
    double pause_threshold = 0.5;
    analyze_cmd->add_option("--trace", trace_path, "trace log (NDJSON)")
        ->required()
        ->check(CLI::ExistingFile);
    analyze_cmd->add_option("--pause-threshold", pause_threshold, "pause threshold (s)");
    analyze_cmd->add_option("--format", format, "report format: json, csv, table")
        ->check(CLI::IsMember({"json", "csv", "table"}));

    // compare
    auto* compare_cmd = app.add_subcommand("compare", "compare two runs of episode reports");
    std::string dir_a;
    std::string dir_b;
    compare_cmd->add_option("--a", dir_a, "baseline run directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    compare_cmd->add_option("--b", dir_b, "candidate run directory")
        ->required()
        ->check(CLI::ExistingDirectory);
    compare_cmd->add_option("--format", format, "output format: json, csv, table")
        ->check(CLI::IsMember({"json", "csv", "table"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim_cmd->parsed()) {
            return cmd_sim(scenario_path, episodes_override, seed_override, out_dir, format);
        }
        if (serve_cmd->parsed()) {
            return cmd_serve(bind, latency_spec, serve_seed, horizon, duration_spec,
                             stop_after_round, verbose);
        }
        if (client_cmd->parsed()) {
            cfg.mode = mode == "blocking" ? RunMode::Blocking : RunMode::Live;
            if (guard_spec == "adaptive") {
                cfg.guard.mode = GuardSizing::Mode::AdaptiveWallClock;
            } else if (guard_spec.rfind("fixed:", 0) == 0) {
                cfg.guard.mode = GuardSizing::Mode::FixedCount;
                cfg.guard.fixed_count = std::stoul(guard_spec.substr(6));
            } else {
                throw std::invalid_argument("--guard must be adaptive or fixed:<count>");
            }
            return cmd_client(connect, cfg, out_dir, format);
        }
        if (analyze_cmd->parsed()) {
            print_report(analyze_trace_file(trace_path, pause_threshold), format);
            return 0;
        }
        if (compare_cmd->parsed()) {
            RunComparison cmp = compare_runs(load_run_dir(dir_a), load_run_dir(dir_b));
            if (format == "json") {
                std::cout << comparison_to_json(cmp);
            } else if (format == "csv") {
                std::cout << comparison_to_csv(cmp);
            } else {
                std::cout << comparison_to_table(cmp);
            }
            return 0;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 0;
}
