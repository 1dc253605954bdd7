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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "guardrun/engine.hpp"
#include "guardrun/sim.hpp"
#include "guardrun/wire.hpp"

namespace guardrun::net {

/// Monotonic wall clock with its origin at construction, so timestamps live
/// in the same small-positive-seconds domain the virtual clock uses.
class WallClock final : public Clock {
public:
    WallClock() : origin_(std::chrono::steady_clock::now()) {}

    double now() const override {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - origin_).count();
    }

    std::chrono::steady_clock::time_point to_time_point(double instant) const {
        return origin_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(instant));
    }

private:
    std::chrono::steady_clock::time_point origin_;
};

/// Controller that sleeps for each unit's predicted duration, standing in for
/// actuation, and reports the measured elapsed time.
class SleepController final : public ControllerPort {
public:
    double execute(const ActionUnit& unit) override;
};

/// Line-framed TCP connection (client side). Methods throw ProtocolError on
/// framing violations and std::runtime_error on transport failures.
class LineConnection {
public:
    static LineConnection connect_to(const std::string& host, std::uint16_t port);
    explicit LineConnection(int fd) : fd_(fd) {}
    LineConnection(LineConnection&& other) noexcept;
    LineConnection& operator=(LineConnection&&) = delete;
    LineConnection(const LineConnection&) = delete;
    ~LineConnection();

    void send_line(const std::string& line);
    /// Reads up to the next linefeed. Returns false on orderly close at a
    /// frame boundary; a mid-frame close raises ProtocolError.
    bool read_line(std::string& line);
    void shutdown_both();
    bool valid() const { return fd_ >= 0; }

private:
    int fd_ = -1;
    std::string buffer_;
};

struct ServerConfig {
    std::string bind_host = "127.0.0.1";
    std::uint16_t port = 0;  // 0 picks an ephemeral port
    LatencyModel latency = LatencyModel::constant(0.0);
    sim::StubNavigatorSpec navigator;
    std::uint64_t seed = 0;
    bool log_rounds = false;
};

/// Inference-server stub: answers each observation with the scripted
/// navigator's continuation after the injected delay, one client per
/// connection, one activity per connection.
class InferenceServer {
public:
    explicit InferenceServer(const ServerConfig& config);
    ~InferenceServer();

    /// Binds and starts the accept loop on a background thread.
    void start();
    /// Blocks until shut down (signal-driven foreground use).
    void serve_forever();
    void stop();

    std::uint16_t port() const { return bound_port_; }
    long connections_served() const { return connections_served_.load(); }

private:
    void accept_loop();
    void serve_connection(int fd);

    ServerConfig config_;
    int listen_fd_ = -1;
    std::uint16_t bound_port_ = 0;
    std::atomic<bool> stopping_{false};
    std::atomic<long> connections_served_{0};
    std::thread accept_thread_;
    std::mutex workers_mutex_;
    std::vector<std::thread> workers_;
};

/// Navigator port backed by one socket connection. Stop replies are
/// synthesized into a terminal stop unit so the runtime sees one shape.
class SocketNavigatorPort final : public NavigatorPort {
public:
    SocketNavigatorPort(LineConnection connection, Clock& clock);

    Continuation refresh(const NavigatorRequest& request) override;
    void shutdown() { connection_.shutdown_both(); }

private:
    LineConnection connection_;
    Clock& clock_;
    ActionId max_seen_id_ = 0;
};

/// Real-thread refresh channel: a worker performs the blocking round trip
/// while the executor keeps consuming the guard. The handoff of the outcome
/// is a single mutex-guarded exchange.
class ThreadedRefreshChannel final : public RefreshChannel {
public:
    ThreadedRefreshChannel(NavigatorPort& port, WallClock& clock, double dispatch_delay);
    ~ThreadedRefreshChannel() override;

    void dispatch(NavigatorRequest request) override;
    std::optional<RefreshOutcome> poll() override;
    std::optional<RefreshOutcome> wait_until(double deadline) override;
    bool has_pending() const override;
    std::optional<std::string> error() const override;

private:
    void worker_loop();

    NavigatorPort& port_;
    WallClock& clock_;
    double dispatch_delay_;
    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::optional<NavigatorRequest> queued_request_;
    std::optional<RefreshOutcome> completed_;
    std::optional<std::string> error_;
    bool pending_ = false;
    bool shutdown_ = false;
    std::thread worker_;
};

/// Runs one episode against a remote server with wall-clock timestamps and
/// sleep-based actuation. An unreachable server or a mid-episode connection
/// loss yields a partial result flagged aborted.
EpisodeResult run_client_episode(const std::string& host, std::uint16_t port,
                                 const EpisodeConfig& cfg);
EpisodeResult run_client_episode(const std::string& host, std::uint16_t port,
                                 const EpisodeConfig& cfg, ControllerPort& controller);

/// Parses "host:port". Throws std::invalid_argument.
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& text);

}  // namespace guardrun::net
