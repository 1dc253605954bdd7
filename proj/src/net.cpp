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

#include "guardrun/net.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace guardrun::net {

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
    throw std::runtime_error(what + ": " + std::strerror(errno));
}

void sleep_seconds(double seconds) {
    if (seconds > 0.0) {
        std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    }
}

}  // namespace

double SleepController::execute(const ActionUnit& unit) {
    const auto start = std::chrono::steady_clock::now();
    sleep_seconds(unit.predicted_duration);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

LineConnection LineConnection::connect_to(const std::string& host, std::uint16_t port) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) {
        throw_errno("socket");
    }
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd);
        throw std::invalid_argument("not an IPv4 address: " + host);
    }
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        ::close(fd);
        throw_errno("connect to " + host + ":" + std::to_string(port));
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    return LineConnection(fd);
}

LineConnection::LineConnection(LineConnection&& other) noexcept
    : fd_(other.fd_), buffer_(std::move(other.buffer_)) {
    other.fd_ = -1;
}

LineConnection::~LineConnection() {
    if (fd_ >= 0) {
        ::close(fd_);
    }
}

void LineConnection::send_line(const std::string& line) {
    std::size_t sent = 0;
    while (sent < line.size()) {
        ssize_t n = ::send(fd_, line.data() + sent, line.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw_errno("send");
        }
        sent += static_cast<std::size_t>(n);
    }
}

bool LineConnection::read_line(std::string& line) {
    for (;;) {
        auto newline = buffer_.find('\n');
        if (newline != std::string::npos) {
            line = buffer_.substr(0, newline);
            buffer_.erase(0, newline + 1);
            return true;
        }
        char chunk[4096];
        ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
        if (n < 0) {
            if (errno == EINTR) {
                continue;
            }
            throw_errno("recv");
        }
        if (n == 0) {
            if (!buffer_.empty()) {
                throw ProtocolError("connection closed mid-frame (no trailing linefeed)");
            }
            return false;
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

void LineConnection::shutdown_both() {
    if (fd_ >= 0) {
        ::shutdown(fd_, SHUT_RDWR);
    }
}

InferenceServer::InferenceServer(const ServerConfig& config) : config_(config) {
    config_.latency.validate();
}

InferenceServer::~InferenceServer() { stop(); }

void InferenceServer::start() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) {
        throw_errno("socket");
    }
    int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(config_.port);
    if (::inet_pton(AF_INET, config_.bind_host.c_str(), &addr.sin_addr) != 1) {
        throw std::invalid_argument("not an IPv4 address: " + config_.bind_host);
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        throw_errno("bind " + config_.bind_host + ":" + std::to_string(config_.port));
    }
    socklen_t len = sizeof(addr);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    bound_port_ = ntohs(addr.sin_port);
    if (::listen(listen_fd_, 8) != 0) {
        throw_errno("listen");
    }
    accept_thread_ = std::thread([this] { accept_loop(); });
}

void InferenceServer::serve_forever() {
    if (accept_thread_.joinable()) {
        accept_thread_.join();
    }
}

void InferenceServer::stop() {
    bool expected = false;
    if (!stopping_.compare_exchange_strong(expected, true)) {
        if (accept_thread_.joinable()) {
            accept_thread_.join();
        }
        return;
    }
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    if (accept_thread_.joinable()) {
        accept_thread_.join();
    }
    std::vector<std::thread> workers;
    {
        std::lock_guard<std::mutex> lock(workers_mutex_);
        workers.swap(workers_);
    }
    for (std::thread& worker : workers) {
        if (worker.joinable()) {
            worker.join();
        }
    }
}

void InferenceServer::accept_loop() {
    while (!stopping_.load()) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (errno == EINTR) {
                continue;
            }
            break;  // listener closed
        }
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
        std::lock_guard<std::mutex> lock(workers_mutex_);
        workers_.emplace_back([this, fd] { serve_connection(fd); });
    }
}

void InferenceServer::serve_connection(int fd) {
    connections_served_.fetch_add(1);
    LineConnection connection(fd);
    sim::StubNavigator navigator(config_.navigator,
                                 mix_seed(config_.seed, config_.navigator.action_duration.seed));
    LatencyStream delays(config_.latency, mix_seed(config_.seed + 1, config_.latency.seed));
    int last_round = -1;
    try {
        std::string line;
        while (connection.read_line(line)) {
            WireMessage message = decode_message(line);
            const auto* observation = std::get_if<ObservationMsg>(&message);
            if (observation == nullptr) {
                throw ProtocolError("server expects observation messages");
            }
            if (observation->round <= last_round) {
                throw ProtocolError("rounds must strictly increase per connection");
            }
            last_round = observation->round;

            NavigatorRequest request;
            request.round = observation->round;
            request.committed_guard_ids = observation->committed_guard_ids;
            request.instruction_id = observation->instruction_id;
            Continuation continuation = navigator.generate(request);

            const double delay = delays.sample();
            sleep_seconds(delay);

            if (continuation.units.size() == 1 && continuation.units.front().is_stop()) {
                connection.send_line(encode_message(StopMsg{observation->round}));
            } else {
                ContinuationMsg reply;
                reply.round = continuation.round;
                reply.units = continuation.units;
                reply.server_compute_time = delay;
                connection.send_line(encode_message(reply));
            }
            if (config_.log_rounds) {
                std::fprintf(stderr, "[serve] round %d answered after %.3fs\n",
                             observation->round, delay);
            }
        }
    } catch (const std::exception& err) {
        // Protocol violation or transport loss: drop the connection.
        if (config_.log_rounds) {
            std::fprintf(stderr, "[serve] connection dropped: %s\n", err.what());
        }
    }
}

SocketNavigatorPort::SocketNavigatorPort(LineConnection connection, Clock& clock)
    : connection_(std::move(connection)), clock_(clock) {}

Continuation SocketNavigatorPort::refresh(const NavigatorRequest& request) {
    ObservationMsg observation;
    observation.round = request.round;
    observation.client_send_time = clock_.now();
    observation.committed_guard_ids = request.committed_guard_ids;
    observation.instruction_id = request.instruction_id;
    connection_.send_line(encode_message(observation));

    std::string line;
    if (!connection_.read_line(line)) {
        throw std::runtime_error("connection closed while awaiting round " +
                                 std::to_string(request.round));
    }
    WireMessage message = decode_message(line);
    if (const auto* stop = std::get_if<StopMsg>(&message)) {
        if (stop->round != request.round) {
            throw SequencingError("stop for round " + std::to_string(stop->round) +
                                  " does not match pending round " +
                                  std::to_string(request.round));
        }
        Continuation continuation;
        continuation.round = stop->round;
        continuation.units.push_back({++max_seen_id_, ActionKind::Stop, 0.0});
        return continuation;
    }
    const auto* reply = std::get_if<ContinuationMsg>(&message);
    if (reply == nullptr) {
        throw ProtocolError("client expects continuation or stop messages");
    }
    if (reply->round != request.round) {
        throw SequencingError("continuation for round " + std::to_string(reply->round) +
                              " does not match pending round " + std::to_string(request.round));
    }
    Continuation continuation;
    continuation.round = reply->round;
    continuation.units = reply->units;
    for (const ActionUnit& unit : continuation.units) {
        max_seen_id_ = std::max(max_seen_id_, unit.id);
    }
    return continuation;
}

ThreadedRefreshChannel::ThreadedRefreshChannel(NavigatorPort& port, WallClock& clock,
                                               double dispatch_delay)
    : port_(port), clock_(clock), dispatch_delay_(dispatch_delay),
      worker_([this] { worker_loop(); }) {}

ThreadedRefreshChannel::~ThreadedRefreshChannel() {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        shutdown_ = true;
    }
    cv_.notify_all();
    if (worker_.joinable()) {
        worker_.join();
    }
}

void ThreadedRefreshChannel::dispatch(NavigatorRequest request) {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        if (pending_) {
            throw std::logic_error("refresh already in flight");
        }
        pending_ = true;
        completed_.reset();
        queued_request_ = std::move(request);
    }
    cv_.notify_all();
}

std::optional<RefreshOutcome> ThreadedRefreshChannel::poll() {
    std::lock_guard<std::mutex> lock(mutex_);
    if (completed_.has_value()) {
        auto outcome = std::move(completed_);
        completed_.reset();
        pending_ = false;
        return outcome;
    }
    return std::nullopt;
}

std::optional<RefreshOutcome> ThreadedRefreshChannel::wait_until(double deadline) {
    std::unique_lock<std::mutex> lock(mutex_);
    if (!pending_) {
        return std::nullopt;
    }
    cv_.wait_until(lock, clock_.to_time_point(deadline),
                   [this] { return completed_.has_value() || error_.has_value(); });
    if (completed_.has_value()) {
        auto outcome = std::move(completed_);
        completed_.reset();
        pending_ = false;
        return outcome;
    }
    return std::nullopt;
}

bool ThreadedRefreshChannel::has_pending() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return pending_;
}

std::optional<std::string> ThreadedRefreshChannel::error() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return error_;
}

void ThreadedRefreshChannel::worker_loop() {
    for (;;) {
        NavigatorRequest request;
        {
            std::unique_lock<std::mutex> lock(mutex_);
            cv_.wait(lock, [this] { return shutdown_ || queued_request_.has_value(); });
            if (shutdown_) {
                return;
            }
            request = std::move(*queued_request_);
            queued_request_.reset();
        }
        sleep_seconds(dispatch_delay_);
        RefreshOutcome outcome;
        outcome.sent_at = clock_.now();
        try {
            outcome.continuation = port_.refresh(request);
        } catch (const std::exception& err) {
            std::lock_guard<std::mutex> lock(mutex_);
            error_ = err.what();
            cv_.notify_all();
            return;
        }
        outcome.received_at = clock_.now();
        {
            std::lock_guard<std::mutex> lock(mutex_);
            completed_ = std::move(outcome);
        }
        cv_.notify_all();
    }
}

EpisodeResult run_client_episode(const std::string& host, std::uint16_t port,
                                 const EpisodeConfig& cfg) {
    SleepController controller;
    return run_client_episode(host, port, cfg, controller);
}

EpisodeResult run_client_episode(const std::string& host, std::uint16_t port,
                                 const EpisodeConfig& cfg, ControllerPort& controller) {
    cfg.validate();
    WallClock clock;
    std::optional<LineConnection> connection;
    try {
        connection.emplace(LineConnection::connect_to(host, port));
    } catch (const std::exception& err) {
        EpisodeResult result;
        result.aborted = true;
        result.abort_reason = err.what();
        result.report.aborted = true;
        return result;
    }
    SocketNavigatorPort navigator(std::move(*connection), clock);
    if (cfg.mode == RunMode::Blocking) {
        return run_blocking_episode(navigator, controller, cfg, clock);
    }
    EpisodeResult result;
    {
        ThreadedRefreshChannel channel(navigator, clock, cfg.refresh_dispatch_delay);
        result = run_live_episode(channel, controller, cfg, clock);
        // Unblock the worker if a refresh is still in flight (e.g. episode
        // ended through the fallback ladder) so the channel can join.
        navigator.shutdown();
    }
    return result;
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& text) {
    auto colon = text.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size()) {
        throw std::invalid_argument("endpoint must look like host:port, got: " + text);
    }
    const std::string host = text.substr(0, colon);
    const int port = std::stoi(text.substr(colon + 1));
    if (port < 1 || port > 65535) {
        throw std::invalid_argument("port out of range: " + text.substr(colon + 1));
    }
    return {host, static_cast<std::uint16_t>(port)};
}

}  // namespace guardrun::net
