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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "guardrun/rng.hpp"

namespace guardrun {

/// Raised when a Trace model runs out of recorded samples.
struct ScenarioUnderrunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Stochastic model for a latency or duration source. All sampled values are
/// clipped to [0, inf); identical seed and parameters give an identical
/// sample sequence.
struct LatencyModel {
    enum class Kind { Constant, Uniform, Gaussian, Trace };

    Kind kind = Kind::Constant;
    double a = 0.0;              // Constant value / Uniform lo / Gaussian mean
    double b = 0.0;              // Uniform hi / Gaussian stddev
    std::vector<double> trace;   // Trace samples, replayed in order
    std::uint64_t seed = 0;

    static LatencyModel constant(double value);
    static LatencyModel uniform(double lo, double hi, std::uint64_t seed = 0);
    static LatencyModel gaussian(double mean, double stddev, std::uint64_t seed = 0);
    static LatencyModel replay(std::vector<double> samples);

    void validate() const;

    /// Parses "constant:0.97", "uniform:0.1,0.2", "gaussian:0.97,0.05",
    /// "trace:0.1,0.2,0.3". Throws std::invalid_argument on anything else.
    static LatencyModel parse(const std::string& text);
    std::string describe() const;
};

/// Sampling state for one model: RNG position plus trace cursor.
class LatencyStream {
public:
    explicit LatencyStream(const LatencyModel& model, std::uint64_t seed_override);
    explicit LatencyStream(const LatencyModel& model) : LatencyStream(model, model.seed) {}

    double sample();

private:
    LatencyModel model_;
    Rng rng_;
    std::size_t position_ = 0;
};

inline double sample_latency(LatencyStream& stream) { return stream.sample(); }

}  // namespace guardrun
