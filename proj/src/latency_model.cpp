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

#include "guardrun/latency_model.hpp"

#include <algorithm>
#include <sstream>

namespace guardrun {

LatencyModel LatencyModel::constant(double value) {
    LatencyModel m;
    m.kind = Kind::Constant;
    m.a = value;
    return m;
}

LatencyModel LatencyModel::uniform(double lo, double hi, std::uint64_t seed) {
    LatencyModel m;
    m.kind = Kind::Uniform;
    m.a = lo;
    m.b = hi;
    m.seed = seed;
    return m;
}

LatencyModel LatencyModel::gaussian(double mean, double stddev, std::uint64_t seed) {
    LatencyModel m;
    m.kind = Kind::Gaussian;
    m.a = mean;
    m.b = stddev;
    m.seed = seed;
    return m;
}

LatencyModel LatencyModel::replay(std::vector<double> samples) {
    LatencyModel m;
    m.kind = Kind::Trace;
    m.trace = std::move(samples);
    return m;
}

void LatencyModel::validate() const {
    switch (kind) {
        case Kind::Constant:
            if (a < 0.0) throw std::invalid_argument("constant model value must be >= 0");
            break;
        case Kind::Uniform:
            if (a < 0.0 || b < a) {
                throw std::invalid_argument("uniform model needs 0 <= lo <= hi");
            }
            break;
        case Kind::Gaussian:
            if (b < 0.0) throw std::invalid_argument("gaussian model stddev must be >= 0");
            break;
        case Kind::Trace:
            for (double v : trace) {
                if (v < 0.0) throw std::invalid_argument("trace model samples must be >= 0");
            }
            break;
    }
}

namespace {

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t used = 0;
        double v = std::stod(item, &used);
        if (used != item.size()) {
            throw std::invalid_argument("bad number in model spec: " + item);
        }
        values.push_back(v);
    }
    return values;
}

}  // namespace

LatencyModel LatencyModel::parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("model spec must look like kind:params, got: " + text);
    }
    std::string kind = text.substr(0, colon);
    std::vector<double> params = parse_numbers(text.substr(colon + 1));
    LatencyModel m;
    if (kind == "constant") {
        if (params.size() != 1) throw std::invalid_argument("constant takes one value");
        m = constant(params[0]);
    } else if (kind == "uniform") {
        if (params.size() != 2) throw std::invalid_argument("uniform takes lo,hi");
        m = uniform(params[0], params[1]);
    } else if (kind == "gaussian") {
        if (params.size() != 2) throw std::invalid_argument("gaussian takes mean,stddev");
        m = gaussian(params[0], params[1]);
    } else if (kind == "trace") {
        if (params.empty()) throw std::invalid_argument("trace needs at least one sample");
        m = replay(std::move(params));
    } else {
        throw std::invalid_argument("unknown model kind: " + kind);
    }
    m.validate();
    return m;
}

std::string LatencyModel::describe() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::Constant: out << "constant:" << a; break;
        case Kind::Uniform: out << "uniform:" << a << ',' << b; break;
        case Kind::Gaussian: out << "gaussian:" << a << ',' << b; break;
        case Kind::Trace: out << "trace[" << trace.size() << "]"; break;
    }
    return out.str();
}

LatencyStream::LatencyStream(const LatencyModel& model, std::uint64_t seed_override)
    : model_(model), rng_(seed_override) {
    model_.validate();
}

double LatencyStream::sample() {
    double value = 0.0;
    switch (model_.kind) {
        case LatencyModel::Kind::Constant:
            value = model_.a;
            break;
        case LatencyModel::Kind::Uniform:
            value = rng_.uniform(model_.a, model_.b);
            break;
        case LatencyModel::Kind::Gaussian:
            value = rng_.gaussian(model_.a, model_.b);
            break;
        case LatencyModel::Kind::Trace:
            if (position_ >= model_.trace.size()) {
                throw ScenarioUnderrunError("trace model exhausted after " +
                                            std::to_string(model_.trace.size()) + " samples");
            }
            value = model_.trace[position_];
            break;
    }
    ++position_;
    return std::max(0.0, value);
}

}  // namespace guardrun
