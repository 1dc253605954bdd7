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

#include <cmath>
#include <cstdint>

namespace guardrun {

/// Self-contained splitmix64 stream. The standard distributions are not
/// pinned across library implementations, so simulations draw uniform and
/// gaussian variates from this generator directly; identical seeds give
/// identical sample sequences everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    /// Standard normal via Box-Muller; the paired variate is discarded so the
    /// draw count per sample stays fixed.
    double gaussian(double mean, double stddev) {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) {
            u1 = uniform01();
        }
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * M_PI * u2);
    }

private:
    std::uint64_t state_;
};

/// Order-sensitive seed mixing for derived streams (scenario seed, model
/// seed, episode index, stream role).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    Rng rng(a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2)));
    return rng.next_u64();
}

}  // namespace guardrun
