// SPDX-License-Identifier: Apache-2.0
//
// mmic: multipath intra-cluster statistics toolkit for mmWave channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MMIC_RNG_HPP
#define MMIC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace mmic {

// splitmix64 step; used to spread user seeds and to derive child streams.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from a root seed and a key path,
// e.g. derive_seed(seed, {k, restart}). Schedule-independent by design:
// the result depends only on (root, path).
constexpr std::uint64_t derive_seed(std::uint64_t root,
                                    std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(root);
    for (std::uint64_t w : path)
        h = mix64(h ^ w);
    return h;
}

// Seeded random stream with fully specified output. The engine is
// std::mt19937_64 (bit-exact per the standard); all variate transforms are
// implemented here rather than via std::*_distribution, whose algorithms
// are implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe to pass to log().
    double uniform01_open_low() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Unbiased integer on [0, n) by rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0)
            return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    // Standard normal via Box-Muller; consumes exactly two engine draws.
    double normal() {
        double u1 = uniform01_open_low();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    // Exponential with rate lambda (mean 1/lambda).
    double exponential(double lambda) { return -std::log1p(-uniform01()) / lambda; }

    double lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace mmic

#endif  // MMIC_RNG_HPP
