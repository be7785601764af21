// SPDX-License-Identifier: Apache-2.0
//
// mimo-manifold: array-independent MIMO channel models via manifold decomposition
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

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>

#include "mimo/core.hpp"

// Counter-based random numbers. A draw is a pure function of (key, counter), so
// realizations generated in parallel are identical to the serial result.
namespace mimo::rng
{

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t hash_label(std::string_view label) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label)
    {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Stage seeds are derived from the root seed by hashing a stage label and an index.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index = 0) noexcept
{
    return splitmix64(splitmix64(seed ^ hash_label(label)) + splitmix64(index + 0x632be59bd9b4e019ULL));
}

class CounterRng
{
  public:
    constexpr explicit CounterRng(std::uint64_t key) noexcept : key_(splitmix64(key)) {}

    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept
    {
        return splitmix64(key_ ^ splitmix64(counter));
    }

    // Uniform on (0, 1].
    double uniform(std::uint64_t counter) const noexcept
    {
        return (static_cast<double>(bits(counter) >> 11) + 1.0) * 0x1.0p-53;
    }

    // Two independent standard normals via Box-Muller on counters 2c and 2c+1.
    std::pair<double, double> normal_pair(std::uint64_t counter) const noexcept
    {
        const double u1 = uniform(2 * counter);
        const double u2 = uniform(2 * counter + 1);
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = kTwoPi * u2;
        return {rad * std::cos(ang), rad * std::sin(ang)};
    }

    // Circularly-symmetric complex Gaussian with unit variance.
    cd complex_normal(std::uint64_t counter) const noexcept
    {
        const auto [a, b] = normal_pair(counter);
        return {a * std::sqrt(0.5), b * std::sqrt(0.5)};
    }

  private:
    std::uint64_t key_;
};

// Sequential view over a CounterRng, for generators that consume a variable
// number of draws (scenario and path generation).
class Stream
{
  public:
    explicit Stream(std::uint64_t key) noexcept : rng_(key) {}

    double uniform() noexcept { return rng_.uniform(counter_++); }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * (1.0 - uniform()); }

    double normal() noexcept
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        const auto [a, b] = rng_.normal_pair(normal_counter_++ | (1ULL << 62));
        spare_ = b;
        has_spare_ = true;
        return a;
    }

    // Uniform integer on [lo, hi].
    int uniform_int(int lo, int hi) noexcept
    {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        const auto x = rng_.bits(counter_++);
        const auto hi_bits = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * span) >> 64);
        return lo + static_cast<int>(hi_bits);
    }

  private:
    CounterRng rng_;
    std::uint64_t counter_ = 0;
    std::uint64_t normal_counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace mimo::rng
