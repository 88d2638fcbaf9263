/*
   Copyright 2026 The da_guard Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace da_guard::rng {

/// SplitMix64 output function (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

class SplitMix64 {
  public:
    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
    constexpr std::uint64_t next() noexcept { return splitmix64_mix(state_ += kGoldenGamma); }

  private:
    std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman, Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256StarStar {
  public:
    using result_type = std::uint64_t;

    /// State filled from four SplitMix64 outputs, as recommended by the authors.
    explicit Xoshiro256StarStar(std::uint64_t seed) noexcept {
        SplitMix64 sm(seed);
        for (auto& w : s_) w = sm.next();
    }
    explicit constexpr Xoshiro256StarStar(const std::array<std::uint64_t, 4>& state) noexcept : s_(state) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept { return next(); }

    constexpr std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    __extension__ using u128 = unsigned __int128;

    /// Uniform integer in [0, bound) by Lemire's multiply-and-reject; bound > 0.
    std::uint64_t below(std::uint64_t bound) noexcept {
        std::uint64_t x = next();
        u128 m = static_cast<u128>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = next();
                m = static_cast<u128>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> s_;
};

/// Seed of the independent stream `index` under `master`:
/// mix(mix(master) + golden * (index + 1)).
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64_mix(splitmix64_mix(master) + kGoldenGamma * (index + 1));
}

}  // namespace da_guard::rng
