// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef NFKIT_RNG_HPP
#define NFKIT_RNG_HPP

#include <cmath>
#include <cstdint>

#include "common.hpp"

// Counter-based pseudo-random numbers. Every draw is a pure function of
// (seed, counter), so parallel and serial evaluation orders produce
// bit-identical results and no generator state has to be carried around.

namespace nfkit {

inline std::uint64_t splitmix64(std::uint64_t &state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t state = seed ^ (0xD1B54A32D192ED03ULL * (counter + 1));
    return splitmix64(state);
}

// Uniform double in (0, 1], 53-bit resolution.
inline double uniform_unit(std::uint64_t bits) {
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Standard normal draw, Box-Muller on two splitmix64 words.
inline double gaussian_at(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t state = mix_seed(seed, counter);
    const double u1 = uniform_unit(splitmix64(state));
    const double u2 = uniform_unit(splitmix64(state));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
}

inline double uniform_at(std::uint64_t seed, std::uint64_t counter) {
    std::uint64_t state = mix_seed(seed, counter);
    return uniform_unit(splitmix64(state));
}

} // namespace nfkit

#endif
