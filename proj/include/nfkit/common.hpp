// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef NFKIT_COMMON_HPP
#define NFKIT_COMMON_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace nfkit {

inline constexpr double speed_of_light_mps = 299792458.0;
inline constexpr double pi = 3.141592653589793238462643383279502884;

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Complex = std::complex<double>;

// Per-element complex baseband gains of one array.
using ChannelVector = Eigen::VectorXcd;

// N_rx x N_tx complex baseband gains between two arrays.
using ChannelMatrix = Eigen::MatrixXcd;

// Thrown when an iterative numerical procedure cannot continue
// (rank-deficient least squares, singular normal equations).
class numerical_error : public std::runtime_error {
  public:
    numerical_error(const std::string &what, int iteration)
        : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
          iteration_(iteration) {}

    int iteration() const noexcept { return iteration_; }

  private:
    int iteration_;
};

inline void require_arg(bool condition, const char *message) {
    if (!condition)
        throw std::invalid_argument(message);
}

// dB floor used wherever a zero amplitude would map to -infinity.
inline constexpr double db_floor = -300.0;

inline double amplitude_db(double amplitude) {
    if (!(amplitude > 0.0))
        return db_floor;
    const double v = 20.0 * std::log10(amplitude);
    return v < db_floor ? db_floor : v;
}

} // namespace nfkit

#endif
