// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef NFKIT_POSITIONING_HPP
#define NFKIT_POSITIONING_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "geometry.hpp"
#include "rng.hpp"

namespace nfkit {

// Anchor array for time-of-arrival ranging. The array reference point is
// the anchor position; positioning works in the z = 0 plane.
struct AccessPoint {
    ArrayGeometry geometry;
    Vec3 anchor_position = Vec3::Zero();
};

inline AccessPoint make_access_point(const Vec2 &center, bool along_x, std::size_t n_elements,
                                     double wavelength_m) {
    const Vec3 c(center.x(), center.y(), 0.0);
    const Vec3 axis = along_x ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 normal = along_x ? Vec3::UnitY() : Vec3::UnitX();
    return {make_ula(n_elements, wavelength_m / 2.0, c, axis, normal), c};
}

struct RangingSample {
    int ap_index = 0;
    int element_index = 0;
    double measured_range_m = 0.0; // may go negative under heavy noise
};

// One noisy range per (access point, element): exact geometric distance
// plus independent zero-mean Gaussian error of the given variance. Draws
// are counter-based, so the output is bit-identical for a fixed seed
// regardless of evaluation order.
inline std::vector<RangingSample> simulate_ranges(const Vec2 &user,
                                                  const std::vector<AccessPoint> &aps,
                                                  double noise_variance_m2, std::uint64_t seed) {
    require_arg(noise_variance_m2 >= 0.0, "simulate_ranges: variance must be non-negative");
    const double sigma = std::sqrt(noise_variance_m2);
    const Vec3 user3(user.x(), user.y(), 0.0);

    std::vector<RangingSample> samples;
    std::uint64_t counter = 0;
    for (std::size_t a = 0; a < aps.size(); ++a)
        for (std::size_t e = 0; e < aps[a].geometry.size(); ++e) {
            const double range = (user3 - aps[a].geometry.element_positions[e]).norm();
            const double noise = sigma > 0.0 ? sigma * gaussian_at(seed, counter) : 0.0;
            ++counter;
            samples.push_back({static_cast<int>(a), static_cast<int>(e), range + noise});
        }
    return samples;
}

namespace detail {

inline Vec2 element_position_2d(const std::vector<AccessPoint> &aps, const RangingSample &s) {
    const auto &ap = aps.at(static_cast<std::size_t>(s.ap_index));
    const Vec3 &p = ap.geometry.element_positions.at(static_cast<std::size_t>(s.element_index));
    return {p.x(), p.y()};
}

inline void check_solvable(const std::vector<RangingSample> &samples,
                           const std::vector<AccessPoint> &aps) {
    require_arg(samples.size() >= 3, "position solve: need at least three samples");
    int first_ap = samples.front().ap_index;
    bool two_anchors = false;
    for (const auto &s : samples)
        if (s.ap_index != first_ap) {
            two_anchors = true;
            break;
        }
    require_arg(two_anchors && aps.size() >= 2,
                "position solve: need samples from at least two anchors");
}

} // namespace detail

struct LsSolution {
    Vec2 position = Vec2::Zero();
    bool converged = false;
    int iterations = 0;
};

// Gauss-Newton minimisation of sum (rho_i - ||p - q_i||)^2 over the 2D
// position p. Converged when the step norm drops below tol_m; otherwise the
// last iterate is returned with converged = false.
inline LsSolution ls_position(const std::vector<RangingSample> &samples,
                              const std::vector<AccessPoint> &aps, const Vec2 &initial_guess,
                              int max_iters = 50, double tol_m = 1e-9) {
    detail::check_solvable(samples, aps);
    require_arg(max_iters >= 1, "ls_position: max_iters must be at least one");

    LsSolution sol;
    sol.position = initial_guess;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
        Vec2 jtr = Vec2::Zero();
        for (const auto &s : samples) {
            const Vec2 q = detail::element_position_2d(aps, s);
            const Vec2 diff = sol.position - q;
            const double dist = std::max(diff.norm(), 1e-12);
            const Vec2 grad = diff / dist; // d||p - q|| / dp
            const double residual = s.measured_range_m - dist;
            // residual derivative is -grad; normal equations accumulate J^T J and J^T r
            jtj += grad * grad.transpose();
            jtr += -grad * residual;
        }
        const double det = jtj.determinant();
        if (!(std::abs(det) > 1e-12 * jtj.trace() * jtj.trace()))
            throw numerical_error("ls_position: singular normal equations", it);
        const Vec2 step = jtj.ldlt().solve(-jtr);
        sol.position += step;
        sol.iterations = it + 1;
        if (step.norm() < tol_m) {
            sol.converged = true;
            break;
        }
    }
    return sol;
}

// Closed-form squared-range least squares: each range equation
// rho_i^2 = ||p||^2 - 2 q_i . p + ||q_i||^2 is linear in (p, ||p||^2), so a
// single QR solve yields the position without iteration or initial guess.
inline Vec2 linear_ls_position(const std::vector<RangingSample> &samples,
                               const std::vector<AccessPoint> &aps) {
    detail::check_solvable(samples, aps);
    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd m(n, 3);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec2 q = detail::element_position_2d(aps, samples[static_cast<std::size_t>(i)]);
        m(i, 0) = -2.0 * q.x();
        m(i, 1) = -2.0 * q.y();
        m(i, 2) = 1.0;
        const double rho = samples[static_cast<std::size_t>(i)].measured_range_m;
        b[i] = rho * rho - q.squaredNorm();
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    if (qr.rank() < 3)
        throw numerical_error("linear_ls_position: rank-deficient anchor layout", 0);
    const Eigen::Vector3d z = qr.solve(b);
    return {z[0], z[1]};
}

// Circular error probability: median radial distance of the estimates about
// their mean (lower median for even counts), i.e. the smallest radius
// containing at least half of the estimates.
inline double cep(const std::vector<Vec2> &estimates) {
    require_arg(!estimates.empty(), "cep: need at least one estimate");
    Vec2 mean = Vec2::Zero();
    for (const auto &p : estimates)
        mean += p;
    mean /= static_cast<double>(estimates.size());

    std::vector<double> radii;
    radii.reserve(estimates.size());
    for (const auto &p : estimates)
        radii.push_back((p - mean).norm());
    std::sort(radii.begin(), radii.end());
    return radii[(radii.size() + 1) / 2 - 1];
}

enum class PositionSolver { linear, gauss_newton };

struct PositioningResult {
    std::vector<Vec2> estimates;
    double cep_m = 0.0;
    Vec2 mean_estimate = Vec2::Zero();
};

// Monte Carlo localisation run: per-trial seeds are derived from the master
// seed by a counter mix, so the result is independent of execution order
// and bit-identical across runs.
inline PositioningResult positioning_experiment(const Vec2 &user,
                                                const std::vector<AccessPoint> &aps,
                                                double noise_variance_m2, int trials,
                                                std::uint64_t master_seed,
                                                PositionSolver solver = PositionSolver::linear) {
    require_arg(trials >= 1, "positioning_experiment: need at least one trial");

    Vec2 centroid = Vec2::Zero();
    for (const auto &ap : aps)
        centroid += Vec2(ap.anchor_position.x(), ap.anchor_position.y());
    centroid /= static_cast<double>(aps.size());

    PositioningResult result;
    result.estimates.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = mix_seed(master_seed, static_cast<std::uint64_t>(t));
        const auto samples = simulate_ranges(user, aps, noise_variance_m2, trial_seed);
        Vec2 estimate;
        try {
            estimate = solver == PositionSolver::linear
                           ? linear_ls_position(samples, aps)
                           : ls_position(samples, aps, centroid).position;
        } catch (const numerical_error &) {
            // one retry from a deterministically perturbed guess
            const Vec2 perturbed =
                centroid + Vec2(gaussian_at(trial_seed, 1u << 20), gaussian_at(trial_seed, (1u << 20) + 1));
            try {
                estimate = ls_position(samples, aps, perturbed).position;
            } catch (const numerical_error &e) {
                throw numerical_error(std::string(e.what()) + " in trial " + std::to_string(t),
                                      e.iteration());
            }
        }
        result.estimates.push_back(estimate);
    }

    Vec2 mean = Vec2::Zero();
    for (const auto &p : result.estimates)
        mean += p;
    result.mean_estimate = mean / static_cast<double>(result.estimates.size());
    result.cep_m = cep(result.estimates);
    return result;
}

} // namespace nfkit

#endif
