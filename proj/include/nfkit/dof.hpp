// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef NFKIT_DOF_HPP
#define NFKIT_DOF_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "channel.hpp"
#include "geometry.hpp"

namespace nfkit {

// Singular values of H in descending order, computed from the Hermitian
// Gram matrix on the smaller dimension (the sweeps here pair a small RX
// with a very wide TX, so this stays cheap and exact for energy purposes).
inline Eigen::VectorXd singular_values(const ChannelMatrix &h) {
    const bool rows_smaller = h.rows() <= h.cols();
    const Eigen::MatrixXcd gram =
        rows_smaller ? (h * h.adjoint()).eval() : (h.adjoint() * h).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = eig.eigenvalues(); // ascending
    Eigen::VectorXd sv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        sv[i] = std::sqrt(std::max(ev[ev.size() - 1 - i], 0.0));
    return sv;
}

// Smallest k whose leading singular values capture a (1 - energy_loss)
// fraction of the total squared singular value energy.
inline int effective_dof_from_singular_values(const Eigen::VectorXd &sv, double energy_loss) {
    require_arg(energy_loss > 0.0 && energy_loss < 1.0,
                "effective_dof: energy_loss must lie in (0, 1)");
    const double total = sv.squaredNorm();
    require_arg(total > 0.0, "effective_dof: zero matrix");
    const double target = (1.0 - energy_loss) * total;
    double cumulative = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        cumulative += sv[i] * sv[i];
        if (cumulative >= target)
            return static_cast<int>(i) + 1;
    }
    return static_cast<int>(sv.size());
}

inline int effective_dof(const ChannelMatrix &h, double energy_loss) {
    return effective_dof_from_singular_values(singular_values(h), energy_loss);
}

enum class SweepVariable { distance_m, aperture_m };

struct DofSweepPoint {
    double value = 0.0;
    int dof = 0;
    Eigen::VectorXd singular_values; // descending
};

struct DofSweepResult {
    SweepVariable variable = SweepVariable::distance_m;
    std::vector<DofSweepPoint> points;
};

namespace detail {

// RX center displaced from the TX reference by `distance` along the bearing
// making `rx_angle` with the TX boresight, in the (normal, axis) plane; the
// RX element axis stays parallel to the TX axis.
inline ArrayGeometry place_rx(const ArrayGeometry &tx, const ArrayGeometry &rx, double distance,
                              double rx_angle) {
    return translated(rx, point_at(tx, rx_angle, distance));
}

} // namespace detail

// Effective DoF of the LoS channel against the TX-RX separation.
inline DofSweepResult dof_vs_distance(const ArrayGeometry &tx, const ArrayGeometry &rx,
                                      double wavelength_m, const std::vector<double> &distances,
                                      double rx_angle = 0.0, double energy_loss = 0.01,
                                      AmplitudeModel amplitude = AmplitudeModel::free_space) {
    require_arg(rx_angle >= 0.0 && rx_angle < pi / 2.0,
                "dof_vs_distance: angle must lie in [0, pi/2)");
    DofSweepResult result;
    result.variable = SweepVariable::distance_m;
    result.points.reserve(distances.size());
    for (double d : distances) {
        require_arg(d > 0.0, "dof_vs_distance: distances must be positive");
        const ChannelMatrix h =
            los_mimo_channel(tx, detail::place_rx(tx, rx, d, rx_angle), wavelength_m, amplitude);
        DofSweepPoint p;
        p.value = d;
        p.singular_values = singular_values(h);
        p.dof = effective_dof_from_singular_values(p.singular_values, energy_loss);
        result.points.push_back(std::move(p));
    }
    return result;
}

// Effective DoF against the TX aperture: one half-wavelength ULA per entry
// of the element-count grid, RX held at a fixed distance and bearing.
inline DofSweepResult dof_vs_aperture(const std::vector<std::size_t> &tx_element_grid,
                                      const ArrayGeometry &rx, double wavelength_m,
                                      double distance, double rx_angle = 0.0,
                                      double energy_loss = 0.01,
                                      AmplitudeModel amplitude = AmplitudeModel::free_space) {
    require_arg(distance > 0.0, "dof_vs_aperture: distance must be positive");
    DofSweepResult result;
    result.variable = SweepVariable::aperture_m;
    result.points.reserve(tx_element_grid.size());
    for (std::size_t n : tx_element_grid) {
        require_arg(n >= 1, "dof_vs_aperture: element counts must be positive");
        const ArrayGeometry tx = make_ula(n, wavelength_m / 2.0, Vec3::Zero(), rx.axis, rx.normal);
        const ChannelMatrix h = los_mimo_channel(
            tx, detail::place_rx(tx, rx, distance, rx_angle), wavelength_m, amplitude);
        DofSweepPoint p;
        p.value = tx.aperture_m;
        p.singular_values = singular_values(h);
        p.dof = effective_dof_from_singular_values(p.singular_values, energy_loss);
        result.points.push_back(std::move(p));
    }
    return result;
}

// Largest separation at which the effective DoF still reaches min_dof:
// a logarithmic scan over [lo, hi] followed by bisection of the transition
// to 1 percent distance resolution. DoF is non-increasing in distance, so
// the transition is unique up to grid jitter.
inline double dof_threshold_distance(const ArrayGeometry &tx, const ArrayGeometry &rx,
                                     double wavelength_m, int min_dof, double lo, double hi,
                                     double rx_angle = 0.0, double energy_loss = 0.01,
                                     AmplitudeModel amplitude = AmplitudeModel::free_space,
                                     std::size_t grid_points = 200) {
    require_arg(lo > 0.0 && hi > lo, "dof_threshold_distance: invalid bracket");
    auto dof_at = [&](double d) {
        return effective_dof(
            los_mimo_channel(tx, detail::place_rx(tx, rx, d, rx_angle), wavelength_m, amplitude),
            energy_loss);
    };
    const double ratio = std::log(hi / lo);
    double last_hit = -1.0, first_miss = -1.0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double d = lo * std::exp(ratio * static_cast<double>(i) /
                                       static_cast<double>(grid_points - 1));
        if (dof_at(d) >= min_dof)
            last_hit = d;
        else if (last_hit > 0.0) {
            first_miss = d;
            break;
        }
    }
    if (last_hit < 0.0)
        return 0.0; // never reached
    if (first_miss < 0.0)
        return hi; // still holding at the upper end
    double a = last_hit, b = first_miss;
    while ((b - a) / a > 0.01) {
        const double mid = std::sqrt(a * b);
        if (dof_at(mid) >= min_dof)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

} // namespace nfkit

#endif
