// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef NFKIT_CODEBOOK_HPP
#define NFKIT_CODEBOOK_HPP

#include <cmath>
#include <limits>
#include <vector>

#include "channel.hpp"
#include "geometry.hpp"

namespace nfkit {

enum class DictionaryKind { fourier, polar };

struct AtomLabel {
    double angle_rad = 0.0;
    double distance_m = std::numeric_limits<double>::infinity(); // inf for far-field atoms
};

// Codebook of unit-norm steering atoms with per-column (angle, distance)
// grid labels.
struct Dictionary {
    Eigen::MatrixXcd atoms; // N x M, unit-norm columns
    std::vector<AtomLabel> grid;
    DictionaryKind kind = DictionaryKind::fourier;

    Eigen::Index n_elements() const { return atoms.rows(); }
    Eigen::Index size() const { return atoms.cols(); }
};

// Angle grid uniform in sine: s_k = (2k - M + 1) / M.
inline double sine_grid_point(std::size_t k, std::size_t m) {
    return (2.0 * static_cast<double>(k) - static_cast<double>(m) + 1.0) /
           static_cast<double>(m);
}

// Unitary DFT-style dictionary of far-field steering vectors for a
// half-wavelength ULA, sampled uniformly in sine.
inline Dictionary fourier_dictionary(std::size_t n_elements) {
    require_arg(n_elements >= 1, "fourier_dictionary: need at least one element");
    const auto n = static_cast<Eigen::Index>(n_elements);

    Dictionary dict;
    dict.kind = DictionaryKind::fourier;
    dict.atoms.resize(n, n);
    dict.grid.reserve(n_elements);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_elements));
    const double half = (static_cast<double>(n_elements) - 1.0) / 2.0;
    for (Eigen::Index kcol = 0; kcol < n; ++kcol) {
        const double s = sine_grid_point(static_cast<std::size_t>(kcol), n_elements);
        for (Eigen::Index row = 0; row < n; ++row)
            dict.atoms(row, kcol) =
                std::polar(scale, pi * (static_cast<double>(row) - half) * s);
        dict.grid.push_back({std::asin(s), std::numeric_limits<double>::infinity()});
    }
    return dict;
}

// Polar-domain dictionary: per grid angle, distance rings sampled uniformly
// in 1/r,
//   r_{k,s} = Z(theta_k) / (beta^2 * s),  Z(theta) = N^2 d^2 (1 - sin^2) / (2 lambda),
// truncated below the Fresnel distance, plus one far-field atom per angle.
// Larger beta spreads the rings further apart in 1/r, lowering the mutual
// coherence of same-angle atoms at the cost of a coarser distance grid.
inline Dictionary polar_dictionary(const ArrayGeometry &g, double wavelength_m, double beta = 1.2,
                                   std::size_t n_angles = 0) {
    require_arg(g.kind == ArrayKind::ula, "polar_dictionary: defined for ULA geometries");
    require_arg(beta > 0.0, "polar_dictionary: beta must be positive");
    require_arg(wavelength_m > 0.0, "polar_dictionary: wavelength must be positive");
    if (n_angles == 0)
        n_angles = g.size();
    require_arg(n_angles >= 1, "polar_dictionary: need at least one angle");

    const double n = static_cast<double>(g.size());
    const double d = g.spacing_m;
    const double fresnel = fresnel_distance(g.aperture_m, wavelength_m);
    const double scale = 1.0 / std::sqrt(n);

    std::vector<Eigen::VectorXcd> atoms;
    Dictionary dict;
    dict.kind = DictionaryKind::polar;
    for (std::size_t k = 0; k < n_angles; ++k) {
        const double s = sine_grid_point(k, n_angles);
        const double theta = std::asin(s);
        const Vec3 bearing = std::cos(theta) * g.normal + std::sin(theta) * g.axis;
        atoms.push_back(scale * farfield_steering(g, bearing, wavelength_m));
        dict.grid.push_back({theta, std::numeric_limits<double>::infinity()});

        const double z = n * n * d * d * (1.0 - s * s) / (2.0 * wavelength_m);
        for (std::size_t ring = 1;; ++ring) {
            const double r = z / (beta * beta * static_cast<double>(ring));
            if (r < fresnel || r <= 0.0)
                break;
            atoms.push_back(scale *
                            nearfield_steering(g, point_at(g, theta, r), wavelength_m,
                                               AmplitudeModel::unit));
            dict.grid.push_back({theta, r});
        }
    }

    dict.atoms.resize(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(atoms.size()));
    for (std::size_t m = 0; m < atoms.size(); ++m)
        dict.atoms.col(static_cast<Eigen::Index>(m)) = atoms[m];
    return dict;
}

// Conjugate inner products of every atom with the channel.
inline Eigen::VectorXcd transform_coefficients(const ChannelVector &h, const Dictionary &dict) {
    require_arg(h.size() == dict.n_elements(), "transform_coefficients: dimension mismatch");
    return dict.atoms.adjoint() * h;
}

struct SparseEstimate {
    std::vector<Eigen::Index> support;
    Eigen::VectorXcd coefficients; // aligned with support
    ChannelVector reconstructed;
};

// Orthogonal matching pursuit over the composite matrix sensing * atoms:
// greedy max-correlation atom selection with a least-squares refit on the
// support each iteration. Stops after `sparsity` atoms or once the residual
// drops below residual_tol * ||y||.
inline SparseEstimate omp_estimate(const Eigen::VectorXcd &y, const Eigen::MatrixXcd &sensing,
                                   const Dictionary &dict, std::size_t sparsity,
                                   double residual_tol = 0.0) {
    require_arg(sparsity >= 1, "omp_estimate: sparsity must be at least one");
    require_arg(sensing.cols() == dict.n_elements(), "omp_estimate: sensing/dictionary mismatch");
    require_arg(sensing.rows() == y.size(), "omp_estimate: sensing/measurement mismatch");
    require_arg(static_cast<Eigen::Index>(sparsity) <= sensing.rows(),
                "omp_estimate: more atoms requested than measurements");

    const Eigen::MatrixXcd composite = sensing * dict.atoms;
    const double y_norm = y.norm();
    require_arg(y_norm > 0.0, "omp_estimate: zero measurement vector");

    SparseEstimate est;
    Eigen::VectorXcd residual = y;
    std::vector<bool> used(static_cast<std::size_t>(composite.cols()), false);

    const std::size_t max_atoms = std::min<std::size_t>(sparsity,
                                                        static_cast<std::size_t>(composite.cols()));
    for (std::size_t it = 0; it < max_atoms; ++it) {
        const Eigen::VectorXcd corr = composite.adjoint() * residual;
        Eigen::Index best = -1;
        double best_mag = 0.0;
        for (Eigen::Index m = 0; m < corr.size(); ++m) {
            if (used[static_cast<std::size_t>(m)])
                continue;
            const double mag = std::abs(corr[m]);
            if (mag > best_mag) {
                best_mag = mag;
                best = m;
            }
        }
        if (best < 0 || best_mag == 0.0)
            break; // residual orthogonal to every remaining atom
        used[static_cast<std::size_t>(best)] = true;
        est.support.push_back(best);

        Eigen::MatrixXcd sub(composite.rows(), static_cast<Eigen::Index>(est.support.size()));
        for (std::size_t c = 0; c < est.support.size(); ++c)
            sub.col(static_cast<Eigen::Index>(c)) = composite.col(est.support[c]);
        Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(sub);
        if (qr.rank() < sub.cols())
            throw numerical_error("omp_estimate: rank-deficient support", static_cast<int>(it));
        est.coefficients = qr.solve(y);
        residual = y - sub * est.coefficients;
        if (residual.norm() <= residual_tol * y_norm)
            break;
    }

    est.reconstructed = ChannelVector::Zero(dict.n_elements());
    for (std::size_t c = 0; c < est.support.size(); ++c)
        est.reconstructed += est.coefficients[static_cast<Eigen::Index>(c)] *
                             dict.atoms.col(est.support[c]);
    return est;
}

// Normalised mean square error ||estimate - truth||^2 / ||truth||^2 in dB.
inline double nmse_db(const ChannelVector &estimate, const ChannelVector &truth) {
    require_arg(estimate.size() == truth.size(), "nmse_db: dimension mismatch");
    const double denom = truth.squaredNorm();
    require_arg(denom > 0.0, "nmse_db: zero reference channel");
    const double ratio = (estimate - truth).squaredNorm() / denom;
    return ratio > 0.0 ? 10.0 * std::log10(ratio) : 2.0 * db_floor;
}

} // namespace nfkit

#endif
