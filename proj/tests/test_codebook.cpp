// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <catch2/catch.hpp>

#include <algorithm>

#include "nfkit/codebook.hpp"

using namespace nfkit;

namespace {

constexpr double lambda_28ghz = speed_of_light_mps / 28e9;
constexpr double lambda_300ghz = speed_of_light_mps / 300e9;

// Exhaustive pairwise coherence of same-angle atoms (the far-field atom of
// each angle included).
double worst_same_angle_coherence(const Dictionary &dict) {
    double worst = 0.0;
    for (Eigen::Index a = 0; a < dict.size(); ++a)
        for (Eigen::Index b = a + 1; b < dict.size(); ++b) {
            if (dict.grid[static_cast<std::size_t>(a)].angle_rad !=
                dict.grid[static_cast<std::size_t>(b)].angle_rad)
                continue;
            worst = std::max(worst,
                             std::abs(dict.atoms.col(a).dot(dict.atoms.col(b))));
        }
    return worst;
}

} // namespace

TEST_CASE("fourier dictionary is a unitary steering basis") {
    const Dictionary one = fourier_dictionary(1);
    REQUIRE(one.size() == 1);
    REQUIRE(one.atoms(0, 0) == Complex(1.0, 0.0));

    const Dictionary dict = fourier_dictionary(4);
    const Eigen::MatrixXcd gram = dict.atoms.adjoint() * dict.atoms;
    REQUIRE((gram - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

    // far-field channel on a grid angle lights exactly one coefficient
    const Dictionary big = fourier_dictionary(64);
    const ChannelVector h = std::sqrt(64.0) * big.atoms.col(17);
    const Eigen::VectorXcd c = transform_coefficients(h, big);
    for (Eigen::Index m = 0; m < c.size(); ++m) {
        if (m == 17)
            REQUIRE(std::abs(c[m]) == Approx(std::sqrt(64.0)));
        else
            REQUIRE(std::abs(c[m]) < 1e-10);
    }

    REQUIRE_THROWS_AS(fourier_dictionary(0), std::invalid_argument);
}

TEST_CASE("polar dictionary satisfies its grid invariants") {
    const ArrayGeometry g = make_ula(64, lambda_28ghz / 2.0);
    const Dictionary dict = polar_dictionary(g, lambda_28ghz, 1.2, 64);
    const double fresnel = fresnel_distance(g.aperture_m, lambda_28ghz);

    // unit atom norms
    for (Eigen::Index m = 0; m < dict.size(); ++m)
        REQUIRE(std::abs(dict.atoms.col(m).norm() - 1.0) < 1e-10);

    // per angle: leading far-field atom, strictly decreasing finite rings >= fresnel
    std::size_t m = 0;
    std::size_t angles_seen = 0;
    while (m < dict.grid.size()) {
        REQUIRE(std::isinf(dict.grid[m].distance_m));
        const double angle = dict.grid[m].angle_rad;
        double previous = dict.grid[m].distance_m;
        ++m;
        ++angles_seen;
        while (m < dict.grid.size() && !std::isinf(dict.grid[m].distance_m)) {
            REQUIRE(dict.grid[m].angle_rad == angle);
            REQUIRE(dict.grid[m].distance_m < previous);
            REQUIRE(dict.grid[m].distance_m >= fresnel);
            previous = dict.grid[m].distance_m;
            ++m;
        }
    }
    REQUIRE(angles_seen == 64);

    // on-grid channel matches its own atom perfectly
    int probed = 0;
    for (std::size_t probe = 0; probe < dict.grid.size() && probed < 3; ++probe) {
        if (std::isinf(dict.grid[probe].distance_m))
            continue;
        ++probed;
        const ChannelVector h = nearfield_steering(
            g, point_at(g, dict.grid[probe].angle_rad, dict.grid[probe].distance_m),
            lambda_28ghz);
        const double corr = std::abs(dict.atoms.col(static_cast<Eigen::Index>(probe)).dot(h)) /
                            h.norm();
        REQUIRE(corr == Approx(1.0).epsilon(1e-12));
    }
    REQUIRE(probed == 3);

    REQUIRE_THROWS_AS(polar_dictionary(make_upa(4, 4, 0.01), lambda_28ghz),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(polar_dictionary(g, lambda_28ghz, -1.0), std::invalid_argument);
}

TEST_CASE("ring spacing parameter trades coherence for grid size") {
    const ArrayGeometry g = make_ula(64, lambda_28ghz / 2.0);
    double previous = 1.0;
    for (double beta : {1.0, 1.5, 2.0}) {
        const double coherence =
            worst_same_angle_coherence(polar_dictionary(g, lambda_28ghz, beta, 16));
        REQUIRE(coherence < previous);
        previous = coherence;
    }
}

TEST_CASE("polar atoms concentrate near-field energy better than Fourier") {
    const ArrayGeometry g = make_ula(512, lambda_300ghz / 2.0);
    const Dictionary polar = polar_dictionary(g, lambda_300ghz, 1.2, 512);
    const Dictionary fourier = fourier_dictionary(512);
    for (double angle_deg : {-30.0, 0.0, 30.0}) {
        const ChannelVector h =
            nearfield_steering(g, point_at(g, angle_deg * pi / 180.0, 3.0), lambda_300ghz);
        const double top_polar =
            transform_coefficients(h, polar).cwiseAbs2().maxCoeff() / h.squaredNorm();
        const double top_fourier =
            transform_coefficients(h, fourier).cwiseAbs2().maxCoeff() / h.squaredNorm();
        REQUIRE(top_polar > top_fourier);
    }
}

TEST_CASE("transform coefficients conserve energy and spread near-field paths") {
    const Dictionary dict = fourier_dictionary(128);
    // indicator response
    const ChannelVector atom = dict.atoms.col(40);
    const Eigen::VectorXcd c = transform_coefficients(atom, dict);
    REQUIRE(std::abs(c[40]) == Approx(1.0));
    REQUIRE(c.cwiseAbs().sum() == Approx(1.0).margin(1e-9));

    // unitary energy conservation
    const ArrayGeometry g = make_ula(128, lambda_28ghz / 2.0);
    const ChannelVector h = nearfield_steering(g, point_at(g, 0.3, 4.0), lambda_28ghz);
    REQUIRE(transform_coefficients(h, dict).squaredNorm() ==
            Approx(h.squaredNorm()).epsilon(1e-10));

    REQUIRE_THROWS_AS(transform_coefficients(h, fourier_dictionary(64)),
                      std::invalid_argument);

    // sort-and-accumulate oracle: a 3 m source needs many Fourier atoms
    const ArrayGeometry big = make_ula(1024, lambda_28ghz / 2.0);
    const ChannelVector spread = nearfield_steering(big, point_at(big, 0.0, 3.0), lambda_28ghz);
    Eigen::VectorXd energies =
        transform_coefficients(spread, fourier_dictionary(1024)).cwiseAbs2();
    std::sort(energies.data(), energies.data() + energies.size(), std::greater<double>());
    const double total = energies.sum();
    double captured = 0.0;
    int needed = 0;
    while (captured < 0.95 * total)
        captured += energies[needed++];
    REQUIRE(needed >= 10);
}

TEST_CASE("orthogonal matching pursuit recovers on-grid channels") {
    const double lambda = lambda_300ghz;
    const ArrayGeometry g = make_ula(256, lambda / 2.0);
    const Dictionary polar = polar_dictionary(g, lambda, 1.2, 256);
    const Dictionary fourier = fourier_dictionary(256);
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(256, 256);

    // 1-sparse exact recovery
    {
        const Eigen::Index atom = 700 % polar.size();
        const Eigen::VectorXcd y = Complex(0.8, -0.2) * polar.atoms.col(atom);
        const SparseEstimate est = omp_estimate(y, identity, polar, 1);
        REQUIRE(est.support.size() == 1);
        REQUIRE(est.support[0] == atom);
        REQUIRE(nmse_db(est.reconstructed, y) < -100.0);
    }

    // 3-path on-grid channel: polar succeeds, Fourier trails by 10 dB or more
    Eigen::Index a1 = -1, a2 = -1, a3 = -1;
    for (Eigen::Index m = 0; m < polar.size(); ++m) {
        const auto &label = polar.grid[static_cast<std::size_t>(m)];
        if (std::isinf(label.distance_m))
            continue;
        if (a1 < 0 && std::abs(label.angle_rad + pi / 6.0) < 0.02)
            a1 = m;
        if (a2 < 0 && std::abs(label.angle_rad) < 0.01)
            a2 = m;
        if (a3 < 0 && std::abs(label.angle_rad - pi / 4.0) < 0.02)
            a3 = m;
    }
    REQUIRE(a1 >= 0);
    REQUIRE(a2 >= 0);
    REQUIRE(a3 >= 0);
    const Eigen::VectorXcd y = Complex(1.0, 0.0) * polar.atoms.col(a1) +
                               Complex(0.3, 0.6) * polar.atoms.col(a2) +
                               Complex(-0.5, 0.2) * polar.atoms.col(a3);
    const double err_polar = nmse_db(omp_estimate(y, identity, polar, 3).reconstructed, y);
    const double err_fourier = nmse_db(omp_estimate(y, identity, fourier, 3).reconstructed, y);
    REQUIRE(err_polar < -30.0);
    REQUIRE(err_fourier >= err_polar + 10.0);

    // residual norm is non-increasing as the support grows
    double previous = y.norm();
    for (std::size_t k = 1; k <= 6; ++k) {
        const SparseEstimate est = omp_estimate(y, identity, polar, k);
        Eigen::VectorXcd residual = y;
        for (std::size_t i = 0; i < est.support.size(); ++i)
            residual -= est.coefficients[static_cast<Eigen::Index>(i)] *
                        polar.atoms.col(est.support[i]);
        REQUIRE(residual.norm() <= previous * (1.0 + 1e-12));
        previous = residual.norm();
    }
}

TEST_CASE("full-sparsity OMP reconstructs anything in a unitary span") {
    const Dictionary dict = fourier_dictionary(8);
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(8, 8);
    Eigen::VectorXcd y(8);
    for (Eigen::Index n = 0; n < 8; ++n)
        y[n] = Complex(std::sin(1.3 * static_cast<double>(n) + 0.4),
                       std::cos(0.7 * static_cast<double>(n)));
    const SparseEstimate est = omp_estimate(y, identity, dict, 8, 1e-13);
    REQUIRE((est.reconstructed - y).norm() / y.norm() < 1e-10);
}

TEST_CASE("OMP reports degenerate least squares as a numerical failure") {
    // two numerically dependent atoms: the second pick makes the refit singular
    Dictionary dict;
    dict.kind = DictionaryKind::fourier;
    dict.atoms.resize(2, 2);
    dict.atoms.col(0) = Eigen::Vector2cd(1.0, 0.0);
    Eigen::Vector2cd nearly = Eigen::Vector2cd(1.0, 1e-16);
    dict.atoms.col(1) = nearly.normalized();
    dict.grid = {{0.0, 1.0}, {0.0, 2.0}};

    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(2, 2);
    const Eigen::VectorXcd y(Eigen::Vector2cd(1.0, 0.3));
    try {
        omp_estimate(y, identity, dict, 2);
        FAIL("expected numerical_error");
    } catch (const numerical_error &e) {
        REQUIRE(e.iteration() == 1);
    }

    REQUIRE_THROWS_AS(omp_estimate(y, identity, dict, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(
        omp_estimate(Eigen::VectorXcd::Zero(2), identity, dict, 1), std::invalid_argument);
}
