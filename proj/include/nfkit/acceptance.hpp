// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef NFKIT_ACCEPTANCE_HPP
#define NFKIT_ACCEPTANCE_HPP

#include <chrono>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "beamfocus.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "dof.hpp"
#include "experiments.hpp"
#include "geometry.hpp"
#include "positioning.hpp"
#include "rng.hpp"

// End-to-end verification of the quantitative case studies this library
// reproduces. Each criterion pins its thresholds in code; `self-check` runs
// the reduced variant, the acceptance test binary runs the full one.

namespace nfkit::acceptance {

struct Options {
    int positioning_trials = 10000;
    std::size_t beamsplit_subcarriers = 129;
    std::size_t threshold_grid_points = 200;
    int cep_median_samples = 100000;
    int mrt_random_trials = 1000;

    static Options full() { return {}; }
    static Options reduced() {
        Options o;
        o.positioning_trials = 2000;
        o.beamsplit_subcarriers = 33;
        o.threshold_grid_points = 120;
        o.cep_median_samples = 30000;
        o.mrt_random_trials = 1000;
        return o;
    }
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double elapsed_s = 0.0;
    double budget_s = 0.0;
    std::string detail;
};

namespace detail {

class Reporter {
  public:
    void expect(bool ok, const std::string &what) {
        all_ok_ = all_ok_ && ok;
        if (!text_.empty())
            text_ += "; ";
        text_ += what + (ok ? " [ok]" : " [FAIL]");
    }
    bool all_ok() const { return all_ok_; }
    const std::string &text() const { return text_; }

  private:
    bool all_ok_ = true;
    std::string text_;
};

inline std::string num(double v) { return format_number(v); }

inline bool in_band(double v, double lo, double hi) { return v >= lo && v <= hi; }

inline std::string band_note(const std::string &label, double v, double lo, double hi) {
    return label + "=" + num(v) + " in [" + num(lo) + ", " + num(hi) + "]";
}

} // namespace detail

// 1. Closed-form field boundaries against the two headline distances:
//    a 1 m x 1 m panel at 28 GHz and the combined TX+RX aperture of the
//    300 GHz point-to-point layout.
inline CriterionResult criterion_boundaries(const Options &) {
    detail::Reporter rep;
    const double lambda28 = speed_of_light_mps / 28e9;
    const double r1 = rayleigh_distance(std::sqrt(2.0), lambda28);
    rep.expect(detail::in_band(r1, 371.0, 376.0),
               detail::band_note("rayleigh_1m_panel_28ghz_m", r1, 371.0, 376.0));

    const double lambda300 = speed_of_light_mps / 300e9;
    const double combined_aperture = (1023.0 + 15.0) * lambda300 / 2.0;
    const double r2 = rayleigh_distance(combined_aperture, lambda300);
    rep.expect(detail::in_band(r2, 533.0, 544.0),
               detail::band_note("rayleigh_combined_aperture_m", r2, 533.0, 544.0));

    return {1, "field-boundary anchors", rep.all_ok(), 0.0, 0.001, rep.text()};
}

// 2. The pi/8 phase-error criterion behind both closed forms: the linear
//    approximation peaks at the Rayleigh distance (boresight is the worst
//    bearing), the parabolic one at the Fresnel distance for the worst
//    off-boresight bearing.
inline CriterionResult criterion_phase_error(const Options &) {
    detail::Reporter rep;
    const double lambda = speed_of_light_mps / 28e9;
    const ArrayGeometry g = make_ula(256, lambda / 2.0);
    const FieldBoundaries b = field_boundaries(g, lambda);
    const double band_lo = pi / 8.0 * 0.85, band_hi = pi / 8.0 * 1.15;

    const double linear_err =
        max_phase_error(g, point_at(g, 0.0, b.rayleigh_m), lambda, TaylorOrder::linear);
    rep.expect(detail::in_band(linear_err, band_lo, band_hi),
               detail::band_note("linear_error_at_rayleigh_rad", linear_err, band_lo, band_hi));

    const double parabolic_err =
        worst_case_phase_error(g, b.fresnel_m, lambda, TaylorOrder::parabolic);
    rep.expect(
        detail::in_band(parabolic_err, band_lo, band_hi),
        detail::band_note("parabolic_error_at_fresnel_rad", parabolic_err, band_lo, band_hi));

    return {2, "phase-error consistency", rep.all_ok(), 0.0, 1.0, rep.text()};
}

// 3. Effective DoF of the 300 GHz LoS link (1024-element TX, 16-element RX)
//    against distance: 8 streams at 0.5 m, 1 at 30 m, and the 1-to-2
//    transition near 21.3 m.
inline CriterionResult criterion_dof_distance(const Options &opt) {
    detail::Reporter rep;
    const double lambda = speed_of_light_mps / 300e9;
    const ArrayGeometry tx = make_ula(1024, lambda / 2.0);
    const ArrayGeometry rx = make_ula(16, lambda / 2.0);

    const DofSweepResult sweep = dof_vs_distance(tx, rx, lambda, {0.5, 30.0});
    const int dof_half_meter = sweep.points[0].dof;
    const int dof_thirty = sweep.points[1].dof;
    rep.expect(dof_half_meter >= 7 && dof_half_meter <= 9,
               "dof_at_0p5m=" + std::to_string(dof_half_meter) + " in [7, 9]");
    rep.expect(dof_thirty == 1, "dof_at_30m=" + std::to_string(dof_thirty) + " == 1");

    const double boost = dof_threshold_distance(tx, rx, lambda, 2, 0.5, 538.0, 0.0, 0.01,
                                                AmplitudeModel::free_space,
                                                opt.threshold_grid_points);
    rep.expect(detail::in_band(boost, 18.1, 24.5),
               detail::band_note("rank_boost_distance_m", boost, 18.1, 24.5));

    return {3, "dof vs distance", rep.all_ok(), 0.0, 30.0, rep.text()};
}

// 4. Effective DoF against the TX aperture at 0.7 m for bearings
//    {0, pi/6, pi/3}: single-stream below 2 cm, at least 8 streams from
//    0.9 m up at every bearing, and no bearing beating boresight.
inline CriterionResult criterion_dof_aperture(const Options &) {
    detail::Reporter rep;
    const double lambda = speed_of_light_mps / 300e9;
    const ArrayGeometry rx = make_ula(16, lambda / 2.0);
    const std::vector<std::size_t> grid = {16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
    const std::vector<double> angles = {0.0, pi / 6.0, pi / 3.0};

    std::vector<DofSweepResult> sweeps;
    for (double a : angles)
        sweeps.push_back(dof_vs_aperture(grid, rx, lambda, 0.7, a));

    bool small_ok = true, large_ok = true, order_ok = true;
    std::ostringstream small_note, large_note, order_note;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double aperture = sweeps[0].points[i].value;
        for (std::size_t a = 0; a < angles.size(); ++a) {
            const int dof = sweeps[a].points[i].dof;
            if (aperture <= 0.02 && dof != 1) {
                small_ok = false;
                small_note << " n=" << grid[i] << ",angle=" << a << ",dof=" << dof;
            }
            if (aperture >= 0.9 && dof < 8) {
                large_ok = false;
                large_note << " n=" << grid[i] << ",angle=" << a << ",dof=" << dof;
            }
        }
        if (sweeps[2].points[i].dof > sweeps[0].points[i].dof) {
            order_ok = false;
            order_note << " n=" << grid[i] << ",pi/3=" << sweeps[2].points[i].dof
                       << ",boresight=" << sweeps[0].points[i].dof;
        }
    }
    rep.expect(small_ok, "dof==1 for every aperture <= 2 cm" + small_note.str());
    rep.expect(large_ok, "dof>=8 for every aperture >= 0.9 m at all bearings" + large_note.str());
    rep.expect(order_ok, "dof(pi/3) <= dof(0) at every sweep point" + order_note.str());

    return {4, "dof vs aperture", rep.all_ok(), 0.0, 60.0, rep.text()};
}

// 5. ToA localisation on the four-anchor square: circular error probability
//    for 64 and 1024 elements per anchor under 15 dB m^2 range noise.
inline CriterionResult criterion_positioning(const Options &opt) {
    detail::Reporter rep;
    const double lambda = speed_of_light_mps / 300e9;
    const double variance = std::pow(10.0, 1.5);
    const Vec2 user(3.0, 3.0);

    auto run = [&](std::size_t elements) {
        std::vector<AccessPoint> aps = {make_access_point({3.0, 0.0}, true, elements, lambda),
                                        make_access_point({6.0, 3.0}, false, elements, lambda),
                                        make_access_point({3.0, 6.0}, true, elements, lambda),
                                        make_access_point({0.0, 3.0}, false, elements, lambda)};
        return positioning_experiment(user, aps, variance, opt.positioning_trials, 1234,
                                      PositionSolver::linear);
    };

    const double cep_small = run(64).cep_m;
    const double cep_large = run(1024).cep_m;
    rep.expect(detail::in_band(cep_small, 0.77, 1.16),
               detail::band_note("cep_64_elements_m", cep_small, 0.77, 1.16));
    rep.expect(detail::in_band(cep_large, 0.19, 0.29),
               detail::band_note("cep_1024_elements_m", cep_large, 0.19, 0.29));
    const double ratio = cep_small / cep_large;
    rep.expect(detail::in_band(ratio, 3.6, 4.4), detail::band_note("cep_ratio", ratio, 3.6, 4.4));

    return {5, "positioning accuracy", rep.all_ok(), 0.0, 120.0, rep.text()};
}

// 6. Wideband focusing with a 2.74 m ULA and 10 percent fractional
//    bandwidth: frequency-flat weights lose more than 3 dB at the band
//    edges, per-element true time delays hold the focal gain within 0.1 dB.
inline CriterionResult criterion_beamsplit(const Options &opt) {
    detail::Reporter rep;
    const double fc = 28e9;
    const CarrierConfig carrier =
        CarrierConfig::wideband(fc, 0.1 * fc, opt.beamsplit_subcarriers);
    const ArrayGeometry g = make_ula(513, carrier.wavelength_m / 2.0); // 2.74 m aperture
    const double focal_angle = 0.0, focal_distance = 5.0;

    // coarse argmax grid: the criterion asserts focal gains only
    const auto flat =
        beamsplit_gain(focal_angle, focal_distance, g, carrier, 17, 9);
    const double peak_db = 20.0 * std::log10(std::sqrt(static_cast<double>(g.size())));
    const double edge_loss = peak_db - std::min(flat.front().focal_gain_db,
                                                flat.back().focal_gain_db);
    rep.expect(edge_loss > 3.0,
               "phase_only_edge_loss_db=" + detail::num(edge_loss) + " > 3");

    const Beamformer ttd = ttd_beamformer(focal_angle, focal_distance, g, carrier);
    const auto delayed =
        wideband_focal_gains(ttd, focal_angle, focal_distance, g, carrier, 17, 9);
    double worst_ttd_loss = 0.0;
    for (const auto &row : delayed)
        worst_ttd_loss = std::max(worst_ttd_loss, peak_db - row.focal_gain_db);
    rep.expect(worst_ttd_loss < 0.1,
               "ttd_worst_loss_db=" + detail::num(worst_ttd_loss) + " < 0.1");

    return {6, "beam-split and true time delay", rep.all_ok(), 0.0, 10.0, rep.text()};
}

// 7. Polar-domain sparsity: for three scatterers 3 m from a 512-element
//    300 GHz ULA at -30, 0 and +30 degrees, the polar codebook concentrates
//    more energy in its best atom than the Fourier codebook does, and
//    on-grid OMP recovery is at least 10 dB better through the polar
//    dictionary.
inline CriterionResult criterion_polar_sparsity(const Options &) {
    detail::Reporter rep;
    {
        const double lambda = speed_of_light_mps / 300e9;
        const ArrayGeometry g = make_ula(512, lambda / 2.0);
        const Dictionary polar = polar_dictionary(g, lambda, 1.2, g.size());
        const Dictionary fourier = fourier_dictionary(g.size());
        for (double angle_deg : {-30.0, 0.0, 30.0}) {
            const ChannelVector h =
                nearfield_steering(g, point_at(g, angle_deg * pi / 180.0, 3.0), lambda);
            auto top1 = [&](const Dictionary &dict) {
                const Eigen::VectorXcd c = transform_coefficients(h, dict);
                return c.cwiseAbs2().maxCoeff() / h.squaredNorm();
            };
            const double share_polar = top1(polar), share_fourier = top1(fourier);
            rep.expect(share_polar > share_fourier,
                       "top1_share angle=" + detail::num(angle_deg) + " polar=" +
                           detail::num(share_polar) + " > fourier=" +
                           detail::num(share_fourier));
        }
    }
    {
        const double lambda = speed_of_light_mps / 300e9;
        const ArrayGeometry g = make_ula(256, lambda / 2.0);
        const Dictionary polar = polar_dictionary(g, lambda, 1.2, g.size());
        const Dictionary fourier = fourier_dictionary(g.size());

        ChannelVector h = ChannelVector::Zero(256);
        const std::vector<std::pair<double, double>> sites = {
            {-pi / 6.0, 5.0}, {0.0, 3.5}, {pi / 6.0, 7.0}};
        const std::vector<Complex> gains = {Complex(1.0, 0.0), Complex(0.4, 0.6),
                                            Complex(-0.3, 0.5)};
        for (std::size_t p = 0; p < sites.size(); ++p) {
            const Eigen::Index atom =
                experiments_detail::snap_to_atom(polar, sites[p].first, sites[p].second);
            h += gains[p] * polar.atoms.col(atom);
        }
        const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(256, 256);
        const double err_polar = nmse_db(omp_estimate(h, identity, polar, 3).reconstructed, h);
        const double err_fourier =
            nmse_db(omp_estimate(h, identity, fourier, 3).reconstructed, h);
        rep.expect(err_polar < -30.0, "omp_polar_nmse_db=" + detail::num(err_polar) + " < -30");
        rep.expect(err_fourier >= err_polar + 10.0,
                   "omp_fourier_nmse_db=" + detail::num(err_fourier) + " >= polar + 10 dB");
    }
    return {7, "polar-domain sparsity", rep.all_ok(), 0.0, 30.0, rep.text()};
}

// 8. Cross-cutting property suite: codebook norms and unitarity, MRT
//    optimality, DoF invariances, channel reciprocity, the Rayleigh median
//    behind the CEP definition, and bit-exact reruns of seeded experiments.
inline CriterionResult criterion_properties(const Options &opt) {
    detail::Reporter rep;
    const double lambda = speed_of_light_mps / 300e9;

    { // dictionary unit norms and Fourier unitarity
        const ArrayGeometry g = make_ula(64, lambda / 2.0);
        const Dictionary fourier = fourier_dictionary(64);
        const Dictionary polar = polar_dictionary(g, lambda, 1.2, 64);
        double worst = 0.0;
        for (const Dictionary *dict : {&fourier, &polar})
            for (Eigen::Index m = 0; m < dict->size(); ++m)
                worst = std::max(worst, std::abs(dict->atoms.col(m).norm() - 1.0));
        rep.expect(worst < 1e-10, "atom_norm_error=" + detail::num(worst) + " < 1e-10");
        const double gram_err = (fourier.atoms.adjoint() * fourier.atoms -
                                 Eigen::MatrixXcd::Identity(64, 64))
                                    .cwiseAbs()
                                    .maxCoeff();
        rep.expect(gram_err < 1e-10, "fourier_gram_error=" + detail::num(gram_err) + " < 1e-10");
    }
    { // MRT optimality against random unit-norm weights
        const ArrayGeometry g = make_ula(64, lambda / 2.0);
        const ChannelVector h = nearfield_steering(g, point_at(g, 0.3, 4.0), lambda);
        const Beamformer mrt = mrt_beamformer(h);
        const double best = array_gain(mrt, h);
        bool beaten = false;
        for (int t = 0; t < opt.mrt_random_trials && !beaten; ++t) {
            Eigen::VectorXcd w(h.size());
            for (Eigen::Index n = 0; n < w.size(); ++n)
                w[n] = Complex(gaussian_at(77, static_cast<std::uint64_t>(t) * 2 * h.size() +
                                                   2 * static_cast<std::uint64_t>(n)),
                               gaussian_at(77, static_cast<std::uint64_t>(t) * 2 * h.size() +
                                                   2 * static_cast<std::uint64_t>(n) + 1));
            w.normalize();
            beaten = std::abs(w.dot(h)) > best;
        }
        rep.expect(!beaten, "mrt gain unbeaten by " + std::to_string(opt.mrt_random_trials) +
                                " random beamformers");
    }
    { // effective DoF scale and unitary invariance on a full-spectrum matrix
        ChannelMatrix h(8, 12);
        for (Eigen::Index i = 0; i < h.rows(); ++i)
            for (Eigen::Index j = 0; j < h.cols(); ++j) {
                const auto c = static_cast<std::uint64_t>(2 * (i * h.cols() + j));
                h(i, j) = Complex(gaussian_at(31, c), gaussian_at(31, c + 1));
            }
        const int base = effective_dof(h, 0.01);
        const int scaled = effective_dof(Complex(0.0, -3.7) * h, 0.01);
        auto random_unitary = [&](Eigen::Index n, std::uint64_t seed) {
            Eigen::MatrixXcd a(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    a(i, j) = Complex(gaussian_at(seed, static_cast<std::uint64_t>(2 * (i * n + j))),
                                      gaussian_at(seed, static_cast<std::uint64_t>(
                                                            2 * (i * n + j) + 1)));
            return Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ() *
                   Eigen::MatrixXcd::Identity(n, n);
        };
        const Eigen::MatrixXcd u = random_unitary(h.rows(), 5);
        const Eigen::MatrixXcd v = random_unitary(h.cols(), 6);
        const int rotated = effective_dof(u * h * v, 0.01);
        rep.expect(base == scaled && base == rotated,
                   "dof invariance: base=" + std::to_string(base) + " scaled=" +
                       std::to_string(scaled) + " rotated=" + std::to_string(rotated));
    }
    { // LoS reciprocity
        const ArrayGeometry tx = make_ula(32, lambda / 2.0);
        const ArrayGeometry rx = translated(make_ula(8, lambda / 2.0), point_at(tx, 0.4, 1.3));
        const ChannelMatrix forward = los_mimo_channel(tx, rx, lambda);
        const ChannelMatrix backward = los_mimo_channel(rx, tx, lambda);
        const double err = (forward - backward.transpose()).norm() / forward.norm();
        rep.expect(err < 1e-12, "reciprocity_error=" + detail::num(err) + " < 1e-12");
    }
    { // CEP of an isotropic unit-variance 2D Gaussian: median radius sqrt(2 ln 2)
        std::vector<Vec2> pts;
        pts.reserve(static_cast<std::size_t>(opt.cep_median_samples));
        for (int i = 0; i < opt.cep_median_samples; ++i)
            pts.emplace_back(gaussian_at(99, static_cast<std::uint64_t>(2 * i)),
                             gaussian_at(99, static_cast<std::uint64_t>(2 * i + 1)));
        const double measured = cep(pts);
        const double expected = std::sqrt(2.0 * std::log(2.0));
        rep.expect(std::abs(measured - expected) / expected < 0.01,
                   "cep_gaussian=" + detail::num(measured) + " within 1% of " +
                       detail::num(expected));
    }
    { // bit-exact determinism of seeded experiments
        const double l = speed_of_light_mps / 300e9;
        std::vector<AccessPoint> aps = {make_access_point({3.0, 0.0}, true, 16, l),
                                        make_access_point({6.0, 3.0}, false, 16, l),
                                        make_access_point({3.0, 6.0}, true, 16, l),
                                        make_access_point({0.0, 3.0}, false, 16, l)};
        const auto a = positioning_experiment({3.0, 3.0}, aps, 31.62, 200, 42);
        const auto b = positioning_experiment({3.0, 3.0}, aps, 31.62, 200, 42);
        bool identical = a.cep_m == b.cep_m && a.estimates.size() == b.estimates.size();
        for (std::size_t i = 0; identical && i < a.estimates.size(); ++i)
            identical = a.estimates[i] == b.estimates[i];
        const ExperimentConfig cfg = parse_config(
            "experiment = boundaries\ncarrier_frequency_hz = 28e9\naperture_m = 1.4142, 0.5\n");
        identical = identical && run_experiment(cfg).to_csv() == run_experiment(cfg).to_csv();
        rep.expect(identical, "seeded reruns bit-identical");
    }

    return {8, "property suite", rep.all_ok(), 0.0, 60.0, rep.text()};
}

inline std::vector<CriterionResult> run_all(const Options &opt) {
    using Criterion = std::function<CriterionResult(const Options &)>;
    const std::vector<Criterion> criteria = {
        criterion_boundaries,   criterion_phase_error,    criterion_dof_distance,
        criterion_dof_aperture, criterion_positioning,    criterion_beamsplit,
        criterion_polar_sparsity, criterion_properties,
    };
    std::vector<CriterionResult> results;
    for (const auto &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult r = c(opt);
        r.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        if (r.elapsed_s > r.budget_s) {
            r.passed = false;
            r.detail += "; runtime " + detail::num(r.elapsed_s) + " s over budget " +
                        detail::num(r.budget_s) + " s";
        }
        results.push_back(std::move(r));
    }
    return results;
}

inline std::string format_report(const std::vector<CriterionResult> &results) {
    std::string out;
    for (const auto &r : results) {
        out += (r.passed ? "PASS" : "FAIL");
        out += "  criterion " + std::to_string(r.id) + " (" + r.name + ", " +
               detail::num(r.elapsed_s) + " s): " + r.detail + "\n";
    }
    return out;
}

} // namespace nfkit::acceptance

#endif
