// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef NFKIT_EXPERIMENTS_HPP
#define NFKIT_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "beamfocus.hpp"
#include "channel.hpp"
#include "codebook.hpp"
#include "config.hpp"
#include "dof.hpp"
#include "geometry.hpp"
#include "positioning.hpp"
#include "result_table.hpp"

namespace nfkit {

namespace experiments_detail {

inline AmplitudeModel amplitude_from(const ExperimentConfig &cfg) {
    return cfg.choice("amplitude") == "unit" ? AmplitudeModel::unit : AmplitudeModel::free_space;
}

inline double spacing_or_half_wavelength(const ExperimentConfig &cfg, double wavelength_m) {
    return cfg.numbers.count("spacing_m") ? cfg.number("spacing_m") : wavelength_m / 2.0;
}

inline std::vector<Scatterer> scatterers_from(const ExperimentConfig &cfg, std::size_t n_elements) {
    std::vector<Scatterer> out;
    auto it = cfg.rows.find("scatterer");
    if (it == cfg.rows.end())
        return out;
    for (const auto &row : it->second) {
        Scatterer s;
        const double angle = row[0], distance = row[1];
        if (!(distance > 0.0))
            throw ConfigError("config error: scatterer distance_m must be positive");
        s.gain = Complex(row[2], row[3]);
        const double b = row[4], e = row[5];
        if (b < 0 || e <= b || e > static_cast<double>(n_elements))
            throw ConfigError("config error: scatterer visibility window out of range");
        s.visible_begin = static_cast<std::size_t>(b);
        s.visible_end = static_cast<std::size_t>(e);
        s.position = Vec3(angle, distance, 0.0); // placeholder, resolved against the geometry
        out.push_back(s);
    }
    return out;
}

inline void resolve_scatterer_positions(std::vector<Scatterer> &scatterers,
                                        const ArrayGeometry &g) {
    for (auto &s : scatterers) {
        const double angle = s.position.x(), distance = s.position.y();
        s.position = point_at(g, angle, distance);
    }
}

inline ResultTable run_boundaries(const ExperimentConfig &cfg) {
    const double f = cfg.number("carrier_frequency_hz");
    const double lambda = speed_of_light_mps / f;
    const bool with_upd = cfg.numbers.count("n_elements") > 0;

    ResultTable table;
    table.header = {"aperture_m", "wavelength_m", "rayleigh_m", "fresnel_m", "reactive_limit_m"};
    if (with_upd) {
        table.header.push_back("upd_m");
        table.header.push_back("upd_capped");
    }
    for (double aperture : cfg.lists.at("aperture_m")) {
        const double rayleigh = rayleigh_distance(aperture, lambda);
        const double fresnel = fresnel_distance(aperture, lambda);
        std::vector<double> row = {aperture, lambda, rayleigh, fresnel,
                                   std::min(lambda, fresnel)};
        if (with_upd) {
            const auto n = static_cast<std::size_t>(cfg.integer("n_elements"));
            const ArrayGeometry g = make_ula(n, aperture / (static_cast<double>(n) - 1.0));
            const UniformPowerDistance upd =
                uniform_power_distance(g, lambda, cfg.number("upd_threshold_db"));
            row.push_back(upd.distance_m);
            row.push_back(upd.capped ? 1.0 : 0.0);
        }
        table.add_row(std::move(row));
    }
    return table;
}

inline ResultTable run_power_profile(const ExperimentConfig &cfg) {
    const double f = cfg.number("carrier_frequency_hz");
    const double lambda = speed_of_light_mps / f;
    const auto n = static_cast<std::size_t>(cfg.integer("n_elements"));
    const ArrayGeometry g = make_ula(n, spacing_or_half_wavelength(cfg, lambda));

    auto scatterers = scatterers_from(cfg, n);
    resolve_scatterer_positions(scatterers, g);
    std::optional<Vec3> los;
    if (cfg.numbers.count("los_distance_m"))
        los = point_at(g, cfg.number("los_angle_rad"), cfg.number("los_distance_m"));

    const ChannelVector h = multipath_channel(g, scatterers, lambda, amplitude_from(cfg), los);
    const Eigen::VectorXd profile = power_profile(h);

    ResultTable table;
    table.header = {"element_index", "power_db"};
    for (Eigen::Index i = 0; i < profile.size(); ++i)
        table.add_row({static_cast<double>(i), profile[i]});
    return table;
}

inline Dictionary dictionary_from(const ExperimentConfig &cfg, const ArrayGeometry &g,
                                  double wavelength_m) {
    if (cfg.choice("dictionary") == "fourier")
        return fourier_dictionary(g.size());
    const std::size_t n_angles = cfg.numbers.count("n_angles")
                                     ? static_cast<std::size_t>(cfg.integer("n_angles"))
                                     : g.size();
    return polar_dictionary(g, wavelength_m, cfg.number("beta"), n_angles);
}

inline ResultTable run_angular_spread(const ExperimentConfig &cfg) {
    const double f = cfg.number("carrier_frequency_hz");
    const double lambda = speed_of_light_mps / f;
    const auto n = static_cast<std::size_t>(cfg.integer("n_elements"));
    const ArrayGeometry g = make_ula(n, spacing_or_half_wavelength(cfg, lambda));

    auto scatterers = scatterers_from(cfg, n);
    resolve_scatterer_positions(scatterers, g);
    const ChannelVector h = multipath_channel(g, scatterers, lambda, amplitude_from(cfg));
    const Dictionary dict = dictionary_from(cfg, g, lambda);
    const Eigen::VectorXcd coeffs = transform_coefficients(h, dict);

    ResultTable table;
    table.header = {"atom_index", "angle_rad", "distance_m", "magnitude_db"};
    for (Eigen::Index m = 0; m < coeffs.size(); ++m) {
        const auto &label = dict.grid[static_cast<std::size_t>(m)];
        table.add_row({static_cast<double>(m), label.angle_rad, label.distance_m,
                       amplitude_db(std::abs(coeffs[m]))});
    }
    return table;
}

inline ResultTable run_beamsplit(const ExperimentConfig &cfg) {
    const double f = cfg.number("carrier_frequency_hz");
    const CarrierConfig carrier = CarrierConfig::wideband(
        f, cfg.number("fractional_bandwidth") * f,
        static_cast<std::size_t>(cfg.integer("n_subcarriers")));
    const auto n = static_cast<std::size_t>(cfg.integer("n_elements"));
    const ArrayGeometry g = make_ula(n, spacing_or_half_wavelength(cfg, carrier.wavelength_m));
    const double focal_angle = cfg.number("focal_angle_rad");
    const double focal_distance = cfg.number("focal_distance_m");
    const auto n_ga = static_cast<std::size_t>(cfg.integer("n_grid_angles"));
    const auto n_gd = static_cast<std::size_t>(cfg.integer("n_grid_distances"));

    std::vector<SubcarrierGain> gains;
    if (cfg.choice("weights") == "phase_only") {
        gains = beamsplit_gain(focal_angle, focal_distance, g, carrier, n_ga, n_gd);
    } else {
        const Beamformer bf = ttd_beamformer(focal_angle, focal_distance, g, carrier);
        gains = wideband_focal_gains(bf, focal_angle, focal_distance, g, carrier, n_ga, n_gd);
    }

    ResultTable table;
    table.header = {"subcarrier_hz", "focal_gain_db", "argmax_angle_rad", "argmax_distance_m"};
    for (const auto &row : gains)
        table.add_row({row.frequency_hz, row.focal_gain_db, row.argmax_angle_rad,
                       row.argmax_distance_m});
    return table;
}

inline ResultTable run_gain_map(const ExperimentConfig &cfg) {
    const double f = cfg.number("carrier_frequency_hz");
    const double lambda = speed_of_light_mps / f;
    const auto n = static_cast<std::size_t>(cfg.integer("n_elements"));
    const ArrayGeometry g = make_ula(n, spacing_or_half_wavelength(cfg, lambda));

    const ChannelVector focal = nearfield_steering(
        g, point_at(g, cfg.number("focal_angle_rad"), cfg.number("focal_distance_m")), lambda);
    const Beamformer bf = mrt_beamformer(focal, f);
    const GainMap map = focus_gain_map(
        bf, g, lambda, default_angle_grid(static_cast<std::size_t>(cfg.integer("n_grid_angles"))),
        default_distance_grid(g, lambda,
                              static_cast<std::size_t>(cfg.integer("n_grid_distances"))));

    ResultTable table;
    table.header = {"angle_rad", "distance_m", "gain_db", "subcarrier_hz"};
    for (Eigen::Index i = 0; i < map.angles_rad.size(); ++i)
        for (Eigen::Index j = 0; j < map.distances_m.size(); ++j)
            table.add_row({map.angles_rad[i], map.distances_m[j], map.gain_db(i, j), f});
    return table;
}

inline void append_sweep_rows(ResultTable &table, const DofSweepResult &sweep) {
    for (const auto &point : sweep.points) {
        std::vector<double> row = {point.value, static_cast<double>(point.dof)};
        for (int i = 0; i < 16; ++i)
            row.push_back(i < point.singular_values.size() ? point.singular_values[i] : 0.0);
        table.add_row(std::move(row));
    }
}

inline std::vector<std::string> sweep_header(const std::string &variable) {
    std::vector<std::string> h = {variable, "dof"};
    for (int i = 1; i <= 16; ++i)
        h.push_back("sv_" + std::to_string(i));
    return h;
}

inline ResultTable run_dof_distance(const ExperimentConfig &cfg) {
    const double f = cfg.number("carrier_frequency_hz");
    const double lambda = speed_of_light_mps / f;
    const ArrayGeometry tx =
        make_ula(static_cast<std::size_t>(cfg.integer("tx_elements")), lambda / 2.0);
    const ArrayGeometry rx =
        make_ula(static_cast<std::size_t>(cfg.integer("rx_elements")), lambda / 2.0);

    const double lo = cfg.number("distance_min_m"), hi = cfg.number("distance_max_m");
    if (!(hi > lo))
        throw ConfigError("config error: distance_max_m must exceed distance_min_m");
    const auto n_points = static_cast<std::size_t>(cfg.integer("n_points"));
    std::vector<double> distances;
    for (std::size_t i = 0; i < n_points; ++i)
        distances.push_back(lo * std::exp(std::log(hi / lo) * static_cast<double>(i) /
                                          static_cast<double>(n_points - 1)));

    const DofSweepResult sweep =
        dof_vs_distance(tx, rx, lambda, distances, cfg.number("rx_angle_rad"),
                        cfg.number("energy_loss"), amplitude_from(cfg));
    ResultTable table;
    table.header = sweep_header("distance_m");
    append_sweep_rows(table, sweep);
    return table;
}

inline ResultTable run_dof_aperture(const ExperimentConfig &cfg) {
    const double f = cfg.number("carrier_frequency_hz");
    const double lambda = speed_of_light_mps / f;
    const ArrayGeometry rx =
        make_ula(static_cast<std::size_t>(cfg.integer("rx_elements")), lambda / 2.0);

    std::vector<std::size_t> grid;
    for (double v : cfg.lists.at("tx_elements"))
        grid.push_back(static_cast<std::size_t>(std::llround(v)));

    const DofSweepResult sweep =
        dof_vs_aperture(grid, rx, lambda, cfg.number("distance_m"), cfg.number("rx_angle_rad"),
                        cfg.number("energy_loss"), amplitude_from(cfg));
    ResultTable table;
    table.header = sweep_header("aperture_m");
    append_sweep_rows(table, sweep);
    return table;
}

// Nearest dictionary atom to a requested (angle, distance): nearest in sine
// first, then nearest in 1/r among that angle's atoms.
inline Eigen::Index snap_to_atom(const Dictionary &dict, double angle_rad, double distance_m) {
    double best_sin = std::numeric_limits<double>::infinity();
    const double target_sin = std::sin(angle_rad);
    for (const auto &label : dict.grid)
        best_sin = std::min(best_sin, std::abs(std::sin(label.angle_rad) - target_sin));
    Eigen::Index best = 0;
    double best_inv = std::numeric_limits<double>::infinity();
    const double target_inv = 1.0 / distance_m;
    for (std::size_t m = 0; m < dict.grid.size(); ++m) {
        const auto &label = dict.grid[m];
        if (std::abs(std::sin(label.angle_rad) - target_sin) > best_sin + 1e-12)
            continue;
        const double inv = std::isinf(label.distance_m) ? 0.0 : 1.0 / label.distance_m;
        if (std::abs(inv - target_inv) < best_inv) {
            best_inv = std::abs(inv - target_inv);
            best = static_cast<Eigen::Index>(m);
        }
    }
    return best;
}

inline ResultTable run_estimate(const ExperimentConfig &cfg) {
    const double f = cfg.number("carrier_frequency_hz");
    const double lambda = speed_of_light_mps / f;
    const auto n = static_cast<std::size_t>(cfg.integer("n_elements"));
    const ArrayGeometry g = make_ula(n, lambda / 2.0);
    const Dictionary dict = dictionary_from(cfg, g, lambda);

    // on-grid channel: each requested path snaps to its nearest atom
    const auto &paths = cfg.rows.at("path");
    ChannelVector h = ChannelVector::Zero(static_cast<Eigen::Index>(n));
    for (const auto &row : paths) {
        const Eigen::Index atom = snap_to_atom(dict, row[0], row[1]);
        h += Complex(row[2], row[3]) * dict.atoms.col(atom);
    }

    Eigen::MatrixXcd sensing;
    if (cfg.choice("sensing") == "identity") {
        sensing = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(n),
                                             static_cast<Eigen::Index>(n));
    } else {
        // rows of the unitary DFT selected by a seeded shuffle
        const auto n_pilots = static_cast<std::size_t>(cfg.integer("n_pilots"));
        if (n_pilots > n)
            throw ConfigError("config error: n_pilots exceeds n_elements");
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i)
            order[i] = i;
        for (std::size_t i = n - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(uniform_at(cfg.seed, i) *
                                                    static_cast<double>(i + 1));
            std::swap(order[i], order[std::min(j, i)]);
        }
        sensing.resize(static_cast<Eigen::Index>(n_pilots), static_cast<Eigen::Index>(n));
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (std::size_t r = 0; r < n_pilots; ++r)
            for (std::size_t c = 0; c < n; ++c)
                sensing(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = std::polar(
                    scale, -2.0 * pi * static_cast<double>(order[r] * c) / static_cast<double>(n));
    }

    const std::size_t sparsity = cfg.numbers.count("sparsity")
                                     ? static_cast<std::size_t>(cfg.integer("sparsity"))
                                     : paths.size();
    const Eigen::VectorXcd y = sensing * h;
    const SparseEstimate est = omp_estimate(y, sensing, dict, sparsity,
                                            cfg.number("residual_tol"));
    const double err_db = nmse_db(est.reconstructed, h);

    ResultTable table;
    table.header = {"pick_order",  "atom_index", "angle_rad", "distance_m",
                    "coeff_re",    "coeff_im",   "nmse_db"};
    for (std::size_t i = 0; i < est.support.size(); ++i) {
        const auto &label = dict.grid[static_cast<std::size_t>(est.support[i])];
        table.add_row({static_cast<double>(i), static_cast<double>(est.support[i]),
                       label.angle_rad, label.distance_m,
                       est.coefficients[static_cast<Eigen::Index>(i)].real(),
                       est.coefficients[static_cast<Eigen::Index>(i)].imag(), err_db});
    }
    return table;
}

inline std::vector<AccessPoint> access_points_from(const ExperimentConfig &cfg,
                                                   double wavelength_m) {
    const auto n = static_cast<std::size_t>(cfg.integer("elements_per_ap"));
    std::vector<AccessPoint> aps;
    const auto it = cfg.rows.find("access_point");
    if (it != cfg.rows.end() && !it->second.empty()) {
        for (const auto &row : it->second) {
            const int axis = static_cast<int>(std::llround(row[2]));
            if (axis != 0 && axis != 1)
                throw ConfigError("config error: access_point axis must be 0 (x) or 1 (y)");
            aps.push_back(make_access_point({row[0], row[1]}, axis == 0, n, wavelength_m));
        }
    } else {
        // four anchors on a 6 m square, arrays lined up with the coordinate axes
        aps.push_back(make_access_point({3.0, 0.0}, true, n, wavelength_m));
        aps.push_back(make_access_point({6.0, 3.0}, false, n, wavelength_m));
        aps.push_back(make_access_point({3.0, 6.0}, true, n, wavelength_m));
        aps.push_back(make_access_point({0.0, 3.0}, false, n, wavelength_m));
    }
    return aps;
}

inline ResultTable run_positioning(const ExperimentConfig &cfg) {
    const double lambda = speed_of_light_mps / cfg.number("carrier_frequency_hz");
    const auto aps = access_points_from(cfg, lambda);
    const double variance = std::pow(10.0, cfg.number("noise_db_m2") / 10.0);
    const Vec2 user(cfg.number("user_x_m"), cfg.number("user_y_m"));
    const PositionSolver solver = cfg.choice("solver") == "linear" ? PositionSolver::linear
                                                                   : PositionSolver::gauss_newton;

    const PositioningResult result = positioning_experiment(
        user, aps, variance, static_cast<int>(cfg.integer("trials")), cfg.seed, solver);

    ResultTable table;
    table.header = {"trial", "x_m", "y_m"};
    for (std::size_t t = 0; t < result.estimates.size(); ++t)
        table.add_row({static_cast<double>(t), result.estimates[t].x(), result.estimates[t].y()});
    // summary row: (cep_m, mean_x, mean_y)
    table.add_row({result.cep_m, result.mean_estimate.x(), result.mean_estimate.y()});
    return table;
}

} // namespace experiments_detail

// Dispatches a validated config to its module chain. Deterministic for a
// fixed (config, seed); writes CSV to config.output_path when set.
inline ResultTable run_experiment(const ExperimentConfig &cfg) {
    using namespace experiments_detail;
    ResultTable table;
    switch (cfg.experiment) {
    case ExperimentKind::boundaries:
        table = run_boundaries(cfg);
        break;
    case ExperimentKind::power_profile:
        table = run_power_profile(cfg);
        break;
    case ExperimentKind::angular_spread:
        table = run_angular_spread(cfg);
        break;
    case ExperimentKind::beamsplit:
        table = run_beamsplit(cfg);
        break;
    case ExperimentKind::gain_map:
        table = run_gain_map(cfg);
        break;
    case ExperimentKind::dof_distance:
        table = run_dof_distance(cfg);
        break;
    case ExperimentKind::dof_aperture:
        table = run_dof_aperture(cfg);
        break;
    case ExperimentKind::estimate:
        table = run_estimate(cfg);
        break;
    case ExperimentKind::positioning:
        table = run_positioning(cfg);
        break;
    }
    if (!cfg.output_path.empty())
        table.write_csv(cfg.output_path);
    return table;
}

} // namespace nfkit

#endif
