// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <catch2/catch.hpp>

#include "nfkit/experiments.hpp"

using namespace nfkit;

TEST_CASE("number formatting is locale independent with sentinels") {
    REQUIRE(format_number(373.592) == "373.592");
    REQUIRE(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    REQUIRE(format_number(std::numeric_limits<double>::infinity()) == "inf");
    REQUIRE(format_number(1.0 / 3.0).size() <= 11); // 9 significant digits
    ResultTable t;
    t.header = {"a"};
    REQUIRE_THROWS_AS(t.add_row({std::nan("")}), std::invalid_argument);
    REQUIRE_THROWS_AS(t.add_row({1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("boundaries experiment emits the headline distance") {
    const ExperimentConfig cfg = parse_config(
        "experiment = boundaries\ncarrier_frequency_hz = 28e9\n"
        "aperture_m = 1.4142135624\n");
    const ResultTable table = run_experiment(cfg);
    REQUIRE(table.header[2] == "rayleigh_m");
    REQUIRE(table.rows.size() == 1);
    REQUIRE(table.rows[0][2] == Approx(373.59).margin(0.5));

    // byte-identical rerun
    REQUIRE(run_experiment(cfg).to_csv() == table.to_csv());
}

TEST_CASE("power profile experiment shows the non-stationary split") {
    const ExperimentConfig cfg = parse_config(
        "experiment = power_profile\n"
        "carrier_frequency_hz = 28e9\n"
        "n_elements = 512\n"
        "scatterer = -0.3, 5.0, 1, 0, 0, 256\n"
        "scatterer = 0.35, 40.0, 1, 0, 256, 512\n");
    const ResultTable table = run_experiment(cfg);
    REQUIRE(table.rows.size() == 512);
    double head = 0.0, tail = 0.0;
    for (int i = 0; i < 256; ++i) {
        head += table.rows[static_cast<std::size_t>(i)][1] / 256.0;
        tail += table.rows[static_cast<std::size_t>(i + 256)][1] / 256.0;
    }
    REQUIRE(std::abs(head - tail) > 3.0);
}

TEST_CASE("angular spread experiment labels far-field atoms with inf") {
    const ExperimentConfig cfg = parse_config(
        "experiment = angular_spread\n"
        "carrier_frequency_hz = 300e9\n"
        "n_elements = 64\n"
        "dictionary = polar\n"
        "scatterer = 0, 2.0, 1, 0, 0, 64\n");
    const ResultTable table = run_experiment(cfg);
    REQUIRE(table.header[3] == "magnitude_db");
    bool saw_inf = false;
    for (const auto &row : table.rows)
        saw_inf = saw_inf || std::isinf(row[2]);
    REQUIRE(saw_inf);
    const std::string csv = table.to_csv();
    REQUIRE(csv.find("inf") != std::string::npos);
}

TEST_CASE("beam-split experiment reports per-subcarrier focal gains") {
    const ExperimentConfig cfg = parse_config(
        "experiment = beamsplit\n"
        "carrier_frequency_hz = 28e9\n"
        "n_elements = 129\n"
        "n_subcarriers = 5\n"
        "focal_distance_m = 4\n"
        "n_grid_angles = 17\n"
        "n_grid_distances = 9\n");
    const ResultTable table = run_experiment(cfg);
    REQUIRE(table.rows.size() == 5);
    const double peak = 20.0 * std::log10(std::sqrt(129.0));
    REQUIRE(table.rows[2][1] == Approx(peak).margin(1e-9));
    REQUIRE(table.rows[0][1] < peak);

    // time-delay weights hold the gain across the band
    const ExperimentConfig ttd_cfg = parse_config(
        "experiment = beamsplit\n"
        "carrier_frequency_hz = 28e9\n"
        "n_elements = 129\n"
        "n_subcarriers = 5\n"
        "focal_distance_m = 4\n"
        "weights = time_delay\n"
        "n_grid_angles = 17\n"
        "n_grid_distances = 9\n");
    for (const auto &row : run_experiment(ttd_cfg).rows)
        REQUIRE(peak - row[1] < 0.01);
}

TEST_CASE("gain map experiment covers the requested grid") {
    const ExperimentConfig cfg = parse_config(
        "experiment = gain_map\n"
        "carrier_frequency_hz = 300e9\n"
        "n_elements = 64\n"
        "focal_distance_m = 2\n"
        "n_grid_angles = 21\n"
        "n_grid_distances = 11\n");
    const ResultTable table = run_experiment(cfg);
    REQUIRE(table.rows.size() == 21 * 11);
    REQUIRE(table.header == std::vector<std::string>{"angle_rad", "distance_m", "gain_db",
                                                     "subcarrier_hz"});
    for (const auto &row : table.rows)
        REQUIRE(row[3] == Approx(300e9));
}

TEST_CASE("dof sweep experiments carry the singular value columns") {
    const ExperimentConfig cfg = parse_config(
        "experiment = dof_distance\n"
        "carrier_frequency_hz = 300e9\n"
        "tx_elements = 1024\n"
        "rx_elements = 16\n"
        "distance_min_m = 0.5\n"
        "distance_max_m = 30\n"
        "n_points = 7\n");
    const ResultTable table = run_experiment(cfg);
    REQUIRE(table.header.size() == 18);
    REQUIRE(table.header[17] == "sv_16");
    REQUIRE(table.rows.front()[1] >= 7.0); // dof at 0.5 m
    REQUIRE(table.rows.back()[1] == 1.0);  // dof at 30 m

    const ExperimentConfig ap_cfg = parse_config(
        "experiment = dof_aperture\n"
        "carrier_frequency_hz = 300e9\n"
        "tx_elements = 64, 256, 1024\n"
        "rx_elements = 16\n"
        "distance_m = 0.7\n");
    const ResultTable ap_table = run_experiment(ap_cfg);
    REQUIRE(ap_table.rows.size() == 3);
    REQUIRE(ap_table.rows[0][1] <= ap_table.rows[2][1]);
}

TEST_CASE("estimate experiment recovers an on-grid channel") {
    const ExperimentConfig cfg = parse_config(
        "experiment = estimate\n"
        "carrier_frequency_hz = 300e9\n"
        "n_elements = 64\n"
        "path = -0.5, 2.0, 1, 0\n"
        "path = 0.4, 4.0, 0.5, 0.5\n");
    const ResultTable table = run_experiment(cfg);
    REQUIRE(table.rows.size() == 2); // sparsity defaults to the path count
    for (const auto &row : table.rows)
        REQUIRE(row[6] < -100.0); // noiseless on-grid recovery

    // pilot-compressed sensing still recovers the on-grid channel
    const ExperimentConfig sub_cfg = parse_config(
        "experiment = estimate\n"
        "seed = 7\n"
        "carrier_frequency_hz = 300e9\n"
        "n_elements = 64\n"
        "sensing = subsampled\n"
        "n_pilots = 32\n"
        "path = -0.5, 2.0, 1, 0\n"
        "path = 0.4, 4.0, 0.5, 0.5\n");
    const ResultTable sub_table = run_experiment(sub_cfg);
    REQUIRE(sub_table.rows.size() == 2);
    for (const auto &row : sub_table.rows)
        REQUIRE(row[6] < -60.0);
}

TEST_CASE("positioning experiment ends with the summary row") {
    const ExperimentConfig cfg = parse_config(
        "experiment = positioning\n"
        "seed = 11\n"
        "elements_per_ap = 16\n"
        "trials = 50\n");
    const ResultTable table = run_experiment(cfg);
    REQUIRE(table.rows.size() == 51);
    const auto &summary = table.rows.back();
    REQUIRE(summary[0] > 0.0);                 // cep_m
    REQUIRE(summary[1] == Approx(3.0).margin(0.6)); // mean_x
    REQUIRE(summary[2] == Approx(3.0).margin(0.6)); // mean_y

    // identical seed, identical bytes
    REQUIRE(run_experiment(cfg).to_csv() == table.to_csv());
}
