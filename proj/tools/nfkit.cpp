// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

// Command-line front end: one subcommand per experiment plus `self-check`.
// Exit codes: 0 success, 1 config error, 2 numerical failure,
// 3 self-check criterion failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "nfkit/acceptance.hpp"
#include "nfkit/config.hpp"
#include "nfkit/experiments.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config_error = 1;
constexpr int exit_numerical_failure = 2;
constexpr int exit_check_failure = 3;

struct ExperimentArgs {
    std::string config_path;
    std::string out_path;
    long seed = -1;
    // positioning-only overrides
    long trials = -1;
    long elements_per_ap = -1;
    double noise_db_m2 = std::numeric_limits<double>::quiet_NaN();
};

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw nfkit::ConfigError("config error: cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int run_one(nfkit::ExperimentKind kind, const ExperimentArgs &args) {
    nfkit::ExperimentConfig cfg;
    try {
        cfg = nfkit::parse_config(read_file(args.config_path));
        if (cfg.experiment != kind)
            throw nfkit::ConfigError("config error: file declares experiment '" +
                                     nfkit::experiment_name(cfg.experiment) +
                                     "' but the subcommand is '" + nfkit::experiment_name(kind) +
                                     "'");
        if (args.seed >= 0)
            cfg.seed = static_cast<std::uint64_t>(args.seed);
        if (!args.out_path.empty())
            cfg.output_path = args.out_path;
        if (args.trials >= 0)
            cfg.numbers["trials"] = static_cast<double>(args.trials);
        if (args.elements_per_ap >= 0)
            cfg.numbers["elements_per_ap"] = static_cast<double>(args.elements_per_ap);
        if (!std::isnan(args.noise_db_m2))
            cfg.numbers["noise_db_m2"] = args.noise_db_m2;
    } catch (const nfkit::ConfigError &e) {
        std::cerr << e.what() << "\n";
        return exit_config_error;
    }

    try {
        const nfkit::ResultTable table = nfkit::run_experiment(cfg);
        if (cfg.output_path.empty())
            std::cout << table.to_csv();
        else
            std::cerr << "wrote " << table.rows.size() << " rows to " << cfg.output_path << "\n";
    } catch (const nfkit::ConfigError &e) {
        std::cerr << e.what() << "\n";
        return exit_config_error;
    } catch (const std::exception &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical_failure;
    }
    return exit_ok;
}

int run_self_check(bool full) {
    const auto options =
        full ? nfkit::acceptance::Options::full() : nfkit::acceptance::Options::reduced();
    const auto results = nfkit::acceptance::run_all(options);
    std::cout << nfkit::acceptance::format_report(results);
    for (const auto &r : results)
        if (!r.passed)
            return exit_check_failure;
    return exit_ok;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"near-field array propagation experiments"};
    app.require_subcommand(1);

    std::map<std::string, nfkit::ExperimentKind> kinds;
    std::map<std::string, ExperimentArgs> args;
    for (const auto &[kind, name] : nfkit::experiment_names()) {
        kinds[name] = kind;
        auto *sub = app.add_subcommand(name, "run the " + name + " experiment");
        auto &a = args[name];
        sub->add_option("--config", a.config_path, "experiment config file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", a.seed, "override the config seed");
        sub->add_option("--out", a.out_path, "override the CSV output path");
        if (kind == nfkit::ExperimentKind::positioning) {
            sub->add_option("--trials", a.trials, "override the trial count");
            sub->add_option("--elements-per-ap", a.elements_per_ap,
                            "override elements per access point");
            sub->add_option("--noise-db-m2", a.noise_db_m2,
                            "override the range noise variance in dB m^2");
        }
    }

    bool check_full = false;
    auto *check = app.add_subcommand("self-check", "run the acceptance criteria");
    check->add_flag("--full", check_full, "full trial counts instead of the quick variant");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e); // prints help or the parse diagnostic
        return rc == 0 ? exit_ok : exit_config_error;
    }

    if (check->parsed())
        return run_self_check(check_full);
    for (const auto &[name, kind] : kinds)
        if (app.get_subcommand(name)->parsed())
            return run_one(kind, args[name]);
    return exit_config_error;
}
