// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef NFKIT_CONFIG_HPP
#define NFKIT_CONFIG_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "common.hpp"
#include "result_table.hpp"

// Declarative experiment configs: flat `key = value` text with `#` comments.
// Keys carry explicit SI units in their names (carrier_frequency_hz,
// distance_m, ...). Parsing is strict: unknown keys, malformed numbers and
// unit violations are each rejected with the offending key and line.

namespace nfkit {

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string &what) : std::runtime_error(what) {}
};

enum class ExperimentKind {
    boundaries,
    power_profile,
    angular_spread,
    beamsplit,
    gain_map,
    dof_distance,
    dof_aperture,
    estimate,
    positioning,
};

inline const std::vector<std::pair<ExperimentKind, std::string>> &experiment_names() {
    static const std::vector<std::pair<ExperimentKind, std::string>> names = {
        {ExperimentKind::boundaries, "boundaries"},
        {ExperimentKind::power_profile, "power_profile"},
        {ExperimentKind::angular_spread, "angular_spread"},
        {ExperimentKind::beamsplit, "beamsplit"},
        {ExperimentKind::gain_map, "gain_map"},
        {ExperimentKind::dof_distance, "dof_distance"},
        {ExperimentKind::dof_aperture, "dof_aperture"},
        {ExperimentKind::estimate, "estimate"},
        {ExperimentKind::positioning, "positioning"},
    };
    return names;
}

inline std::string experiment_name(ExperimentKind kind) {
    for (const auto &[k, n] : experiment_names())
        if (k == kind)
            return n;
    return "?";
}

inline std::optional<ExperimentKind> experiment_from_name(const std::string &name) {
    for (const auto &[k, n] : experiment_names())
        if (n == name)
            return k;
    return std::nullopt;
}

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::boundaries;
    std::uint64_t seed = 0;
    std::string output_path;

    std::map<std::string, double> numbers;            // scalar parameters (ints included)
    std::map<std::string, std::string> choices;       // enumerated string parameters
    std::map<std::string, std::vector<double>> lists; // comma-separated numeric lists
    std::map<std::string, std::vector<std::vector<double>>> rows; // repeated structured keys

    double number(const std::string &key) const { return numbers.at(key); }
    long integer(const std::string &key) const {
        return static_cast<long>(std::llround(numbers.at(key)));
    }
    const std::string &choice(const std::string &key) const { return choices.at(key); }
    bool has(const std::string &key) const {
        return numbers.count(key) || choices.count(key) || lists.count(key) || rows.count(key);
    }
};

namespace config_detail {

enum class ValueKind { real, integer, choice, real_list, integer_list, row };

struct KeySpec {
    std::string key;
    ValueKind kind = ValueKind::real;
    bool required = false;
    // numeric constraints
    bool positive = false;     // value > 0
    bool non_negative = false; // value >= 0
    double min_value = -std::numeric_limits<double>::infinity();
    double max_value = std::numeric_limits<double>::infinity();
    bool exclusive_max = false;
    // defaults / enumerations
    std::optional<double> default_number;
    std::vector<std::string> allowed; // for choice kind
    std::string default_choice;
    std::size_t row_fields = 0; // for row kind
    std::size_t min_rows = 0;
};

inline KeySpec real_key(std::string key, bool required, bool positive,
                        std::optional<double> def = std::nullopt) {
    KeySpec s;
    s.key = std::move(key);
    s.kind = ValueKind::real;
    s.required = required;
    s.positive = positive;
    s.default_number = def;
    return s;
}

inline KeySpec int_key(std::string key, bool required, double min_value,
                       std::optional<double> def = std::nullopt) {
    KeySpec s;
    s.key = std::move(key);
    s.kind = ValueKind::integer;
    s.required = required;
    s.min_value = min_value;
    s.default_number = def;
    return s;
}

inline KeySpec choice_key(std::string key, std::vector<std::string> allowed,
                          std::string def, bool required = false) {
    KeySpec s;
    s.key = std::move(key);
    s.kind = ValueKind::choice;
    s.required = required;
    s.allowed = std::move(allowed);
    s.default_choice = std::move(def);
    return s;
}

inline KeySpec row_key(std::string key, std::size_t fields, std::size_t min_rows) {
    KeySpec s;
    s.key = std::move(key);
    s.kind = ValueKind::row;
    s.row_fields = fields;
    s.min_rows = min_rows;
    return s;
}

// Schema for one experiment. `seed` and `output_path` are accepted for
// every experiment and handled separately.
inline std::vector<KeySpec> schema_for(ExperimentKind kind) {
    using K = ExperimentKind;
    std::vector<KeySpec> s;
    auto real_list_key = [](std::string key, bool required, bool non_negative) {
        KeySpec k;
        k.key = std::move(key);
        k.kind = ValueKind::real_list;
        k.required = required;
        k.non_negative = non_negative;
        return k;
    };
    auto int_list_key = [](std::string key, bool required, double min_value) {
        KeySpec k;
        k.key = std::move(key);
        k.kind = ValueKind::integer_list;
        k.required = required;
        k.min_value = min_value;
        return k;
    };

    switch (kind) {
    case K::boundaries:
        s.push_back(real_key("carrier_frequency_hz", true, true));
        s.push_back(real_list_key("aperture_m", true, true));
        s.push_back(int_key("n_elements", false, 2));
        s.push_back(real_key("upd_threshold_db", false, true, 3.0));
        break;
    case K::power_profile:
        s.push_back(real_key("carrier_frequency_hz", true, true));
        s.push_back(int_key("n_elements", true, 1));
        s.push_back(real_key("spacing_m", false, true));
        s.push_back(choice_key("amplitude", {"unit", "free_space"}, "free_space"));
        s.push_back(row_key("scatterer", 6, 0));
        s.push_back(real_key("los_angle_rad", false, false));
        s.push_back(real_key("los_distance_m", false, true));
        break;
    case K::angular_spread:
        s.push_back(real_key("carrier_frequency_hz", true, true));
        s.push_back(int_key("n_elements", true, 1));
        s.push_back(real_key("spacing_m", false, true));
        s.push_back(choice_key("dictionary", {"fourier", "polar"}, "", true));
        s.push_back(real_key("beta", false, true, 1.2));
        s.push_back(int_key("n_angles", false, 1));
        s.push_back(choice_key("amplitude", {"unit", "free_space"}, "unit"));
        s.push_back(row_key("scatterer", 6, 1));
        break;
    case K::beamsplit: {
        s.push_back(real_key("carrier_frequency_hz", true, true));
        s.push_back(int_key("n_elements", true, 1));
        s.push_back(real_key("spacing_m", false, true));
        KeySpec fb = real_key("fractional_bandwidth", false, true, 0.1);
        fb.max_value = 2.0;
        fb.exclusive_max = true;
        s.push_back(fb);
        s.push_back(int_key("n_subcarriers", false, 1, 129));
        s.push_back(real_key("focal_angle_rad", false, false, 0.0));
        s.push_back(real_key("focal_distance_m", true, true));
        s.push_back(choice_key("weights", {"phase_only", "time_delay"}, "phase_only"));
        s.push_back(int_key("n_grid_angles", false, 2, 257));
        s.push_back(int_key("n_grid_distances", false, 2, 129));
        break;
    }
    case K::gain_map:
        s.push_back(real_key("carrier_frequency_hz", true, true));
        s.push_back(int_key("n_elements", true, 1));
        s.push_back(real_key("spacing_m", false, true));
        s.push_back(real_key("focal_angle_rad", false, false, 0.0));
        s.push_back(real_key("focal_distance_m", true, true));
        s.push_back(int_key("n_grid_angles", false, 2, 257));
        s.push_back(int_key("n_grid_distances", false, 2, 129));
        break;
    case K::dof_distance: {
        s.push_back(real_key("carrier_frequency_hz", true, true));
        s.push_back(int_key("tx_elements", true, 1));
        s.push_back(int_key("rx_elements", true, 1));
        KeySpec ang = real_key("rx_angle_rad", false, false, 0.0);
        ang.non_negative = true;
        ang.max_value = pi / 2.0;
        ang.exclusive_max = true;
        s.push_back(ang);
        KeySpec el = real_key("energy_loss", false, true, 0.01);
        el.max_value = 1.0;
        el.exclusive_max = true;
        s.push_back(el);
        s.push_back(real_key("distance_min_m", true, true));
        s.push_back(real_key("distance_max_m", true, true));
        s.push_back(int_key("n_points", false, 2, 40));
        s.push_back(choice_key("amplitude", {"unit", "free_space"}, "free_space"));
        break;
    }
    case K::dof_aperture: {
        s.push_back(real_key("carrier_frequency_hz", true, true));
        s.push_back(int_list_key("tx_elements", true, 1));
        s.push_back(int_key("rx_elements", true, 1));
        s.push_back(real_key("distance_m", true, true));
        KeySpec ang = real_key("rx_angle_rad", false, false, 0.0);
        ang.non_negative = true;
        ang.max_value = pi / 2.0;
        ang.exclusive_max = true;
        s.push_back(ang);
        KeySpec el = real_key("energy_loss", false, true, 0.01);
        el.max_value = 1.0;
        el.exclusive_max = true;
        s.push_back(el);
        s.push_back(choice_key("amplitude", {"unit", "free_space"}, "free_space"));
        break;
    }
    case K::estimate:
        s.push_back(real_key("carrier_frequency_hz", true, true));
        s.push_back(int_key("n_elements", true, 1));
        s.push_back(choice_key("dictionary", {"fourier", "polar"}, "polar"));
        s.push_back(real_key("beta", false, true, 1.2));
        s.push_back(int_key("n_angles", false, 1));
        s.push_back(int_key("sparsity", false, 1));
        s.push_back(real_key("residual_tol", false, false, 0.0));
        s.push_back(choice_key("sensing", {"identity", "subsampled"}, "identity"));
        s.push_back(int_key("n_pilots", false, 1));
        s.push_back(row_key("path", 4, 1));
        break;
    case K::positioning:
        s.push_back(real_key("carrier_frequency_hz", false, true, 300e9));
        s.push_back(int_key("elements_per_ap", true, 1));
        s.push_back(real_key("noise_db_m2", false, false, 15.0));
        s.push_back(int_key("trials", true, 1));
        s.push_back(real_key("user_x_m", false, false, 3.0));
        s.push_back(real_key("user_y_m", false, false, 3.0));
        s.push_back(choice_key("solver", {"linear", "gauss_newton"}, "linear"));
        s.push_back(row_key("access_point", 3, 0));
        break;
    }
    return s;
}

inline std::string trim(const std::string &s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_number(const std::string &text) {
    const std::string t = trim(text);
    if (t.empty())
        return std::nullopt;
    double v = 0.0;
    const char *begin = t.data();
    const char *end = t.data() + t.size();
    const auto res = std::from_chars(begin, end, v, std::chars_format::general);
    if (res.ec != std::errc() || res.ptr != end)
        return std::nullopt;
    return v;
}

inline std::vector<std::string> split_commas(const std::string &text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            parts.push_back(trim(text.substr(start)));
            break;
        }
        parts.push_back(trim(text.substr(start, comma - start)));
        start = comma + 1;
    }
    return parts;
}

[[noreturn]] inline void fail(const std::string &message, int line) {
    throw ConfigError("config error: " + message + " (line " + std::to_string(line) + ")");
}

inline void check_scalar(const KeySpec &spec, double v, int line) {
    if (spec.kind == ValueKind::integer || spec.kind == ValueKind::integer_list) {
        if (std::abs(v - std::llround(v)) > 0.0)
            fail("value for '" + spec.key + "' must be an integer", line);
        if (v < spec.min_value)
            fail("unit violation for '" + spec.key + "': must be >= " +
                     format_number(spec.min_value),
                 line);
        return;
    }
    if (spec.positive && !(v > 0.0))
        fail("unit violation for '" + spec.key + "': must be positive", line);
    if (spec.non_negative && v < 0.0)
        fail("unit violation for '" + spec.key + "': must be non-negative", line);
    if (v < spec.min_value)
        fail("unit violation for '" + spec.key + "': must be >= " + format_number(spec.min_value),
             line);
    if (spec.exclusive_max ? v >= spec.max_value : v > spec.max_value)
        fail("unit violation for '" + spec.key + "': must be below " +
                 format_number(spec.max_value),
             line);
}

} // namespace config_detail

// Parses and validates an experiment config; defaults are filled in so the
// returned object is complete. Throws ConfigError with the offending key
// and line on any problem.
inline ExperimentConfig parse_config(const std::string &text) {
    using namespace config_detail;

    // first pass: collect raw key/value pairs with line numbers
    std::vector<std::pair<std::string, std::pair<std::string, int>>> pairs;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string line =
            nl == std::string::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail("syntax error: expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            fail("syntax error: empty key", line_no);
        if (value.empty())
            fail("syntax error: empty value for '" + key + "'", line_no);
        pairs.emplace_back(key, std::make_pair(value, line_no));
    }

    // experiment key decides the schema
    ExperimentConfig cfg;
    bool have_experiment = false;
    for (const auto &[key, vl] : pairs)
        if (key == "experiment") {
            if (have_experiment)
                fail("duplicate key 'experiment'", vl.second);
            const auto kind = experiment_from_name(vl.first);
            if (!kind)
                fail("unknown experiment '" + vl.first + "'", vl.second);
            cfg.experiment = *kind;
            have_experiment = true;
        }
    if (!have_experiment)
        throw ConfigError("config error: missing required key 'experiment'");

    const std::vector<KeySpec> schema = schema_for(cfg.experiment);
    auto find_spec = [&](const std::string &key) -> const KeySpec * {
        for (const auto &s : schema)
            if (s.key == key)
                return &s;
        return nullptr;
    };

    bool have_seed = false;
    for (const auto &[key, vl] : pairs) {
        const auto &[value, line] = vl;
        if (key == "experiment")
            continue;
        if (key == "seed") {
            if (have_seed)
                fail("duplicate key 'seed'", line);
            const auto num = parse_number(value);
            if (!num || *num < 0 || std::abs(*num - std::llround(*num)) > 0.0)
                fail("value for 'seed' must be a non-negative integer", line);
            cfg.seed = static_cast<std::uint64_t>(std::llround(*num));
            have_seed = true;
            continue;
        }
        if (key == "output_path") {
            if (!cfg.output_path.empty())
                fail("duplicate key 'output_path'", line);
            cfg.output_path = value;
            continue;
        }
        const KeySpec *spec = find_spec(key);
        if (!spec)
            fail("unknown key '" + key + "' for experiment '" +
                     experiment_name(cfg.experiment) + "'",
                 line);

        switch (spec->kind) {
        case ValueKind::real:
        case ValueKind::integer: {
            if (cfg.numbers.count(key))
                fail("duplicate key '" + key + "'", line);
            const auto num = parse_number(value);
            if (!num)
                fail("invalid number for '" + key + "'", line);
            check_scalar(*spec, *num, line);
            cfg.numbers[key] = *num;
            break;
        }
        case ValueKind::choice: {
            if (cfg.choices.count(key))
                fail("duplicate key '" + key + "'", line);
            bool ok = false;
            for (const auto &a : spec->allowed)
                ok = ok || a == value;
            if (!ok)
                fail("invalid value '" + value + "' for '" + key + "'", line);
            cfg.choices[key] = value;
            break;
        }
        case ValueKind::real_list:
        case ValueKind::integer_list: {
            if (cfg.lists.count(key))
                fail("duplicate key '" + key + "'", line);
            std::vector<double> items;
            for (const auto &part : split_commas(value)) {
                const auto num = parse_number(part);
                if (!num)
                    fail("invalid number in list '" + key + "'", line);
                check_scalar(*spec, *num, line);
                items.push_back(*num);
            }
            cfg.lists[key] = std::move(items);
            break;
        }
        case ValueKind::row: {
            const auto parts = split_commas(value);
            if (parts.size() != spec->row_fields)
                fail("key '" + key + "' expects " + std::to_string(spec->row_fields) +
                         " comma-separated values",
                     line);
            std::vector<double> row;
            for (const auto &part : parts) {
                const auto num = parse_number(part);
                if (!num)
                    fail("invalid number in '" + key + "' row", line);
                row.push_back(*num);
            }
            cfg.rows[key].push_back(std::move(row));
            break;
        }
        }
    }

    // required keys, defaults, cross-key rules
    for (const auto &spec : schema) {
        const bool present = cfg.has(spec.key);
        if (!present && spec.required)
            throw ConfigError("config error: missing required key '" + spec.key +
                              "' for experiment '" + experiment_name(cfg.experiment) + "'");
        if (!present) {
            if (spec.kind == ValueKind::choice && !spec.default_choice.empty())
                cfg.choices[spec.key] = spec.default_choice;
            else if ((spec.kind == ValueKind::real || spec.kind == ValueKind::integer) &&
                     spec.default_number)
                cfg.numbers[spec.key] = *spec.default_number;
        }
        if (spec.kind == ValueKind::row && cfg.rows[spec.key].size() < spec.min_rows)
            throw ConfigError("config error: experiment '" + experiment_name(cfg.experiment) +
                              "' needs at least " + std::to_string(spec.min_rows) + " '" +
                              spec.key + "' row(s)");
    }

    if (cfg.experiment == ExperimentKind::positioning && !have_seed)
        throw ConfigError("config error: positioning requires an explicit 'seed'");
    if (cfg.experiment == ExperimentKind::power_profile && cfg.rows["scatterer"].empty() &&
        !cfg.numbers.count("los_distance_m"))
        throw ConfigError("config error: power_profile needs a scatterer row or a LoS path");
    if (cfg.numbers.count("los_angle_rad") != cfg.numbers.count("los_distance_m"))
        throw ConfigError("config error: los_angle_rad and los_distance_m must appear together");
    if (cfg.experiment == ExperimentKind::estimate &&
        cfg.choices["sensing"] == "subsampled" && !cfg.numbers.count("n_pilots"))
        throw ConfigError("config error: subsampled sensing requires 'n_pilots'");

    // keys that only drive one branch of an experiment are rejected on the
    // other branch rather than silently ignored
    auto was_given = [&pairs](const char *key) {
        for (const auto &[k, vl] : pairs)
            if (k == key)
                return true;
        return false;
    };
    const bool polar_params = was_given("beta") || was_given("n_angles");
    if ((cfg.experiment == ExperimentKind::angular_spread ||
         cfg.experiment == ExperimentKind::estimate) &&
        cfg.choices["dictionary"] == "fourier") {
        if (polar_params)
            throw ConfigError(
                "config error: 'beta' and 'n_angles' apply only to the polar dictionary");
        cfg.numbers.erase("beta");
        cfg.numbers.erase("n_angles");
    }
    if (cfg.experiment == ExperimentKind::estimate && cfg.choices["sensing"] == "identity" &&
        was_given("n_pilots"))
        throw ConfigError("config error: 'n_pilots' applies only to subsampled sensing");
    if (cfg.experiment == ExperimentKind::boundaries && !cfg.numbers.count("n_elements")) {
        if (was_given("upd_threshold_db"))
            throw ConfigError("config error: 'upd_threshold_db' requires 'n_elements'");
        cfg.numbers.erase("upd_threshold_db");
    }
    return cfg;
}

// Canonical re-serialisation: sorted keys, canonical number formatting.
// serialize_config(parse_config(x)) is the normal form of x.
inline std::string serialize_config(const ExperimentConfig &cfg) {
    std::string out;
    out += "experiment = " + experiment_name(cfg.experiment) + "\n";
    out += "seed = " + std::to_string(cfg.seed) + "\n";
    if (!cfg.output_path.empty())
        out += "output_path = " + cfg.output_path + "\n";
    for (const auto &[key, value] : cfg.numbers)
        out += key + " = " + format_number(value) + "\n";
    for (const auto &[key, value] : cfg.choices)
        out += key + " = " + value + "\n";
    for (const auto &[key, items] : cfg.lists) {
        out += key + " = ";
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i)
                out += ", ";
            out += format_number(items[i]);
        }
        out += "\n";
    }
    for (const auto &[key, rows] : cfg.rows)
        for (const auto &row : rows) {
            out += key + " = ";
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i)
                    out += ", ";
                out += format_number(row[i]);
            }
            out += "\n";
        }
    return out;
}

} // namespace nfkit

#endif
