// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef NFKIT_RESULT_TABLE_HPP
#define NFKIT_RESULT_TABLE_HPP

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "common.hpp"

namespace nfkit {

// Formats a double with 9 significant digits, locale independent. Infinite
// values print as the sentinels "inf" / "-inf"; NaN is rejected upstream.
inline std::string format_number(double value) {
    if (std::isinf(value))
        return value < 0.0 ? "-inf" : "inf";
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value,
                                      std::chars_format::general, 9);
    return std::string(buf, result.ptr);
}

// Rectangular numeric result set, serialised as CSV with a header line.
struct ResultTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row) {
        require_arg(row.size() == header.size(), "ResultTable: row width mismatch");
        for (double v : row)
            require_arg(!std::isnan(v), "ResultTable: NaN value");
        rows.push_back(std::move(row));
    }

    std::string to_csv() const {
        std::string out;
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c)
                out += ',';
            out += header[c];
        }
        out += '\n';
        for (const auto &row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c)
                    out += ',';
                out += format_number(row[c]);
            }
            out += '\n';
        }
        return out;
    }

    void write_csv(const std::string &path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("ResultTable: cannot open '" + path + "' for writing");
        f << to_csv();
    }
};

} // namespace nfkit

#endif
