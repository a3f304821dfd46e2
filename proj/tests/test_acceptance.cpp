// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

// Acceptance suite: runs every criterion at full trial counts and prints
// one PASS/FAIL line per criterion.

#include <catch2/catch.hpp>

#include <cstdio>

#include "nfkit/acceptance.hpp"

namespace {

const std::vector<nfkit::acceptance::CriterionResult> &results() {
    static const auto all = [] {
        auto r = nfkit::acceptance::run_all(nfkit::acceptance::Options::full());
        std::fputs(nfkit::acceptance::format_report(r).c_str(), stdout);
        std::fflush(stdout);
        return r;
    }();
    return all;
}

const nfkit::acceptance::CriterionResult &criterion(int id) {
    for (const auto &r : results())
        if (r.id == id)
            return r;
    throw std::logic_error("unknown criterion id");
}

} // namespace

TEST_CASE("criterion 1: field-boundary anchors") {
    const auto &r = criterion(1);
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("criterion 2: phase-error consistency") {
    const auto &r = criterion(2);
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("criterion 3: dof vs distance") {
    const auto &r = criterion(3);
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("criterion 4: dof vs aperture") {
    const auto &r = criterion(4);
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("criterion 5: positioning accuracy") {
    const auto &r = criterion(5);
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("criterion 6: beam-split and true time delay") {
    const auto &r = criterion(6);
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("criterion 7: polar-domain sparsity") {
    const auto &r = criterion(7);
    INFO(r.detail);
    CHECK(r.passed);
}

TEST_CASE("criterion 8: property suite") {
    const auto &r = criterion(8);
    INFO(r.detail);
    CHECK(r.passed);
}
