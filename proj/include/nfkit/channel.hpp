// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef NFKIT_CHANNEL_HPP
#define NFKIT_CHANNEL_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "geometry.hpp"

namespace nfkit {

// Per-element amplitude handling. `unit` keeps every entry on the unit
// circle; `free_space` scales element n by lambda / (4 pi r_n).
enum class AmplitudeModel { unit, free_space };

// Spherical-wavefront steering vector. Entry n is
//   g_n * exp(-j * 2 pi / lambda * (r_n - r_ref))
// with r_n the exact element-to-source distance and r_ref the distance from
// the array reference point, so the common phase is removed.
inline ChannelVector nearfield_steering(const ArrayGeometry &g, const Vec3 &source,
                                        double wavelength_m,
                                        AmplitudeModel amplitude = AmplitudeModel::unit) {
    require_arg(wavelength_m > 0.0, "nearfield_steering: wavelength must be positive");
    const double r_ref = (source - g.reference_point).norm();
    require_arg(r_ref > 1e-12, "nearfield_steering: source coincides with the reference point");
    const double k = 2.0 * pi / wavelength_m;

    ChannelVector h(g.size());
    for (Eigen::Index n = 0; n < h.size(); ++n) {
        const double r_n = (source - g.element_positions[static_cast<std::size_t>(n)]).norm();
        require_arg(r_n > 1e-12, "nearfield_steering: source coincides with an element");
        const double gain =
            amplitude == AmplitudeModel::unit ? 1.0 : wavelength_m / (4.0 * pi * r_n);
        h[n] = std::polar(gain, -k * (r_n - r_ref));
    }
    return h;
}

// Planar-wavefront steering vector for a wave arriving from the unit
// bearing `direction` (pointing from the array toward the source). Entry n
// is exp(+j * 2 pi / lambda * <p_n - ref, direction>), the exact limit of
// nearfield_steering as the source recedes along that bearing.
inline ChannelVector farfield_steering(const ArrayGeometry &g, const Vec3 &direction,
                                       double wavelength_m) {
    require_arg(wavelength_m > 0.0, "farfield_steering: wavelength must be positive");
    require_arg(std::abs(direction.norm() - 1.0) < 1e-9,
                "farfield_steering: direction must be unit norm");
    const double k = 2.0 * pi / wavelength_m;

    ChannelVector h(g.size());
    for (Eigen::Index n = 0; n < h.size(); ++n) {
        const Vec3 offset = g.element_positions[static_cast<std::size_t>(n)] - g.reference_point;
        h[n] = std::polar(1.0, k * offset.dot(direction));
    }
    return h;
}

// Line-of-sight MIMO channel between two arrays from exact element-pair
// distances; entry (m, n) couples rx element m with tx element n.
inline ChannelMatrix los_mimo_channel(const ArrayGeometry &tx, const ArrayGeometry &rx,
                                      double wavelength_m,
                                      AmplitudeModel amplitude = AmplitudeModel::free_space) {
    require_arg(wavelength_m > 0.0, "los_mimo_channel: wavelength must be positive");
    const double k = 2.0 * pi / wavelength_m;

    ChannelMatrix H(rx.size(), tx.size());
    for (Eigen::Index m = 0; m < H.rows(); ++m) {
        const Vec3 &pm = rx.element_positions[static_cast<std::size_t>(m)];
        for (Eigen::Index n = 0; n < H.cols(); ++n) {
            const double d = (pm - tx.element_positions[static_cast<std::size_t>(n)]).norm();
            require_arg(d > 1e-12, "los_mimo_channel: arrays intersect");
            const double gain =
                amplitude == AmplitudeModel::unit ? 1.0 : wavelength_m / (4.0 * pi * d);
            H(m, n) = std::polar(gain, -k * d);
        }
    }
    return H;
}

// Point scatterer with a contiguous element visibility window
// [visible_begin, visible_end). Elements outside the window receive no
// contribution from this path.
struct Scatterer {
    Vec3 position = Vec3::Zero();
    Complex gain = Complex(1.0, 0.0);
    std::size_t visible_begin = 0;
    std::size_t visible_end = 0;
};

// Sum of scatterer paths (each restricted to its visibility window) plus an
// optional line-of-sight path that every element sees.
inline ChannelVector multipath_channel(const ArrayGeometry &g,
                                       const std::vector<Scatterer> &scatterers,
                                       double wavelength_m,
                                       AmplitudeModel amplitude = AmplitudeModel::unit,
                                       const std::optional<Vec3> &los_source = std::nullopt) {
    require_arg(!scatterers.empty() || los_source.has_value(),
                "multipath_channel: need at least one path");

    ChannelVector h = ChannelVector::Zero(static_cast<Eigen::Index>(g.size()));
    for (const Scatterer &s : scatterers) {
        require_arg(s.visible_begin < s.visible_end && s.visible_end <= g.size(),
                    "multipath_channel: empty or out-of-range visibility window");
        const ChannelVector a = nearfield_steering(g, s.position, wavelength_m, amplitude);
        for (std::size_t n = s.visible_begin; n < s.visible_end; ++n)
            h[static_cast<Eigen::Index>(n)] += s.gain * a[static_cast<Eigen::Index>(n)];
    }
    if (los_source)
        h += nearfield_steering(g, *los_source, wavelength_m, amplitude);
    return h;
}

// Per-element received power in dB; exact zeros map to the -300 dB floor.
inline Eigen::VectorXd power_profile(const ChannelVector &h) {
    Eigen::VectorXd p(h.size());
    for (Eigen::Index n = 0; n < h.size(); ++n)
        p[n] = amplitude_db(std::abs(h[n]));
    return p;
}

} // namespace nfkit

#endif
