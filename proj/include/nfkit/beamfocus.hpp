// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef NFKIT_BEAMFOCUS_HPP
#define NFKIT_BEAMFOCUS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "channel.hpp"
#include "geometry.hpp"

namespace nfkit {

enum class BeamformerKind { phase_only, time_delay };

// Unit-norm transmit weights. phase_only weights are frequency flat (the
// same complex weights are applied at every subcarrier); time_delay weights
// carry per-element delays so the effective phase scales with frequency.
struct Beamformer {
    Eigen::VectorXcd weights; // unit Euclidean norm
    double design_frequency_hz = 0.0;
    BeamformerKind kind = BeamformerKind::phase_only;
    Eigen::VectorXd delays_s; // per element, only for time_delay
};

// Array gain pairing used throughout: gain(w, a) = |w^H a|.
inline double array_gain(const Beamformer &w, const ChannelVector &a) {
    return std::abs(w.weights.dot(a));
}

// Maximum ratio transmission toward the channel h: w = h / ||h||, so the
// focal gain |w^H h| equals ||h|| and no other unit-norm weight vector can
// exceed it (Cauchy-Schwarz).
inline Beamformer mrt_beamformer(const ChannelVector &h, double design_frequency_hz = 0.0) {
    const double norm = h.norm();
    require_arg(norm > 0.0, "mrt_beamformer: zero channel");
    Beamformer bf;
    bf.weights = h / norm;
    bf.design_frequency_hz = design_frequency_hz;
    bf.kind = BeamformerKind::phase_only;
    return bf;
}

// Effective weights of a beamformer at the given frequency. Frequency-flat
// weights are returned unchanged; time-delay weights become
// exp(-j 2 pi f tau_n) / sqrt(N).
inline Eigen::VectorXcd effective_weights(const Beamformer &bf, double frequency_hz) {
    if (bf.kind == BeamformerKind::phase_only)
        return bf.weights;
    require_arg(bf.delays_s.size() > 0, "effective_weights: missing per-element delays");
    const double scale = 1.0 / std::sqrt(static_cast<double>(bf.delays_s.size()));
    Eigen::VectorXcd w(bf.delays_s.size());
    for (Eigen::Index n = 0; n < w.size(); ++n)
        w[n] = std::polar(scale, -2.0 * pi * frequency_hz * bf.delays_s[n]);
    return w;
}

struct GainMap {
    Eigen::VectorXd angles_rad;
    Eigen::VectorXd distances_m;
    Eigen::MatrixXd gain_db; // angles x distances
};

// Radiated gain 20 log10 |w^H a(theta, r)| over an (angle, distance) grid,
// with a the unit-amplitude near-field steering vector.
inline GainMap focus_gain_map(const Beamformer &bf, const ArrayGeometry &g, double wavelength_m,
                              const Eigen::VectorXd &angles_rad,
                              const Eigen::VectorXd &distances_m) {
    require_arg(angles_rad.size() > 0 && distances_m.size() > 0,
                "focus_gain_map: empty evaluation grid");
    GainMap map;
    map.angles_rad = angles_rad;
    map.distances_m = distances_m;
    map.gain_db.resize(angles_rad.size(), distances_m.size());
    for (Eigen::Index i = 0; i < angles_rad.size(); ++i)
        for (Eigen::Index j = 0; j < distances_m.size(); ++j) {
            const ChannelVector a = nearfield_steering(
                g, point_at(g, angles_rad[i], distances_m[j]), wavelength_m);
            map.gain_db(i, j) = amplitude_db(std::abs(bf.weights.dot(a)));
        }
    return map;
}

// Default evaluation grids: angles uniform in sine, distances logarithmic
// from the Fresnel distance out to twice the Rayleigh distance.
inline Eigen::VectorXd default_angle_grid(std::size_t n = 257) {
    Eigen::VectorXd a(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k)
        a[static_cast<Eigen::Index>(k)] =
            std::asin((2.0 * static_cast<double>(k) - static_cast<double>(n) + 1.0) /
                      static_cast<double>(n));
    return a;
}

inline Eigen::VectorXd log_distance_grid(double lo_m, double hi_m, std::size_t n = 129) {
    require_arg(lo_m > 0.0 && hi_m > lo_m, "log_distance_grid: invalid range");
    Eigen::VectorXd d(static_cast<Eigen::Index>(n));
    const double ratio = std::log(hi_m / lo_m);
    for (std::size_t k = 0; k < n; ++k)
        d[static_cast<Eigen::Index>(k)] =
            lo_m * std::exp(ratio * static_cast<double>(k) /
                            static_cast<double>(n > 1 ? n - 1 : 1));
    return d;
}

inline Eigen::VectorXd default_distance_grid(const ArrayGeometry &g, double wavelength_m,
                                             std::size_t n = 129) {
    const FieldBoundaries b = field_boundaries(g, wavelength_m);
    return log_distance_grid(b.fresnel_m, 2.0 * b.rayleigh_m, n);
}

struct SubcarrierGain {
    double frequency_hz = 0.0;
    double focal_gain_db = 0.0;
    double argmax_angle_rad = 0.0;
    double argmax_distance_m = 0.0;
};

namespace detail {

inline void append_sorted_unique(std::vector<double> &v, double x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x)
        v.insert(it, x);
}

} // namespace detail

// Gain achieved at the focal point by an arbitrary beamformer at every
// subcarrier, plus the location of the grid argmax. The evaluation grid
// always contains the focal point itself.
inline std::vector<SubcarrierGain> wideband_focal_gains(const Beamformer &bf, double focal_angle,
                                                        double focal_distance,
                                                        const ArrayGeometry &g,
                                                        const CarrierConfig &carrier,
                                                        std::size_t n_grid_angles = 257,
                                                        std::size_t n_grid_distances = 129) {
    require_arg(carrier.wideband_mode(), "wideband_focal_gains: carrier has no subcarriers");
    require_arg(focal_distance > 0.0, "wideband_focal_gains: focal distance must be positive");

    std::vector<double> angles;
    {
        const Eigen::VectorXd base = default_angle_grid(n_grid_angles);
        angles.assign(base.data(), base.data() + base.size());
        detail::append_sorted_unique(angles, focal_angle);
    }
    std::vector<double> distances;
    {
        const FieldBoundaries b = field_boundaries(g, carrier.wavelength_m);
        const double lo = std::min(focal_distance / 4.0, b.fresnel_m);
        const double hi = std::max(2.0 * b.rayleigh_m, 4.0 * focal_distance);
        const Eigen::VectorXd base = log_distance_grid(lo, hi, n_grid_distances);
        distances.assign(base.data(), base.data() + base.size());
        detail::append_sorted_unique(distances, focal_distance);
    }

    std::vector<SubcarrierGain> out;
    out.reserve(carrier.subcarriers_hz.size());
    for (double fm : carrier.subcarriers_hz) {
        const double lambda_m = speed_of_light_mps / fm;
        const Eigen::VectorXcd w = effective_weights(bf, fm);

        SubcarrierGain row;
        row.frequency_hz = fm;
        row.focal_gain_db = amplitude_db(std::abs(
            w.dot(nearfield_steering(g, point_at(g, focal_angle, focal_distance), lambda_m))));
        double best = -std::numeric_limits<double>::infinity();
        for (double ang : angles)
            for (double dist : distances) {
                const double gain = std::abs(
                    w.dot(nearfield_steering(g, point_at(g, ang, dist), lambda_m)));
                if (gain > best) {
                    best = gain;
                    row.argmax_angle_rad = ang;
                    row.argmax_distance_m = dist;
                }
            }
        out.push_back(row);
    }
    return out;
}

// Beam-split characterisation: frequency-flat weights are matched to the
// focal point at the carrier frequency and then re-evaluated at every
// subcarrier, where the focal spot drifts and the focal gain degrades.
inline std::vector<SubcarrierGain> beamsplit_gain(double focal_angle, double focal_distance,
                                                  const ArrayGeometry &g,
                                                  const CarrierConfig &carrier,
                                                  std::size_t n_grid_angles = 257,
                                                  std::size_t n_grid_distances = 129) {
    require_arg(carrier.wideband_mode(), "beamsplit_gain: carrier has no subcarriers");
    const ChannelVector focal = nearfield_steering(
        g, point_at(g, focal_angle, focal_distance), carrier.wavelength_m);
    const Beamformer bf = mrt_beamformer(focal, carrier.carrier_frequency_hz);
    return wideband_focal_gains(bf, focal_angle, focal_distance, g, carrier, n_grid_angles,
                                n_grid_distances);
}

// True-time-delay beamformer: tau_n = (r_n - r_ref) / c aligns the focal
// phase at every frequency, so the focal gain stays at sqrt(N) across the
// whole band.
inline Beamformer ttd_beamformer(double focal_angle, double focal_distance,
                                 const ArrayGeometry &g, const CarrierConfig &carrier) {
    require_arg(focal_distance > 0.0, "ttd_beamformer: focal distance must be positive");
    const Vec3 source = point_at(g, focal_angle, focal_distance);
    const double r_ref = (source - g.reference_point).norm();

    Beamformer bf;
    bf.kind = BeamformerKind::time_delay;
    bf.design_frequency_hz = carrier.carrier_frequency_hz;
    bf.delays_s.resize(static_cast<Eigen::Index>(g.size()));
    for (Eigen::Index n = 0; n < bf.delays_s.size(); ++n) {
        const double r_n = (source - g.element_positions[static_cast<std::size_t>(n)]).norm();
        bf.delays_s[n] = (r_n - r_ref) / speed_of_light_mps;
    }
    bf.weights = effective_weights(bf, carrier.carrier_frequency_hz);
    return bf;
}

// |a(theta, r1)^H a(theta, r2)| / N with unit-amplitude steering vectors;
// the distance-domain correlation exploited by location-division access.
inline double focusing_correlation(double angle_rad, double r1_m, double r2_m,
                                   const ArrayGeometry &g, double wavelength_m) {
    const FieldBoundaries b = field_boundaries(g, wavelength_m);
    require_arg(r1_m > b.reactive_limit_m && r2_m > b.reactive_limit_m,
                "focusing_correlation: distances must exceed the reactive limit");
    const ChannelVector a1 = nearfield_steering(g, point_at(g, angle_rad, r1_m), wavelength_m);
    const ChannelVector a2 = nearfield_steering(g, point_at(g, angle_rad, r2_m), wavelength_m);
    return std::abs(a1.dot(a2)) / static_cast<double>(g.size());
}

// Uniform b-bit phase quantisation of frequency-flat weights; magnitudes
// are preserved and the result is renormalised.
inline Beamformer quantize_phases(const Beamformer &bf, unsigned bits) {
    require_arg(bits >= 1 && bits <= 62, "quantize_phases: bits out of range");
    require_arg(bf.kind == BeamformerKind::phase_only,
                "quantize_phases: only frequency-flat weights can be quantised");
    const double step = 2.0 * pi / static_cast<double>(1ULL << bits);
    Beamformer out = bf;
    for (Eigen::Index n = 0; n < out.weights.size(); ++n) {
        const double mag = std::abs(bf.weights[n]);
        const double phase = std::arg(bf.weights[n]);
        out.weights[n] = std::polar(mag, std::round(phase / step) * step);
    }
    out.weights.normalize();
    return out;
}

} // namespace nfkit

#endif
