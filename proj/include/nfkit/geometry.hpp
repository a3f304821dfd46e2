// SPDX-License-Identifier: Apache-2.0
//
// nfkit: near-field antenna array propagation and simulation toolkit
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef NFKIT_GEOMETRY_HPP
#define NFKIT_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "common.hpp"

namespace nfkit {

enum class ArrayKind { ula, upa };

// Antenna array layout. The reference point is the element centroid and all
// phases elsewhere in the library are taken relative to it. `axis` is the
// element axis for a ULA (first panel axis for a UPA) and `normal` the
// boresight direction; both are unit vectors and orthogonal to each other.
struct ArrayGeometry {
    ArrayKind kind = ArrayKind::ula;
    double spacing_m = 0.0;
    std::vector<Vec3> element_positions;
    Vec3 normal = Vec3::UnitX();
    Vec3 axis = Vec3::UnitY();
    Vec3 reference_point = Vec3::Zero();
    double aperture_m = 0.0; // max pairwise element distance

    std::size_t size() const { return element_positions.size(); }
};

inline ArrayGeometry make_ula(std::size_t n_elements, double spacing_m,
                              const Vec3 &center = Vec3::Zero(),
                              const Vec3 &axis = Vec3::UnitY(),
                              const Vec3 &normal = Vec3::UnitX()) {
    require_arg(n_elements >= 1, "make_ula: need at least one element");
    require_arg(spacing_m > 0.0 || n_elements == 1, "make_ula: spacing must be positive");
    require_arg(std::abs(axis.norm() - 1.0) < 1e-9, "make_ula: axis must be unit norm");
    require_arg(std::abs(normal.norm() - 1.0) < 1e-9, "make_ula: normal must be unit norm");
    require_arg(std::abs(axis.dot(normal)) < 1e-9, "make_ula: axis and normal must be orthogonal");

    ArrayGeometry g;
    g.kind = ArrayKind::ula;
    g.spacing_m = spacing_m;
    g.normal = normal;
    g.axis = axis;
    g.reference_point = center;
    g.element_positions.reserve(n_elements);
    const double half = (static_cast<double>(n_elements) - 1.0) / 2.0;
    for (std::size_t i = 0; i < n_elements; ++i)
        g.element_positions.push_back(center + (static_cast<double>(i) - half) * spacing_m * axis);
    g.aperture_m = (static_cast<double>(n_elements) - 1.0) * spacing_m;
    return g;
}

inline ArrayGeometry make_upa(std::size_t nx, std::size_t ny, double spacing_m,
                              const Vec3 &center = Vec3::Zero(),
                              const Vec3 &axis1 = Vec3::UnitY(),
                              const Vec3 &axis2 = Vec3::UnitZ(),
                              const Vec3 &normal = Vec3::UnitX()) {
    require_arg(nx >= 1 && ny >= 1, "make_upa: need at least one element per axis");
    require_arg(spacing_m > 0.0 || nx * ny == 1, "make_upa: spacing must be positive");
    require_arg(std::abs(axis1.dot(axis2)) < 1e-9, "make_upa: panel axes must be orthogonal");
    require_arg(std::abs(axis1.dot(normal)) < 1e-9 && std::abs(axis2.dot(normal)) < 1e-9,
                "make_upa: normal must be orthogonal to the panel");

    ArrayGeometry g;
    g.kind = ArrayKind::upa;
    g.spacing_m = spacing_m;
    g.normal = normal;
    g.axis = axis1;
    g.reference_point = center;
    g.element_positions.reserve(nx * ny);
    const double hx = (static_cast<double>(nx) - 1.0) / 2.0;
    const double hy = (static_cast<double>(ny) - 1.0) / 2.0;
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i)
            g.element_positions.push_back(center +
                                          (static_cast<double>(i) - hx) * spacing_m * axis1 +
                                          (static_cast<double>(j) - hy) * spacing_m * axis2);
    // panel diagonal
    g.aperture_m = spacing_m * std::hypot(static_cast<double>(nx) - 1.0,
                                          static_cast<double>(ny) - 1.0);
    return g;
}

// Point at the given bearing and range in the (normal, axis) plane,
// measured from the array reference point. angle 0 is boresight.
inline Vec3 point_at(const ArrayGeometry &g, double angle_rad, double distance_m) {
    return g.reference_point +
           distance_m * (std::cos(angle_rad) * g.normal + std::sin(angle_rad) * g.axis);
}

inline ArrayGeometry translated(const ArrayGeometry &g, const Vec3 &new_reference) {
    ArrayGeometry out = g;
    const Vec3 shift = new_reference - g.reference_point;
    for (auto &p : out.element_positions)
        p += shift;
    out.reference_point = new_reference;
    return out;
}

// Carrier description. Subcarriers, when present, are strictly increasing
// and bracket the carrier frequency.
struct CarrierConfig {
    double carrier_frequency_hz = 0.0;
    double wavelength_m = 0.0;
    std::vector<double> subcarriers_hz; // empty for narrowband operation

    static CarrierConfig narrowband(double carrier_frequency_hz) {
        require_arg(carrier_frequency_hz > 0.0, "CarrierConfig: frequency must be positive");
        CarrierConfig c;
        c.carrier_frequency_hz = carrier_frequency_hz;
        c.wavelength_m = speed_of_light_mps / carrier_frequency_hz;
        return c;
    }

    static CarrierConfig wideband(double carrier_frequency_hz, double bandwidth_hz,
                                  std::size_t n_subcarriers) {
        require_arg(bandwidth_hz >= 0.0, "CarrierConfig: bandwidth must be non-negative");
        require_arg(n_subcarriers >= 1, "CarrierConfig: need at least one subcarrier");
        CarrierConfig c = narrowband(carrier_frequency_hz);
        require_arg(bandwidth_hz < 2.0 * carrier_frequency_hz,
                    "CarrierConfig: bandwidth exceeds carrier");
        if (n_subcarriers == 1 || bandwidth_hz == 0.0) {
            c.subcarriers_hz.assign(1, carrier_frequency_hz);
            return c;
        }
        c.subcarriers_hz.reserve(n_subcarriers);
        const double f0 = carrier_frequency_hz - bandwidth_hz / 2.0;
        const double step = bandwidth_hz / (static_cast<double>(n_subcarriers) - 1.0);
        for (std::size_t m = 0; m < n_subcarriers; ++m)
            c.subcarriers_hz.push_back(f0 + static_cast<double>(m) * step);
        return c;
    }

    bool wideband_mode() const { return !subcarriers_hz.empty(); }
};

// Near/far-field boundaries of one aperture. reactive_limit <= fresnel <=
// rayleigh holds for any aperture (the reactive limit is one wavelength,
// clamped from above by the Fresnel distance for tiny apertures).
struct FieldBoundaries {
    double rayleigh_m = 0.0;
    double fresnel_m = 0.0;
    double reactive_limit_m = 0.0;
};

inline double rayleigh_distance(double aperture_m, double wavelength_m) {
    require_arg(wavelength_m > 0.0, "rayleigh_distance: wavelength must be positive");
    require_arg(aperture_m >= 0.0, "rayleigh_distance: aperture must be non-negative");
    return 2.0 * aperture_m * aperture_m / wavelength_m;
}

inline double fresnel_distance(double aperture_m, double wavelength_m) {
    require_arg(wavelength_m > 0.0, "fresnel_distance: wavelength must be positive");
    require_arg(aperture_m >= 0.0, "fresnel_distance: aperture must be non-negative");
    return 0.62 * std::sqrt(aperture_m * aperture_m * aperture_m / wavelength_m);
}

inline FieldBoundaries field_boundaries(const ArrayGeometry &g, double wavelength_m) {
    FieldBoundaries b;
    b.rayleigh_m = rayleigh_distance(g.aperture_m, wavelength_m);
    b.fresnel_m = fresnel_distance(g.aperture_m, wavelength_m);
    b.reactive_limit_m = std::min(wavelength_m, b.fresnel_m);
    return b;
}

enum class TaylorOrder { linear, parabolic };

// Largest absolute phase gap over the array between the exact spherical
// wavefront and its Taylor approximation about the reference point. The
// expansion variable is (element offset / range), projected on the source
// bearing, so off-boresight sources are handled directly.
inline double max_phase_error(const ArrayGeometry &g, const Vec3 &source, double wavelength_m,
                              TaylorOrder order) {
    require_arg(wavelength_m > 0.0, "max_phase_error: wavelength must be positive");
    const Vec3 rel = source - g.reference_point;
    const double range = rel.norm();
    require_arg(range > 1e-12, "max_phase_error: source coincides with the reference point");
    const Vec3 u = rel / range;

    double worst = 0.0;
    for (const Vec3 &p : g.element_positions) {
        const double exact = (source - p).norm();
        require_arg(exact > 1e-12, "max_phase_error: source coincides with an element");
        const Vec3 offset = p - g.reference_point;
        const double along = offset.dot(u);
        double approx = range - along;
        if (order == TaylorOrder::parabolic)
            approx += (offset.squaredNorm() - along * along) / (2.0 * range);
        worst = std::max(worst, std::abs(exact - approx));
    }
    return 2.0 * pi / wavelength_m * worst;
}

// Phase error at a given range maximised over the source bearing in the
// (normal, axis) plane. The classical pi/8 boundary distances are defined
// against this worst-case direction: for the linear order the worst bearing
// is boresight, for the parabolic order it sits near asin(1/sqrt(3)) off
// the array axis, where the cubic expansion term peaks.
inline double worst_case_phase_error(const ArrayGeometry &g, double distance_m,
                                     double wavelength_m, TaylorOrder order) {
    require_arg(distance_m > 0.0, "worst_case_phase_error: distance must be positive");
    const int coarse = 181;
    const double max_angle = 0.49 * pi; // stay off endfire where ranges degenerate
    double best_angle = 0.0, best = 0.0;
    for (int i = 0; i < coarse; ++i) {
        const double a = max_angle * static_cast<double>(i) / (coarse - 1);
        const double e = max_phase_error(g, point_at(g, a, distance_m), wavelength_m, order);
        if (e > best) {
            best = e;
            best_angle = a;
        }
    }
    // golden-section refinement around the coarse peak
    const double step = max_angle / (coarse - 1);
    double lo = std::max(0.0, best_angle - step), hi = std::min(max_angle, best_angle + step);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = max_phase_error(g, point_at(g, x1, distance_m), wavelength_m, order);
    double f2 = max_phase_error(g, point_at(g, x2, distance_m), wavelength_m, order);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = max_phase_error(g, point_at(g, x2, distance_m), wavelength_m, order);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = max_phase_error(g, point_at(g, x1, distance_m), wavelength_m, order);
        }
    }
    return std::max(best, std::max(f1, f2));
}

enum class FieldRegion { reactive_near, radiating_near, far };

inline FieldRegion classify_region(double distance_m, const ArrayGeometry &g,
                                   double wavelength_m) {
    require_arg(distance_m > 0.0, "classify_region: distance must be positive");
    const FieldBoundaries b = field_boundaries(g, wavelength_m);
    if (distance_m >= b.rayleigh_m)
        return FieldRegion::far;
    if (distance_m >= b.fresnel_m)
        return FieldRegion::radiating_near;
    return FieldRegion::reactive_near;
}

struct UniformPowerDistance {
    double distance_m = 0.0;
    bool capped = false; // true when the threshold is not reached below the Rayleigh distance
};

namespace detail {

inline double boresight_gain_spread_db(const ArrayGeometry &g, double distance_m) {
    const Vec3 source = g.reference_point + distance_m * g.normal;
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (const Vec3 &p : g.element_positions) {
        const double d = (source - p).norm();
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }
    // free-space amplitudes scale as 1/r, so the max/min gain ratio is dmax/dmin
    return 20.0 * std::log10(dmax / std::max(dmin, 1e-300));
}

} // namespace detail

// Boresight distance at which the per-element free-space gain spread across
// the array equals threshold_db, found by bisection. Capped at the Rayleigh
// distance when the spread stays above the threshold out to that range.
inline UniformPowerDistance uniform_power_distance(const ArrayGeometry &g, double wavelength_m,
                                                   double threshold_db) {
    require_arg(threshold_db > 0.0, "uniform_power_distance: threshold must be positive");
    require_arg(g.size() >= 2, "uniform_power_distance: need at least two elements");
    const double hi_limit = rayleigh_distance(g.aperture_m, wavelength_m);
    double lo = std::min(g.spacing_m, wavelength_m) * 1e-6;
    double hi = hi_limit;
    if (detail::boresight_gain_spread_db(g, hi) > threshold_db)
        return {hi_limit, true};
    if (detail::boresight_gain_spread_db(g, lo) < threshold_db)
        return {lo, false}; // spread never reaches the threshold; collapse to the floor
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (detail::boresight_gain_spread_db(g, mid) > threshold_db)
            lo = mid;
        else
            hi = mid;
    }
    return {0.5 * (lo + hi), false};
}

} // namespace nfkit

#endif
