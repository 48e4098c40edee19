// SPDX-License-Identifier: Apache-2.0
//
// trilat  Tri-antenna phase-shift landing simulation library
// Copyright (C) 2026 trilat contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trilat/detection.hpp"
#include "trilat/geometry.hpp"

namespace trilat {

/// Design-curve solvers for the tracking area, its extrema, the tracking-cone
/// half angle, detector sensitivity and ADC step distance.
///
/// These curves are planar-wave (incident-direction) evaluations: the phase
/// model here is th_ij = u.(OP_j - OP_i) * 360 f / c with u the unit vector
/// toward the LP.  That is the model behind the published design figures;
/// the exact near-field solver diverges from them by several millimeters at
/// the lowest altitudes.  The exact pairwise model stays in geometry.hpp and
/// is cross-checked against this one in the far field by the test suite.
///
/// Note on orientation: evaluating the equations puts the boundary minima at
/// phi = n*60 deg and the maxima at 30 + n*60 deg (the radii themselves match
/// the published min/max values).
struct TrackingBoundary {
    double altitude = 0.0;      // m
    double phase_limit = 80.0;  // deg
    std::vector<std::pair<double, double>> samples; // (phi deg in [0,360), r_max m)
};

struct DesignPoint {
    double spacing_d = 0.0;          // m
    double r_min = 0.0;              // m
    double r_max = 0.0;              // m
    double sensitivity_mv_per_cm = 0.0;
    std::vector<double> adc_step_cm; // one entry per requested bit depth
};

/// Largest pairwise |phase| under the planar-wave model for an LP at polar
/// ground coordinates (r, phi) below altitude z.
inline double planar_max_abs_phase(const ArrayGeometry& geom, double r, double phi_deg, double altitude) {
    const double sin_tilt = r / std::sqrt(r * r + altitude * altitude);
    const double coeff = geom.phase_deg_per_meter() * geom.spacing_d * sin_tilt;
    const double p = deg_to_rad(phi_deg);
    const double g12 = std::cos(p);
    const double g23 = std::cos(p - deg_to_rad(60.0));
    const double g31 = std::cos(p + deg_to_rad(60.0));
    return coeff * std::max({std::abs(g12), std::abs(g23), std::abs(g31)});
}

/// Smallest radius at which the first pair saturates at phase_limit, found by
/// bisection (the max |phase| is monotone increasing in r at fixed phi and
/// altitude).  Returns nullopt when no crossing exists below r = 100*altitude.
inline std::optional<double> boundary_radius(const ArrayGeometry& geom, double altitude,
                                             double phi_deg, double phase_limit_deg) {
    geom.validate();
    if (!(altitude > 0.0)) throw std::invalid_argument("boundary_radius: altitude must be > 0");
    if (!(phase_limit_deg > 0.0 && phase_limit_deg <= 90.0))
        throw std::invalid_argument("boundary_radius: phase_limit must be in (0, 90]");

    double lo = 0.0;
    double hi = 0.25 * altitude;
    while (planar_max_abs_phase(geom, hi, phi_deg, altitude) < phase_limit_deg) {
        hi *= 2.0;
        if (hi > 100.0 * altitude) return std::nullopt; // unbounded
    }
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        if (planar_max_abs_phase(geom, mid, phi_deg, altitude) < phase_limit_deg)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Boundary curve sampled over [0, 360) at step_deg.
inline std::optional<TrackingBoundary> tracking_boundary(const ArrayGeometry& geom, double altitude,
                                                         double phase_limit_deg, double step_deg = 1.0) {
    if (!(step_deg > 0.0)) throw std::invalid_argument("tracking_boundary: step must be > 0");
    TrackingBoundary b;
    b.altitude = altitude;
    b.phase_limit = phase_limit_deg;
    for (double phi = 0.0; phi < 360.0 - 1e-9; phi += step_deg) {
        auto r = boundary_radius(geom, altitude, phi, phase_limit_deg);
        if (!r) return std::nullopt;
        b.samples.emplace_back(phi, *r);
    }
    return b;
}

namespace detail {

/// Golden-section minimization of a smooth unimodal function on [a, b].
template <typename F>
double golden_section_min(F f, double a, double b, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

} // namespace detail

/// Extrema of the boundary radius over phi: 1-degree sweep of one 60-degree
/// period followed by golden-section refinement around each candidate.
inline std::optional<std::pair<double, double>> min_max_radius(const ArrayGeometry& geom,
                                                               double altitude,
                                                               double phase_limit_deg) {
    double best_min = std::numeric_limits<double>::infinity();
    double best_max = -best_min;
    double phi_min = 0.0, phi_max = 0.0;
    for (int i = 0; i <= 60; ++i) { // curve is 60-degree periodic
        auto r = boundary_radius(geom, altitude, static_cast<double>(i), phase_limit_deg);
        if (!r) return std::nullopt;
        if (*r < best_min) { best_min = *r; phi_min = i; }
        if (*r > best_max) { best_max = *r; phi_max = i; }
    }
    auto radius_at = [&](double phi) {
        return boundary_radius(geom, altitude, phi, phase_limit_deg).value();
    };
    const double pmin = detail::golden_section_min(radius_at, phi_min - 1.0, phi_min + 1.0, 1e-3);
    const double pmax = detail::golden_section_min([&](double p) { return -radius_at(p); },
                                                   phi_max - 1.0, phi_max + 1.0, 1e-3);
    return std::make_pair(radius_at(pmin), radius_at(pmax));
}

/// Semi-vertical angle of the inverted tracking cone: angle between the
/// vertical and the line from the LP to the maximum-radius boundary point,
/// evaluated at z = 100*D where it is altitude-invariant.
inline std::optional<double> cone_half_angle(const ArrayGeometry& geom, double phase_limit_deg = 80.0) {
    const double z = 100.0 * geom.spacing_d;
    auto mm = min_max_radius(geom, z, phase_limit_deg);
    if (!mm) return std::nullopt;
    return rad_to_deg(std::atan2(mm->second, z));
}

/// Detector sensitivity in mV per cm of drone displacement across the full
/// tracking diameter, delta_vd / (2 * r_max).
inline std::optional<double> sensitivity_mv_per_cm(const ArrayGeometry& geom, double altitude,
                                                   double delta_vd_volts,
                                                   double phase_limit_deg = 80.0) {
    if (!(delta_vd_volts > 0.0)) throw std::invalid_argument("sensitivity: delta_vd must be > 0");
    auto mm = min_max_radius(geom, altitude, phase_limit_deg);
    if (!mm) return std::nullopt;
    return delta_vd_volts * 1000.0 / (2.0 * mm->second * 100.0);
}

/// Ground distance the drone must move to change one conversion level.
inline double adc_step_distance_cm(double sensitivity_mv_per_cm, const AdcModel& adc) {
    if (!(sensitivity_mv_per_cm > 0.0)) throw std::invalid_argument("adc_step_distance: sensitivity must be > 0");
    return adc.lsb_volts() * 1000.0 / sensitivity_mv_per_cm;
}

/// One row per antenna spacing: tracking extrema, sensitivity, and the ADC
/// step distance for each requested bit depth.
inline std::vector<DesignPoint> design_table(const std::vector<double>& d_values, double altitude,
                                             double frequency, const std::vector<int>& bit_depths,
                                             double delta_vd_volts = 2.6,
                                             double phase_limit_deg = 80.0) {
    if (d_values.empty()) throw std::invalid_argument("design_table: d_values must be non-empty");
    for (std::size_t i = 1; i < d_values.size(); ++i)
        if (d_values[i] <= d_values[i - 1]) throw std::invalid_argument("design_table: d_values must be ascending");

    std::vector<DesignPoint> table;
    table.reserve(d_values.size());
    for (double d : d_values) {
        ArrayGeometry g{d, frequency};
        DesignPoint pt;
        pt.spacing_d = d;
        auto mm = min_max_radius(g, altitude, phase_limit_deg);
        if (!mm) throw std::runtime_error("design_table: boundary unbounded at D = " + std::to_string(d));
        pt.r_min = mm->first;
        pt.r_max = mm->second;
        pt.sensitivity_mv_per_cm = delta_vd_volts * 1000.0 / (2.0 * pt.r_max * 100.0);
        for (int bits : bit_depths) {
            AdcModel adc;
            adc.bits = bits;
            pt.adc_step_cm.push_back(adc_step_distance_cm(pt.sensitivity_mv_per_cm, adc));
        }
        table.push_back(std::move(pt));
    }
    return table;
}

} // namespace trilat
