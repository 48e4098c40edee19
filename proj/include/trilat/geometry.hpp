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

#include <array>
#include <cmath>
#include <stdexcept>

namespace trilat {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Right-handed drone body frame: array incenter at the origin, antennas in
/// the z = 0 plane, landing point below at negative z.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double horizontal_norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

/// Rotates v about the +z axis by `deg` counterclockwise.
inline Vec3 rotate_z(const Vec3& v, double deg) {
    const double a = deg_to_rad(deg);
    const double c = std::cos(a), s = std::sin(a);
    return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

/// Equilateral receive array: antenna spacing, beacon frequency and the
/// propagation speed used to convert path differences into phase.
struct ArrayGeometry {
    double spacing_d = 0.07;     // m, side of the equilateral triangle
    double frequency = 2.46e9;   // Hz
    double propagation_speed = kSpeedOfLight; // m/s

    void validate() const {
        if (!(spacing_d > 0.0)) throw std::invalid_argument("ArrayGeometry: spacing_d must be > 0");
        if (!(frequency > 0.0)) throw std::invalid_argument("ArrayGeometry: frequency must be > 0");
        if (!(propagation_speed > 0.0)) throw std::invalid_argument("ArrayGeometry: propagation_speed must be > 0");
    }

    double wavelength() const { return propagation_speed / frequency; }

    /// Degrees of pairwise phase shift per meter of path-length difference.
    double phase_deg_per_meter() const { return 360.0 * frequency / propagation_speed; }
};

/// Landing-point position in the drone body frame plus the drone yaw.
/// Yaw is measured counterclockwise about world Z (standard math convention,
/// matching phi_L measured counterclockwise from the +x body axis).
struct RelativePose {
    Vec3 lp_offset;             // m, LP position in the body frame, z < 0
    double drone_yaw_deg = 0.0;

    double altitude() const { return -lp_offset.z; }
    double horizontal_range() const { return lp_offset.horizontal_norm(); }
    double bearing_deg() const { return rad_to_deg(std::atan2(lp_offset.y, lp_offset.x)); }

    void validate() const {
        if (!(lp_offset.z < 0.0)) throw std::invalid_argument("RelativePose: lp_offset.z must be < 0 (LP below the array plane)");
        if (!std::isfinite(lp_offset.x) || !std::isfinite(lp_offset.y) || !std::isfinite(drone_yaw_deg))
            throw std::invalid_argument("RelativePose: components must be finite");
    }
};

/// Pairwise path-length differences, dd_ij = |OL-OP_i| - |OL-OP_j|.
struct PathDiffTriplet {
    double dd12 = 0.0;
    double dd23 = 0.0;
    double dd31 = 0.0;
};

/// Pairwise phase shifts in degrees, signed and unwrapped.
struct PhaseTriplet {
    double th12 = 0.0;
    double th23 = 0.0;
    double th31 = 0.0;
};

/// Antenna coordinates in the body frame.  P1 and P2 sit symmetric about the
/// y axis below it, P3 on +y; the incenter is the origin and all pairwise
/// distances equal spacing_d.
inline std::array<Vec3, 3> antenna_positions(const ArrayGeometry& geom) {
    geom.validate();
    const double d = geom.spacing_d;
    const double half_span_y = 0.5 * d * std::tan(deg_to_rad(30.0));
    const double apex_y = d / (2.0 * std::cos(deg_to_rad(30.0)));
    return {Vec3{0.5 * d, -half_span_y, 0.0},
            Vec3{-0.5 * d, -half_span_y, 0.0},
            Vec3{0.0, apex_y, 0.0}};
}

/// Exact Euclidean path differences (no far-field approximation).
inline PathDiffTriplet path_differences(const ArrayGeometry& geom, const RelativePose& pose) {
    pose.validate();
    const auto p = antenna_positions(geom);
    const double d1 = distance(pose.lp_offset, p[0]);
    const double d2 = distance(pose.lp_offset, p[1]);
    const double d3 = distance(pose.lp_offset, p[2]);
    return {d1 - d2, d2 - d3, d3 - d1};
}

/// Signed unwrapped pairwise phase shifts, th_ij = 360 f dd_ij / c in degrees.
inline PhaseTriplet phase_shifts(const ArrayGeometry& geom, const RelativePose& pose) {
    const PathDiffTriplet dd = path_differences(geom, pose);
    const double k = geom.phase_deg_per_meter();
    return {k * dd.dd12, k * dd.dd23, k * dd.dd31};
}

/// Wraps an angle into (-180, +180].
inline double wrap_phase(double theta_deg) {
    if (!std::isfinite(theta_deg)) throw std::invalid_argument("wrap_phase: input must be finite");
    double w = std::remainder(theta_deg, 360.0);
    if (w == -180.0) w = 180.0;
    return w;
}

} // namespace trilat
