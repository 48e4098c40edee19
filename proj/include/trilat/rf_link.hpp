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

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trilat/geometry.hpp"

namespace trilat {

/// Axial ratio of the circularly polarized beacon antenna as a function of
/// the pointing angle (angle between the drone direction and the vertical).
/// Default shape is a quadratic anchored at 2 dB @ 70 deg; a table override
/// (piecewise-linear over |angle|) replaces it when present.
struct AxialRatioProfile {
    double ar0_db = 0.5;                 // boresight value; not pinned by measurement, configurable
    double quad_coeff = (2.0 - 0.5) / (70.0 * 70.0); // dB/deg^2
    std::vector<std::pair<double, double>> table_override; // (deg >= 0 ascending, dB >= 0)

    void validate() const {
        if (!(ar0_db >= 0.0)) throw std::invalid_argument("AxialRatioProfile: ar0_db must be >= 0");
        if (!(quad_coeff >= 0.0)) throw std::invalid_argument("AxialRatioProfile: quad_coeff must be >= 0");
        for (std::size_t i = 0; i < table_override.size(); ++i) {
            const auto& [ang, db] = table_override[i];
            if (ang < 0.0 || db < 0.0) throw std::invalid_argument("AxialRatioProfile: table entries must be >= 0");
            if (i > 0 && (ang <= table_override[i - 1].first || db < table_override[i - 1].second))
                throw std::invalid_argument("AxialRatioProfile: table must be ascending in angle and non-decreasing in dB");
        }
    }
};

/// Amplitude model of the beacon link.
struct LinkBudgetModel {
    double tx_power_dbm = 0.0;
    double tx_gain_dbi = 5.0;            // patch-typical; the measurements never state gains
    double rx_gain_dbi = 5.0;
    double pol_mismatch_mean_db = 3.0;   // mean circular-to-linear coupling loss
    AxialRatioProfile ar_profile;

    void validate() const {
        if (!std::isfinite(tx_power_dbm) || !std::isfinite(tx_gain_dbi) || !std::isfinite(rx_gain_dbi))
            throw std::invalid_argument("LinkBudgetModel: powers/gains must be finite");
        if (!(pol_mismatch_mean_db >= 0.0)) throw std::invalid_argument("LinkBudgetModel: pol_mismatch_mean_db must be >= 0");
        ar_profile.validate();
    }
};

/// Per-antenna amplitude and carrier phase handed to the detection stage.
struct ReceivedSignal {
    std::array<double, 3> amplitude_dbm{};
    std::array<double, 3> phase_deg{};   // wrapped to (-180, 180]
};

/// Friis free-space spreading loss in dB.
inline double free_space_loss(double distance_m, double frequency_hz) {
    if (!(distance_m > 0.0)) throw std::domain_error("free_space_loss: distance must be > 0");
    if (!(frequency_hz > 0.0)) throw std::domain_error("free_space_loss: frequency must be > 0");
    return 20.0 * std::log10(4.0 * kPi * distance_m * frequency_hz / kSpeedOfLight);
}

/// Axial ratio at a pointing angle, clamped >= 0 dB.
inline double axial_ratio(const AxialRatioProfile& profile, double pointing_angle_deg) {
    if (!(std::abs(pointing_angle_deg) <= 90.0))
        throw std::domain_error("axial_ratio: |pointing_angle| must be <= 90 deg");
    const double a = std::abs(pointing_angle_deg);
    double ar;
    if (!profile.table_override.empty()) {
        const auto& t = profile.table_override;
        if (a <= t.front().first) {
            ar = t.front().second;
        } else if (a >= t.back().first) {
            ar = t.back().second;
        } else {
            auto hi = std::upper_bound(t.begin(), t.end(), a,
                                       [](double v, const auto& e) { return v < e.first; });
            auto lo = hi - 1;
            const double f = (a - lo->first) / (hi->first - lo->first);
            ar = lo->second + f * (hi->second - lo->second);
        }
    } else {
        ar = profile.ar0_db + profile.quad_coeff * a * a;
    }
    return std::max(0.0, ar);
}

/// Signed deviation from the mean circular-to-linear loss as the linear
/// receive antennas rotate; sinusoidal in twice the yaw, peak-to-peak equal
/// to the axial ratio in dB.
inline double polarization_ripple(double ar_db, double yaw_deg) {
    if (!(ar_db >= 0.0)) throw std::domain_error("polarization_ripple: ar_db must be >= 0");
    return 0.5 * ar_db * std::cos(2.0 * deg_to_rad(yaw_deg));
}

/// Pointing angle of antenna i seen from the LP: angle between (OP_i - OL)
/// and the vertical.
inline double pointing_angle_deg(const Vec3& antenna, const Vec3& lp_offset) {
    const Vec3 v = antenna - lp_offset;
    const double n = v.norm();
    if (!(n > 0.0)) throw std::domain_error("pointing_angle: LP coincides with an antenna");
    return rad_to_deg(std::acos(std::clamp(v.z / n, -1.0, 1.0)));
}

/// Full link evaluation: per-antenna received amplitude (budget minus
/// spreading, mean polarization loss and yaw-dependent ripple) and carrier
/// phase from the exact geometry.  Phase sign convention matches the pairwise
/// shifts: phase_i - phase_j == wrapped th_ij.
inline ReceivedSignal received_signal(const ArrayGeometry& geom, const RelativePose& pose,
                                      const LinkBudgetModel& budget) {
    budget.validate();
    pose.validate();
    const auto antennas = antenna_positions(geom);
    const double k = geom.phase_deg_per_meter();
    ReceivedSignal out;
    for (int i = 0; i < 3; ++i) {
        const double d = distance(pose.lp_offset, antennas[i]);
        const double theta = pointing_angle_deg(antennas[i], pose.lp_offset);
        const double ar = axial_ratio(budget.ar_profile, theta);
        out.amplitude_dbm[i] = budget.tx_power_dbm + budget.tx_gain_dbi + budget.rx_gain_dbi
                             - free_space_loss(d, geom.frequency)
                             - budget.pol_mismatch_mean_db
                             - polarization_ripple(ar, pose.drone_yaw_deg);
        out.phase_deg[i] = wrap_phase(k * d);
    }
    return out;
}

} // namespace trilat
