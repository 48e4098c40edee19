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
#include <span>
#include <stdexcept>
#include <string>

#include "trilat/detection.hpp"

namespace trilat {

enum class Sector { S1a, S1b, S2a, S2b, S3a, S3b, Center };
enum class Rotation { Left, Right, Left60, Right60, None };
enum class Translation { Forward, Backward, None };

/// Which physical agent the emitted maneuvers direct.  LpMoves matches the
/// bench evaluation (the landing point is moved under a fixed array, the
/// convention the reference voltage tables use); DroneMoves is the airborne
/// case.
enum class CommandFrame { LpMoves, DroneMoves };

struct SectorDecision {
    Sector sector = Sector::Center;
    Rotation rotation = Rotation::None;
    Translation translation = Translation::None;
    bool locked = true;

    bool operator==(const SectorDecision&) const = default;
};

/// Per-channel zeroing references measured with the array centered over the LP.
struct CalibrationRefs {
    double ref12 = 0.0;
    double ref23 = 0.0;
    double ref31 = 0.0;
};

struct GuidanceConfig {
    double lock_threshold = 0.1; // V
    CommandFrame frame = CommandFrame::LpMoves;

    void validate() const {
        if (!(lock_threshold > 0.0)) throw std::invalid_argument("GuidanceConfig: lock_threshold must be > 0");
    }
};

/// Per-channel arithmetic mean of a centered acquisition stream.
inline CalibrationRefs calibrate(std::span<const VoltageTriplet> samples) {
    if (samples.empty()) throw std::invalid_argument("calibrate: need at least one sample");
    CalibrationRefs refs;
    for (const auto& s : samples) {
        refs.ref12 += s.v12;
        refs.ref23 += s.v23;
        refs.ref31 += s.v31;
    }
    const double n = static_cast<double>(samples.size());
    refs.ref12 /= n;
    refs.ref23 /= n;
    refs.ref31 /= n;
    return refs;
}

/// Subtracts the zeroing references so 0 deg phase shift maps to 0 V.
inline VoltageTriplet zero(const VoltageTriplet& raw, const CalibrationRefs& refs) {
    return {raw.v12 - refs.ref12, raw.v23 - refs.ref23, raw.v31 - refs.ref31};
}

/// Sector classification and maneuver selection on zeroed voltages.
///
/// Branch structure (verbatim, including the tie conventions: <= keeps exact
/// ties in sector 1, the strict < sends the 2-vs-3 tie to sector 3, and a
/// zero v12*v23 product takes the Right branch):
///   - all |v| <= lock_threshold          -> Center, locked
///   - |v12| <= |v23| and |v12| <= |v31|  -> sector 1;
///         rotation Left iff v12*v23 < 0, else Right;
///         v23 > 0 -> S1b Forward, else S1a Backward
///   - else |v23| < |v31|                 -> sector 2 family, Right60
///   - else                               -> sector 3 family, Left60
/// Sub-sector of families 2/3 follows the sign of v23 (a when positive).
inline SectorDecision classify(const VoltageTriplet& zeroed, const GuidanceConfig& config = {}) {
    config.validate();
    const double a12 = std::abs(zeroed.v12);
    const double a23 = std::abs(zeroed.v23);
    const double a31 = std::abs(zeroed.v31);

    if (std::max({a12, a23, a31}) <= config.lock_threshold)
        return {Sector::Center, Rotation::None, Translation::None, true};

    if (a12 <= a23 && a12 <= a31) {
        SectorDecision d;
        d.locked = false;
        d.rotation = (zeroed.v12 * zeroed.v23 < 0.0) ? Rotation::Left : Rotation::Right;
        if (zeroed.v23 > 0.0) {
            d.sector = Sector::S1b;
            d.translation = Translation::Forward;
        } else {
            d.sector = Sector::S1a;
            d.translation = Translation::Backward;
        }
        return d;
    }
    if (a23 < a31) {
        return {zeroed.v23 > 0.0 ? Sector::S2a : Sector::S2b, Rotation::Right60,
                Translation::None, false};
    }
    return {zeroed.v23 > 0.0 ? Sector::S3a : Sector::S3b, Rotation::Left60,
            Translation::None, false};
}

/// Geometric sector of a bearing phi_L (degrees counterclockwise from the +x
/// body axis), evaluated on the planar-wave signs so it matches classify()
/// through a noiseless pipeline away from wedge edges.  Wedge edges land on
/// multiples of 30 deg: S1b around +90, S1a around -90, the sector-2 family
/// around -30/150 (split a/b by the v23 sign), the sector-3 family on
/// (0,60) = a and (180,240) = b.
inline Sector geometric_sector(double phi_deg) {
    const double p = deg_to_rad(phi_deg);
    const double v12 = -std::cos(p);
    const double v23 = std::cos(p - deg_to_rad(60.0));
    const double v31 = std::cos(p + deg_to_rad(60.0));
    const double a12 = std::abs(v12), a23 = std::abs(v23), a31 = std::abs(v31);
    if (a12 <= a23 && a12 <= a31) return v23 > 0.0 ? Sector::S1b : Sector::S1a;
    if (a23 < a31) return v23 > 0.0 ? Sector::S2a : Sector::S2b;
    return v23 > 0.0 ? Sector::S3a : Sector::S3b;
}

/// Converts a decision between the LP-referred and drone-referred frames:
/// rotation and translation senses both swap, Center is unchanged.
inline SectorDecision invert_frame(const SectorDecision& decision) {
    SectorDecision d = decision;
    switch (decision.rotation) {
        case Rotation::Left: d.rotation = Rotation::Right; break;
        case Rotation::Right: d.rotation = Rotation::Left; break;
        case Rotation::Left60: d.rotation = Rotation::Right60; break;
        case Rotation::Right60: d.rotation = Rotation::Left60; break;
        case Rotation::None: break;
    }
    switch (decision.translation) {
        case Translation::Forward: d.translation = Translation::Backward; break;
        case Translation::Backward: d.translation = Translation::Forward; break;
        case Translation::None: break;
    }
    return d;
}

inline std::string to_string(Sector s) {
    switch (s) {
        case Sector::S1a: return "S1a";
        case Sector::S1b: return "S1b";
        case Sector::S2a: return "S2a";
        case Sector::S2b: return "S2b";
        case Sector::S3a: return "S3a";
        case Sector::S3b: return "S3b";
        case Sector::Center: return "CENTER";
    }
    return "?";
}

inline std::string to_string(Rotation r) {
    switch (r) {
        case Rotation::Left: return "LEFT";
        case Rotation::Right: return "RIGHT";
        case Rotation::Left60: return "LEFT60";
        case Rotation::Right60: return "RIGHT60";
        case Rotation::None: return "NONE";
    }
    return "?";
}

inline std::string to_string(Translation t) {
    switch (t) {
        case Translation::Forward: return "FORWARD";
        case Translation::Backward: return "BACKWARD";
        case Translation::None: return "NONE";
    }
    return "?";
}

} // namespace trilat
