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

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "trilat/sim.hpp"

namespace trilat {

/// Numbers serialize with 9 significant digits for reproducible diffs.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline constexpr const char* kTraceCsvHeader =
    "t_s,lp_x_m,lp_y_m,lp_z_m,yaw_deg,v12,v23,v31,q12,q23,q31,sector,rotation,translation,locked";

/// Trace CSV; the v columns carry the zeroed voltages the guidance acts on.
inline void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
    out << kTraceCsvHeader << '\n';
    for (const auto& r : trace) {
        out << format_number(r.time_s) << ','
            << format_number(r.pose.lp_offset.x) << ','
            << format_number(r.pose.lp_offset.y) << ','
            << format_number(r.pose.lp_offset.z) << ','
            << format_number(r.pose.drone_yaw_deg) << ','
            << format_number(r.zeroed.v12) << ','
            << format_number(r.zeroed.v23) << ','
            << format_number(r.zeroed.v31) << ','
            << r.codes[0] << ',' << r.codes[1] << ',' << r.codes[2] << ','
            << to_string(r.decision.sector) << ','
            << to_string(r.decision.rotation) << ','
            << to_string(r.decision.translation) << ','
            << (r.decision.locked ? 1 : 0) << '\n';
    }
}

} // namespace trilat
