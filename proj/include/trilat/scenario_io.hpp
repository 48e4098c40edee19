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

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "trilat/sim.hpp"

namespace trilat {

/// Raised for unreadable or invalid scenario content (maps to CLI exit 2).
class ScenarioError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ScenarioError("scenario: key '" + key + "' has non-numeric value '" + value + "'");
    }
    if (pos != value.size())
        throw ScenarioError("scenario: key '" + key + "' has trailing characters in '" + value + "'");
    return v;
}

} // namespace detail

/// Flat key = value scenario format with dotted section keys, '#' comments
/// and blank lines.  Unknown keys are hard errors so physics-parameter typos
/// cannot pass silently.
inline Scenario parse_scenario_text(const std::string& text) {
    Scenario sc;
    bool have_ref12 = false, have_ref23 = false, have_ref31 = false;
    CalibrationRefs refs;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioError("scenario line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ScenarioError("scenario line " + std::to_string(lineno) + ": empty key or value");

        auto num = [&]() { return detail::parse_number(key, value); };

        if (key == "geometry.spacing_d") sc.geometry.spacing_d = num();
        else if (key == "geometry.frequency") sc.geometry.frequency = num();
        else if (key == "geometry.propagation_speed") sc.geometry.propagation_speed = num();
        else if (key == "link.tx_power_dbm") sc.budget.tx_power_dbm = num();
        else if (key == "link.tx_gain_dbi") sc.budget.tx_gain_dbi = num();
        else if (key == "link.rx_gain_dbi") sc.budget.rx_gain_dbi = num();
        else if (key == "link.pol_mismatch_mean_db") sc.budget.pol_mismatch_mean_db = num();
        else if (key == "link.ar0_db") sc.budget.ar_profile.ar0_db = num();
        else if (key == "link.ar_quad_coeff") sc.budget.ar_profile.quad_coeff = num();
        else if (key == "detector.v_center") {
            const double v = num();
            for (auto& d : sc.detectors) d.v_center = v;
        } else if (key == "detector.v_center_12") sc.detectors[0].v_center = num();
        else if (key == "detector.v_center_23") sc.detectors[1].v_center = num();
        else if (key == "detector.v_center_31") sc.detectors[2].v_center = num();
        else if (key == "detector.slope") { const double v = num(); for (auto& d : sc.detectors) d.slope = v; }
        else if (key == "detector.v_min") { const double v = num(); for (auto& d : sc.detectors) d.v_min = v; }
        else if (key == "detector.v_max") { const double v = num(); for (auto& d : sc.detectors) d.v_max = v; }
        else if (key == "detector.usable_range_deg") { const double v = num(); for (auto& d : sc.detectors) d.usable_range_deg = v; }
        else if (key == "detector.min_input_power_dbm") { const double v = num(); for (auto& d : sc.detectors) d.min_input_power_dbm = v; }
        else if (key == "detector.noise_floor_sigma") { const double v = num(); for (auto& d : sc.detectors) d.noise_floor_sigma = v; }
        else if (key == "detector.low_power_noise_slope") { const double v = num(); for (auto& d : sc.detectors) d.low_power_noise_slope = v; }
        else if (key == "adc.bits") sc.adc.bits = static_cast<int>(num());
        else if (key == "adc.full_scale") sc.adc.full_scale = num();
        else if (key == "adc.sample_period") sc.adc.sample_period = num();
        else if (key == "sampler.samples_per_channel") sc.sampler.samples_per_channel = static_cast<int>(num());
        else if (key == "guidance.lock_threshold") sc.guidance.lock_threshold = num();
        else if (key == "guidance.frame") {
            if (value == "lp_moves") sc.guidance.frame = CommandFrame::LpMoves;
            else if (value == "drone_moves") sc.guidance.frame = CommandFrame::DroneMoves;
            else throw ScenarioError("scenario: guidance.frame must be lp_moves or drone_moves");
        }
        else if (key == "calibration.ref12") { refs.ref12 = num(); have_ref12 = true; }
        else if (key == "calibration.ref23") { refs.ref23 = num(); have_ref23 = true; }
        else if (key == "calibration.ref31") { refs.ref31 = num(); have_ref31 = true; }
        else if (key == "sim.initial_lp_x") sc.initial_pose.lp_offset.x = num();
        else if (key == "sim.initial_lp_y") sc.initial_pose.lp_offset.y = num();
        else if (key == "sim.initial_altitude") sc.initial_pose.lp_offset.z = -num();
        else if (key == "sim.initial_yaw_deg") sc.initial_pose.drone_yaw_deg = num();
        else if (key == "sim.yaw_rate_deg_s") sc.yaw_rate_deg_s = num();
        else if (key == "sim.speed_m_s") sc.speed_m_s = num();
        else if (key == "sim.descent_rate_m_s") sc.descent_rate_m_s = num();
        else if (key == "sim.descent_policy") {
            if (value == "hold") sc.descent_policy = DescentPolicy::Hold;
            else if (value == "descend_on_lock") sc.descent_policy = DescentPolicy::DescendOnLock;
            else throw ScenarioError("scenario: sim.descent_policy must be hold or descend_on_lock");
        }
        else if (key == "sim.decision_period_s") sc.decision_period_s = num();
        else if (key == "sim.max_time_s") sc.max_time_s = num();
        else if (key == "sim.min_altitude_m") sc.min_altitude_m = num();
        else if (key == "sim.pose_jitter_sigma_m") sc.pose_jitter_sigma_m = num();
        else if (key == "sim.rng_seed") sc.rng_seed = static_cast<std::uint64_t>(num());
        else throw ScenarioError("scenario line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }

    if (have_ref12 || have_ref23 || have_ref31) {
        if (!(have_ref12 && have_ref23 && have_ref31))
            throw ScenarioError("scenario: calibration.ref12/ref23/ref31 must be given together");
        sc.calibration = refs;
    }
    try {
        sc.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string("scenario: ") + e.what());
    }
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

/// Applies a "key=value" override on top of file contents (power sweeps etc.).
inline void apply_override(std::string& text, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ScenarioError("override must look like key=value: " + assignment);
    text += "\n" + assignment.substr(0, eq) + " = " + assignment.substr(eq + 1) + "\n";
}

} // namespace trilat
