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
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "trilat/design_analysis.hpp"
#include "trilat/detection.hpp"
#include "trilat/geometry.hpp"
#include "trilat/guidance.hpp"
#include "trilat/rf_link.hpp"

namespace trilat {

enum class DescentPolicy { Hold, DescendOnLock };

/// Everything a closed-loop episode needs.  Deterministic given rng_seed.
struct Scenario {
    ArrayGeometry geometry;
    LinkBudgetModel budget;
    std::array<DetectorModel, 3> detectors{};
    AdcModel adc;
    SamplerConfig sampler;
    GuidanceConfig guidance;
    RelativePose initial_pose{{0.0, 0.0, -0.46}, 0.0};
    std::optional<CalibrationRefs> calibration; // defaults to the channel centers

    double yaw_rate_deg_s = 30.0;   // non-measured default
    double speed_m_s = 0.2;         // non-measured default
    double descent_rate_m_s = 0.1;  // non-measured default
    DescentPolicy descent_policy = DescentPolicy::Hold;
    double decision_period_s = 0.003;
    double max_time_s = 30.0;
    double min_altitude_m = 0.05;
    double pose_jitter_sigma_m = 0.0; // optional per-tick turbulence, off by default
    std::uint64_t rng_seed = 1;

    double acquisition_time_s() const {
        return static_cast<double>(SamplerConfig::kChannels) * sampler.samples_per_channel
             * adc.sample_period;
    }

    CalibrationRefs effective_refs() const {
        if (calibration) return *calibration;
        return {detectors[0].v_center, detectors[1].v_center, detectors[2].v_center};
    }

    void validate() const {
        geometry.validate();
        budget.validate();
        for (const auto& d : detectors) d.validate();
        adc.validate();
        sampler.validate();
        guidance.validate();
        initial_pose.validate();
        if (!(yaw_rate_deg_s > 0.0 && speed_m_s > 0.0 && descent_rate_m_s > 0.0))
            throw std::invalid_argument("Scenario: rates must be > 0");
        if (!(max_time_s > 0.0)) throw std::invalid_argument("Scenario: max_time must be > 0");
        if (decision_period_s < acquisition_time_s())
            throw std::invalid_argument("Scenario: decision_period shorter than one acquisition cycle");
        if (!(min_altitude_m > 0.0)) throw std::invalid_argument("Scenario: min_altitude must be > 0");
        if (!(pose_jitter_sigma_m >= 0.0)) throw std::invalid_argument("Scenario: pose jitter must be >= 0");
    }
};

struct TraceRecord {
    double time_s = 0.0;        // decision completion time, strictly increasing
    RelativePose pose;          // pose the decision was acquired at
    VoltageTriplet raw;
    VoltageTriplet zeroed;
    std::array<int, 3> codes{};
    SectorDecision decision;
};

struct CommandCounts {
    int forward = 0;
    int backward = 0;
    int left = 0;
    int right = 0;
    int left60 = 0;
    int right60 = 0;
    int lock = 0;
};

struct EpisodeMetrics {
    bool locked = false;
    std::optional<double> time_to_first_lock_s;
    double final_horizontal_error_m = 0.0;
    double path_length_m = 0.0;
    CommandCounts command_counts;
    bool left_tracking_area = false;
    double sim_time_s = 0.0;
};

namespace detail {

/// Relative-motion executor.  The decision labels are the display labels of
/// the landing algorithm; their effect on the body-frame LP offset is fixed
/// by what makes the loop converge (and is frame-independent):
///   LEFT / LEFT60  -> offset rotates counterclockwise
///   RIGHT / RIGHT60-> offset rotates clockwise
///   FORWARD        -> offset.y decreases (drone and LP approach along OP3)
///   BACKWARD       -> offset.y increases
/// In DroneMoves the drone realizes the rotation itself, so its yaw changes
/// by the opposite angle; in LpMoves the array never moves and yaw is fixed.
inline RelativePose apply_motion(const RelativePose& pose, double offset_rotation_deg,
                                 double translation_y_m, double descend_m, CommandFrame frame) {
    RelativePose next = pose;
    if (offset_rotation_deg != 0.0) {
        next.lp_offset = rotate_z(next.lp_offset, offset_rotation_deg);
        if (frame == CommandFrame::DroneMoves) next.drone_yaw_deg -= offset_rotation_deg;
    }
    next.lp_offset.y += translation_y_m;
    next.lp_offset.z += descend_m;
    return next;
}

inline double rotation_sign(Rotation r) {
    switch (r) {
        case Rotation::Left:
        case Rotation::Left60: return +1.0;
        case Rotation::Right:
        case Rotation::Right60: return -1.0;
        case Rotation::None: return 0.0;
    }
    return 0.0;
}

inline double translation_delta(Translation t, double speed, double dt) {
    switch (t) {
        case Translation::Forward: return -speed * dt;
        case Translation::Backward: return +speed * dt;
        case Translation::None: return 0.0;
    }
    return 0.0;
}

/// Tracking-area membership via the design boundary, cached per 1 cm
/// altitude band and 1 degree of bearing.
class TrackingAreaCache {
  public:
    TrackingAreaCache(const ArrayGeometry& geom, double phase_limit)
        : geom_(geom), limit_(phase_limit) {}

    bool inside(const Vec3& lp_offset) {
        const double alt = -lp_offset.z;
        const int band = std::max(1, static_cast<int>(std::lround(alt * 100.0)));
        auto it = bands_.find(band);
        if (it == bands_.end()) {
            std::vector<double> radii(361, std::numeric_limits<double>::infinity());
            const double band_alt = band / 100.0;
            for (int i = 0; i <= 360; ++i) {
                auto r = boundary_radius(geom_, band_alt, static_cast<double>(i), limit_);
                if (r) radii[i] = *r;
            }
            it = bands_.emplace(band, std::move(radii)).first;
        }
        double phi = rad_to_deg(std::atan2(lp_offset.y, lp_offset.x));
        if (phi < 0.0) phi += 360.0;
        const int i0 = static_cast<int>(phi);
        const double f = phi - i0;
        const double r_bound = it->second[i0] + f * (it->second[i0 + 1] - it->second[i0]);
        return lp_offset.horizontal_norm() <= r_bound;
    }

  private:
    ArrayGeometry geom_;
    double limit_;
    std::map<int, std::vector<double>> bands_;
};

} // namespace detail

/// One kinematic update for a decision held over dt.  Continuous rotations
/// advance yaw_rate*dt; the 60-degree turns are capped at 60 in a single call
/// (run() spreads them over ceil(60/(yaw_rate*dt)) ticks).  Pure function.
inline RelativePose step(const RelativePose& pose, const SectorDecision& decision,
                         const Scenario& scenario, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
    double rot = detail::rotation_sign(decision.rotation) * scenario.yaw_rate_deg_s * dt;
    if (decision.rotation == Rotation::Left60 || decision.rotation == Rotation::Right60)
        rot = std::clamp(rot, -60.0, 60.0);
    const double trans = detail::translation_delta(decision.translation, scenario.speed_m_s, dt);
    double descend = 0.0;
    if (decision.locked && scenario.descent_policy == DescentPolicy::DescendOnLock)
        descend = scenario.descent_rate_m_s * dt;
    return detail::apply_motion(pose, rot, trans, descend, scenario.guidance.frame);
}

/// Closed-loop episode: acquire -> zero -> classify -> move, until lock (and
/// minimum altitude when descending), max_time, or a tracking-area exit.
/// A start outside the tracking area is flagged but still runs, and a
/// committed 60-degree turn is allowed to sweep its constant-radius arc
/// through the boundary's angular minima without counting as an exit.
inline std::pair<std::vector<TraceRecord>, EpisodeMetrics> run(const Scenario& scenario) {
    scenario.validate();
    NoiseSource noise(scenario.rng_seed);
    const CalibrationRefs refs = scenario.effective_refs();
    detail::TrackingAreaCache area(scenario.geometry, scenario.detectors[0].usable_range_deg);

    std::vector<TraceRecord> trace;
    EpisodeMetrics metrics;
    RelativePose pose = scenario.initial_pose;
    const double dt = scenario.decision_period_s;

    const bool started_inside = area.inside(pose.lp_offset);
    metrics.left_tracking_area = !started_inside;

    double turn_remaining = 0.0; // committed 60-degree turn bookkeeping
    double turn_sign = 0.0;

    double t = 0.0;
    while (t < scenario.max_time_s) {
        const ReceivedSignal signal = received_signal(scenario.geometry, pose, scenario.budget);
        const PhaseTriplet phases = phase_shifts(scenario.geometry, pose);
        const AcquisitionResult acq = acquire_cycle(signal, phases, scenario.detectors,
                                                    scenario.adc, scenario.sampler, noise);
        const VoltageTriplet zeroed = zero(acq.volts, refs);
        const SectorDecision decision = classify(zeroed, scenario.guidance);
        t += dt;
        trace.push_back({t, pose, acq.volts, zeroed, acq.codes, decision});

        if (decision.locked) {
            metrics.command_counts.lock++;
            if (!metrics.time_to_first_lock_s) metrics.time_to_first_lock_s = t;
        } else {
            switch (decision.rotation) {
                case Rotation::Left: metrics.command_counts.left++; break;
                case Rotation::Right: metrics.command_counts.right++; break;
                case Rotation::Left60: metrics.command_counts.left60++; break;
                case Rotation::Right60: metrics.command_counts.right60++; break;
                case Rotation::None: break;
            }
            if (decision.translation == Translation::Forward) metrics.command_counts.forward++;
            if (decision.translation == Translation::Backward) metrics.command_counts.backward++;
        }

        if (decision.locked
            && (scenario.descent_policy == DescentPolicy::Hold
                || pose.altitude() <= scenario.min_altitude_m)) {
            metrics.locked = true;
            break;
        }

        // Committed 60-degree turns finish before rotation is re-evaluated;
        // translation follows the current decision every tick.
        double rot = 0.0;
        if (turn_remaining > 0.0) {
            const double d = std::min(scenario.yaw_rate_deg_s * dt, turn_remaining);
            rot = turn_sign * d;
            turn_remaining -= d;
        } else if (decision.rotation == Rotation::Left60 || decision.rotation == Rotation::Right60) {
            turn_sign = detail::rotation_sign(decision.rotation);
            const double d = std::min(scenario.yaw_rate_deg_s * dt, 60.0);
            rot = turn_sign * d;
            turn_remaining = 60.0 - d;
        } else {
            rot = detail::rotation_sign(decision.rotation) * scenario.yaw_rate_deg_s * dt;
        }
        const double trans = detail::translation_delta(decision.translation, scenario.speed_m_s, dt);
        double descend = 0.0;
        if (decision.locked && scenario.descent_policy == DescentPolicy::DescendOnLock)
            descend = std::min(scenario.descent_rate_m_s * dt,
                               pose.altitude() - scenario.min_altitude_m);

        const Vec3 before = pose.lp_offset;
        pose = detail::apply_motion(pose, rot, trans, descend, scenario.guidance.frame);
        if (scenario.pose_jitter_sigma_m > 0.0) {
            pose.lp_offset.x += noise.gaussian(scenario.pose_jitter_sigma_m);
            pose.lp_offset.y += noise.gaussian(scenario.pose_jitter_sigma_m);
        }
        metrics.path_length_m += (pose.lp_offset - before).horizontal_norm();

        if (started_inside && turn_remaining <= 0.0 && !area.inside(pose.lp_offset)) {
            metrics.left_tracking_area = true;
            break;
        }
    }

    metrics.sim_time_s = t;
    metrics.final_horizontal_error_m = pose.lp_offset.horizontal_norm();
    return {std::move(trace), metrics};
}

struct BatchSummary {
    int episodes = 0;
    double lock_rate = 0.0;
    double mean_time_to_lock_s = 0.0;  // over locked episodes
    double p90_time_to_lock_s = 0.0;
    double max_final_error_m = 0.0;
};

/// Independent episodes differing only by seed; results in input order.
inline std::pair<std::vector<EpisodeMetrics>, BatchSummary> run_batch(
    const Scenario& base, const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw std::invalid_argument("run_batch: need at least one seed");
    std::vector<EpisodeMetrics> all;
    all.reserve(seeds.size());
    for (auto s : seeds) {
        Scenario sc = base;
        sc.rng_seed = s;
        all.push_back(run(sc).second);
    }
    BatchSummary summary;
    summary.episodes = static_cast<int>(all.size());
    std::vector<double> lock_times;
    for (const auto& m : all) {
        if (m.locked) {
            summary.lock_rate += 1.0;
            lock_times.push_back(m.time_to_first_lock_s.value());
        }
        summary.max_final_error_m = std::max(summary.max_final_error_m, m.final_horizontal_error_m);
    }
    summary.lock_rate /= summary.episodes;
    if (!lock_times.empty()) {
        std::sort(lock_times.begin(), lock_times.end());
        double acc = 0.0;
        for (double v : lock_times) acc += v;
        summary.mean_time_to_lock_s = acc / lock_times.size();
        const std::size_t idx = static_cast<std::size_t>(0.9 * (lock_times.size() - 1));
        summary.p90_time_to_lock_s = lock_times[idx];
    }
    return {std::move(all), summary};
}

} // namespace trilat
