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
#include <cstdint>
#include <random>
#include <stdexcept>

#include "trilat/geometry.hpp"
#include "trilat/rf_link.hpp"

namespace trilat {

/// Signed phase-to-voltage transfer of one analog detector channel.
///
/// The physical part is a linear slope around v_center with a triangular fold
/// of period 360 deg (identity on [-90, +90], mirrored beyond), clipped to
/// [v_min, v_max].  Noise is zero-mean Gaussian whose sigma grows linearly
/// once the input power drops below min_input_power; the three noise
/// coefficients below are calibrated so the LOCK failure boundary of a
/// 2.2 m link lands between -9 and -8 dBm transmit.
struct DetectorModel {
    double v_center = 1.5;               // V
    double slope = 1.3 / 80.0;           // V/deg
    double v_min = 0.2;                  // V
    double v_max = 2.8;                  // V
    double usable_range_deg = 80.0;      // one-sided unambiguous range
    double min_input_power_dbm = -48.5;  // lock-reliable receive threshold
    double noise_floor_sigma = 0.002;    // V
    double low_power_noise_slope = 0.6;  // V per dB below min_input_power

    void validate() const {
        if (!(v_min < v_center && v_center < v_max))
            throw std::invalid_argument("DetectorModel: require v_min < v_center < v_max");
        if (!(slope > 0.0)) throw std::invalid_argument("DetectorModel: slope must be > 0");
        if (!(usable_range_deg > 0.0 && usable_range_deg <= 90.0))
            throw std::invalid_argument("DetectorModel: usable_range_deg must be in (0, 90]");
        if (!(noise_floor_sigma >= 0.0) || !(low_power_noise_slope >= 0.0))
            throw std::invalid_argument("DetectorModel: noise coefficients must be >= 0");
    }
};

/// Successive-approximation style converter: truncating quantizer, mid-tread
/// reconstruction.
struct AdcModel {
    int bits = 10;
    double full_scale = 5.0;     // V
    double sample_period = 1e-4; // s

    void validate() const {
        if (bits < 1 || bits > 24) throw std::invalid_argument("AdcModel: bits must be in [1, 24]");
        if (!(full_scale > 0.0)) throw std::invalid_argument("AdcModel: full_scale must be > 0");
        if (!(sample_period > 0.0)) throw std::invalid_argument("AdcModel: sample_period must be > 0");
    }

    int steps() const { return 1 << bits; }
    double lsb_volts() const { return full_scale / steps(); }
};

struct SamplerConfig {
    int samples_per_channel = 10;
    static constexpr int kChannels = 3;

    void validate() const {
        if (samples_per_channel < 1) throw std::invalid_argument("SamplerConfig: samples_per_channel must be >= 1");
    }
};

/// The three detector output voltages (raw) or their zeroed counterparts.
struct VoltageTriplet {
    double v12 = 0.0;
    double v23 = 0.0;
    double v31 = 0.0;

    double max_abs() const { return std::max({std::abs(v12), std::abs(v23), std::abs(v31)}); }
};

/// Seedable Gaussian stream injected into the detection path.  Callers own
/// one stream per concurrent task; sigma == 0 draws nothing so noiseless runs
/// do not consume state.
class NoiseSource {
  public:
    explicit NoiseSource(std::uint64_t seed) : rng_(seed) {}

    double gaussian(double sigma) {
        if (sigma <= 0.0) return 0.0;
        return std::normal_distribution<double>(0.0, sigma)(rng_);
    }

  private:
    std::mt19937_64 rng_;
};

/// Triangular extension of the signed detector transfer: identity on
/// [-90, +90], sign(t)*(180-|t|) beyond, 360-periodic via pre-wrapping.
inline double fold_phase(double theta_deg) {
    const double a = std::abs(theta_deg);
    if (a <= 90.0) return theta_deg;
    return std::copysign(180.0 - a, theta_deg);
}

inline double detector_noise_sigma(const DetectorModel& model, double input_power_dbm) {
    return model.noise_floor_sigma
         + model.low_power_noise_slope * std::max(0.0, model.min_input_power_dbm - input_power_dbm);
}

/// One detector reading.  delta_theta must be pre-wrapped to (-180, 180].
inline double detect(double delta_theta_deg, double input_power_dbm, const DetectorModel& model,
                     NoiseSource& noise) {
    const double v = model.v_center + model.slope * fold_phase(delta_theta_deg);
    const double clipped = std::clamp(v, model.v_min, model.v_max);
    return clipped + noise.gaussian(detector_noise_sigma(model, input_power_dbm));
}

/// Truncating conversion, clamped to the converter range.
inline int quantize(double volts, const AdcModel& adc) {
    const double clamped = std::clamp(volts, 0.0, adc.full_scale);
    const int code = static_cast<int>(std::floor(clamped / adc.full_scale * adc.steps()));
    return std::min(code, adc.steps() - 1);
}

/// Mid-tread reconstruction, exact round-trip with quantize().
inline double code_to_volts(int code, const AdcModel& adc) {
    if (code < 0 || code >= adc.steps()) throw std::domain_error("code_to_volts: code out of range");
    return (code + 0.5) * adc.full_scale / adc.steps();
}

struct AcquisitionResult {
    VoltageTriplet volts;        // per-channel average of reconstructed samples
    std::array<int, 3> codes{};  // quantized averaged voltages (diagnostic)
    double elapsed_s = 0.0;      // channels * samples_per_channel * sample_period
};

namespace detail {
inline double acquire_channel(double wrapped_theta_deg, double input_power_dbm,
                              const DetectorModel& det, const AdcModel& adc, int samples,
                              NoiseSource& noise) {
    double acc = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double v = detect(wrapped_theta_deg, input_power_dbm, det, noise);
        acc += code_to_volts(quantize(v, adc), adc);
    }
    return acc / samples;
}
} // namespace detail

/// One acquisition cycle over the three channels, sampled sequentially as a
/// single ADC must.  Channel ij sees the wrapped pairwise phase and the worse
/// of the two antenna amplitudes (the detector range is set by the weaker
/// input).  Per-channel detector models support calibration studies with
/// unequal channel centers.
inline AcquisitionResult acquire_cycle(const ReceivedSignal& signal, const PhaseTriplet& phases,
                                       const std::array<DetectorModel, 3>& detectors,
                                       const AdcModel& adc, const SamplerConfig& sampler,
                                       NoiseSource& noise) {
    adc.validate();
    sampler.validate();
    for (const auto& d : detectors) d.validate();

    const std::array<double, 3> theta = {wrap_phase(phases.th12), wrap_phase(phases.th23),
                                         wrap_phase(phases.th31)};
    const std::array<double, 3> power = {
        std::min(signal.amplitude_dbm[0], signal.amplitude_dbm[1]),
        std::min(signal.amplitude_dbm[1], signal.amplitude_dbm[2]),
        std::min(signal.amplitude_dbm[2], signal.amplitude_dbm[0])};

    AcquisitionResult out;
    std::array<double, 3> avg{};
    for (int ch = 0; ch < SamplerConfig::kChannels; ++ch) {
        avg[ch] = detail::acquire_channel(theta[ch], power[ch], detectors[ch], adc,
                                          sampler.samples_per_channel, noise);
        out.codes[ch] = quantize(avg[ch], adc);
    }
    out.volts = {avg[0], avg[1], avg[2]};
    out.elapsed_s = static_cast<double>(SamplerConfig::kChannels) * sampler.samples_per_channel
                  * adc.sample_period;
    return out;
}

inline AcquisitionResult acquire_cycle(const ReceivedSignal& signal, const PhaseTriplet& phases,
                                       const DetectorModel& detector, const AdcModel& adc,
                                       const SamplerConfig& sampler, NoiseSource& noise) {
    return acquire_cycle(signal, phases, std::array<DetectorModel, 3>{detector, detector, detector},
                         adc, sampler, noise);
}

} // namespace trilat
