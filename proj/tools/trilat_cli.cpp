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
//
// Command-line surface: design curves as CSV, sector classification and
// simulation episodes as CSV/JSON.  Exit codes: 0 success, 1 usage,
// 2 I/O or scenario content, 3 internal invariant.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "trilat/design_analysis.hpp"
#include "trilat/guidance.hpp"
#include "trilat/scenario_io.hpp"
#include "trilat/sim.hpp"
#include "trilat/trace_io.hpp"
#include "trilat/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitInternal = 3;

class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Relative output paths resolve under $TRILAT_OUT_DIR when it is set.
std::string resolve_out_path(const std::string& path) {
    if (path.empty() || path == "-") return path;
    const char* dir = std::getenv("TRILAT_OUT_DIR");
    std::filesystem::path p(path);
    if (dir && *dir && p.is_relative()) p = std::filesystem::path(dir) / p;
    return p.string();
}

/// Writes to the path ("-" or empty means stdout); output always ends with a
/// newline (the writers guarantee it).
void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    const std::string resolved = resolve_out_path(path);
    std::ofstream out(resolved);
    if (!out) throw IoError("cannot open output file: " + resolved);
    out << content;
    if (!out) throw IoError("write failed: " + resolved);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw trilat::ScenarioError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<double> parse_range(const std::string& text) {
    // "start:stop:step", inclusive of stop up to rounding
    double start = 0, stop = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0))
        throw CLI::ValidationError("--spacing-range", "expected start:stop:step with step > 0");
    std::vector<double> out;
    for (double v = start; v <= stop + 0.5 * step; v += step) out.push_back(v);
    if (out.empty()) throw CLI::ValidationError("--spacing-range", "empty range");
    return out;
}

trilat::Scenario load_with_overrides(const std::string& path, const std::vector<std::string>& sets) {
    std::string text = read_file(path);
    for (const auto& s : sets) trilat::apply_override(text, s);
    return trilat::parse_scenario_text(text);
}

int cmd_design_boundary(double spacing, double altitude, double freq, double limit, double step,
                        const std::string& out) {
    trilat::ArrayGeometry geom{spacing, freq};
    auto boundary = trilat::tracking_boundary(geom, altitude, limit, step);
    if (!boundary) throw std::runtime_error("tracking boundary is unbounded for this configuration");
    std::ostringstream csv;
    csv << "phi_deg,r_max_m\n";
    for (const auto& [phi, r] : boundary->samples)
        csv << trilat::format_number(phi) << ',' << trilat::format_number(r) << '\n';
    write_output(out, csv.str());
    return kExitOk;
}

int cmd_design_table(const std::string& range, double altitude, double freq,
                     std::vector<int> bits, double delta_vd, const std::string& out) {
    const auto d_values = parse_range(range);
    const auto table = trilat::design_table(d_values, altitude, freq, bits, delta_vd);
    std::ostringstream csv;
    csv << "d_m,r_min_m,r_max_m,sens_mv_per_cm";
    for (int b : bits) csv << ",step_cm_b" << b;
    csv << '\n';
    for (const auto& row : table) {
        csv << trilat::format_number(row.spacing_d) << ','
            << trilat::format_number(row.r_min) << ','
            << trilat::format_number(row.r_max) << ','
            << trilat::format_number(row.sensitivity_mv_per_cm);
        for (double s : row.adc_step_cm) csv << ',' << trilat::format_number(s);
        csv << '\n';
    }
    write_output(out, csv.str());
    return kExitOk;
}

int cmd_cone(const std::string& range, double freq, double limit, const std::string& out) {
    const auto d_values = parse_range(range);
    std::ostringstream csv;
    csv << "d_m,half_angle_deg\n";
    for (double d : d_values) {
        trilat::ArrayGeometry geom{d, freq};
        auto angle = trilat::cone_half_angle(geom, limit);
        if (!angle) throw std::runtime_error("cone unbounded at D = " + std::to_string(d));
        csv << trilat::format_number(d) << ',' << trilat::format_number(*angle) << '\n';
    }
    write_output(out, csv.str());
    return kExitOk;
}

int cmd_classify(double v12, double v23, double v31, const std::vector<double>& refs,
                 double lock_threshold) {
    trilat::VoltageTriplet v{v12, v23, v31};
    if (!refs.empty()) {
        if (refs.size() != 3) throw CLI::ValidationError("--refs", "expected r1,r2,r3");
        v = trilat::zero(v, {refs[0], refs[1], refs[2]});
    }
    trilat::GuidanceConfig cfg;
    cfg.lock_threshold = lock_threshold;
    const auto d = trilat::classify(v, cfg);
    nlohmann::json j{{"sector", trilat::to_string(d.sector)},
                     {"rotation", trilat::to_string(d.rotation)},
                     {"translation", trilat::to_string(d.translation)},
                     {"locked", d.locked}};
    std::cout << j.dump() << '\n';
    return kExitOk;
}

nlohmann::json metrics_json(const trilat::EpisodeMetrics& m) {
    nlohmann::json counts{{"forward", m.command_counts.forward},
                          {"backward", m.command_counts.backward},
                          {"left", m.command_counts.left},
                          {"right", m.command_counts.right},
                          {"left60", m.command_counts.left60},
                          {"right60", m.command_counts.right60},
                          {"lock", m.command_counts.lock}};
    nlohmann::json j{{"locked", m.locked},
                     {"final_horizontal_error_m", m.final_horizontal_error_m},
                     {"path_length_m", m.path_length_m},
                     {"command_counts", counts},
                     {"left_tracking_area", m.left_tracking_area},
                     {"sim_time_s", m.sim_time_s}};
    if (m.time_to_first_lock_s)
        j["time_to_first_lock_s"] = *m.time_to_first_lock_s;
    else
        j["time_to_first_lock_s"] = nullptr;
    return j;
}

int cmd_simulate(const std::string& scenario_path, const std::string& trace_path,
                 const std::string& metrics_path, std::optional<std::uint64_t> seed,
                 const std::vector<std::string>& sets) {
    trilat::Scenario sc = load_with_overrides(scenario_path, sets);
    if (seed) sc.rng_seed = *seed;
    const auto [trace, metrics] = trilat::run(sc);

    for (std::size_t i = 1; i < trace.size(); ++i)
        if (!(trace[i].time_s > trace[i - 1].time_s))
            throw std::logic_error("trace invariant violated: time not strictly increasing");
    for (const auto& r : trace) {
        const double lo = 0.0, hi = sc.adc.full_scale;
        if (r.raw.v12 < lo || r.raw.v12 > hi || r.raw.v23 < lo || r.raw.v23 > hi
            || r.raw.v31 < lo || r.raw.v31 > hi)
            throw std::logic_error("trace invariant violated: raw voltage outside ADC range");
    }

    if (!trace_path.empty()) {
        std::ostringstream csv;
        trilat::write_trace_csv(csv, trace);
        write_output(trace_path, csv.str());
    }
    const std::string metrics_text = metrics_json(metrics).dump(2) + "\n";
    if (!metrics_path.empty())
        write_output(metrics_path, metrics_text);
    else
        std::cout << metrics_text;
    return kExitOk;
}

int cmd_calibrate_fixture(const std::string& scenario_path, int cycles,
                          std::optional<std::uint64_t> seed, const std::vector<std::string>& sets) {
    trilat::Scenario sc = load_with_overrides(scenario_path, sets);
    if (seed) sc.rng_seed = *seed;
    if (cycles < 1) throw CLI::ValidationError("--cycles", "must be >= 1");

    // Centered acquisition: the array incenter directly above the LP.
    trilat::RelativePose pose = sc.initial_pose;
    pose.lp_offset.x = 0.0;
    pose.lp_offset.y = 0.0;
    trilat::NoiseSource noise(sc.rng_seed);
    const auto signal = trilat::received_signal(sc.geometry, pose, sc.budget);
    const auto phases = trilat::phase_shifts(sc.geometry, pose);
    std::vector<trilat::VoltageTriplet> samples;
    samples.reserve(cycles);
    for (int i = 0; i < cycles; ++i)
        samples.push_back(
            trilat::acquire_cycle(signal, phases, sc.detectors, sc.adc, sc.sampler, noise).volts);
    const auto refs = trilat::calibrate(samples);
    nlohmann::json j{{"ref12", refs.ref12}, {"ref23", refs.ref23}, {"ref31", refs.ref31}};
    std::cout << j.dump() << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tri-antenna phase-shift landing: design curves, classification and simulation"};
    app.set_version_flag("--version", std::string("trilat ") + trilat::kVersion);
    app.require_subcommand(1);

    // design-boundary
    double spacing = 0.07, altitude = 10.0, freq = 2.46e9, limit = 80.0, step = 1.0;
    std::string out;
    auto* boundary = app.add_subcommand("design-boundary", "tracking boundary r_max(phi) as CSV");
    boundary->add_option("--spacing", spacing, "antenna spacing D in m")->capture_default_str();
    boundary->add_option("--altitude", altitude, "drone altitude in m")->capture_default_str();
    boundary->add_option("--freq", freq, "beacon frequency in Hz")->capture_default_str();
    boundary->add_option("--phase-limit", limit, "unambiguous phase limit in deg")->capture_default_str();
    boundary->add_option("--step", step, "phi step in deg")->capture_default_str();
    boundary->add_option("--out", out, "output CSV path (default stdout)");

    // design-table
    std::string table_range = "0.04:0.2:0.01";
    double table_altitude = 10.0, table_freq = 2.46e9, delta_vd = 2.6;
    std::vector<int> bits{8, 10, 12};
    std::string table_out;
    auto* table = app.add_subcommand("design-table", "design parameters vs antenna spacing as CSV");
    table->add_option("--spacing-range", table_range, "D range start:stop:step in m")->capture_default_str();
    table->add_option("--altitude", table_altitude, "drone altitude in m")->capture_default_str();
    table->add_option("--freq", table_freq, "beacon frequency in Hz")->capture_default_str();
    table->add_option("--bits", bits, "ADC bit depths")->capture_default_str();
    table->add_option("--delta-vd", delta_vd, "detector output span in V")->capture_default_str();
    table->add_option("--out", table_out, "output CSV path (default stdout)");

    // cone
    std::string cone_range = "0.04:0.2:0.01", cone_out;
    double cone_freq = 2.45e9, cone_limit = 80.0;
    auto* cone = app.add_subcommand("cone", "tracking-cone half angle vs antenna spacing as CSV");
    cone->add_option("--spacing-range", cone_range, "D range start:stop:step in m")->capture_default_str();
    cone->add_option("--freq", cone_freq, "beacon frequency in Hz")->capture_default_str();
    cone->add_option("--phase-limit", cone_limit, "unambiguous phase limit in deg")->capture_default_str();
    cone->add_option("--out", cone_out, "output CSV path (default stdout)");

    // classify
    double v12 = 0, v23 = 0, v31 = 0, lock_threshold = 0.1;
    std::vector<double> refs;
    auto* classify = app.add_subcommand("classify", "sector decision for one voltage triplet as JSON");
    classify->add_option("--v12", v12, "channel 1-2 voltage in V")->required();
    classify->add_option("--v23", v23, "channel 2-3 voltage in V")->required();
    classify->add_option("--v31", v31, "channel 3-1 voltage in V")->required();
    classify->add_option("--refs", refs, "zeroing references r1,r2,r3 to subtract")->delimiter(',');
    classify->add_option("--lock-threshold", lock_threshold, "lock window in V")->capture_default_str();

    // simulate
    std::string scenario_path, trace_path, metrics_path;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
    auto* simulate = app.add_subcommand("simulate", "closed-loop landing episode");
    simulate->add_option("--scenario", scenario_path, "scenario file")->required();
    simulate->add_option("--trace", trace_path, "trace CSV output path");
    simulate->add_option("--metrics", metrics_path, "metrics JSON output path (default stdout)");
    simulate->add_option("--seed", seed, "override sim.rng_seed");
    simulate->add_option("--set", sets, "override scenario key, key=value (repeatable)");

    // calibrate-fixture
    std::string cal_scenario;
    int cal_cycles = 100;
    std::optional<std::uint64_t> cal_seed;
    std::vector<std::string> cal_sets;
    auto* cal = app.add_subcommand("calibrate-fixture", "zeroing references from a centered acquisition");
    cal->add_option("--scenario", cal_scenario, "scenario file")->required();
    cal->add_option("--cycles", cal_cycles, "acquisition cycles to average")->capture_default_str();
    cal->add_option("--seed", cal_seed, "override sim.rng_seed");
    cal->add_option("--set", cal_sets, "override scenario key, key=value (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success))
            return app.exit(e); // --help / --version
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (boundary->parsed()) return cmd_design_boundary(spacing, altitude, freq, limit, step, out);
        if (table->parsed()) return cmd_design_table(table_range, table_altitude, table_freq, bits, delta_vd, table_out);
        if (cone->parsed()) return cmd_cone(cone_range, cone_freq, cone_limit, cone_out);
        if (classify->parsed()) return cmd_classify(v12, v23, v31, refs, lock_threshold);
        if (simulate->parsed()) return cmd_simulate(scenario_path, trace_path, metrics_path, seed, sets);
        if (cal->parsed()) return cmd_calibrate_fixture(cal_scenario, cal_cycles, cal_seed, cal_sets);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const trilat::ScenarioError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}
