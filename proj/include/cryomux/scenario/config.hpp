// SPDX-License-Identifier: Apache-2.0
#pragma once

// Declarative assembly description. Every physical quantity in the text form
// carries a unit; the in-memory form holds SI values.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cryomux/components/lna.hpp"
#include "cryomux/components/matching_network.hpp"
#include "cryomux/components/sp8t_switch.hpp"
#include "cryomux/error.hpp"
#include "cryomux/seb/seb_model.hpp"
#include "cryomux/tdma/schedule.hpp"

namespace cryomux::scenario {

struct AttenuatorConfig {
    std::string label;
    double loss_db = 0.0;
    double t_phys_k = 0.0;
    friend bool operator==(const AttenuatorConfig&, const AttenuatorConfig&) = default;
};

struct OutputStageConfig {
    std::string label;
    double gain_db = 0.0;
    double noise_temperature_k = 0.0;
    friend bool operator==(const OutputStageConfig&, const OutputStageConfig&) = default;
};

struct SebPathConfig {
    int channel = 0;
    std::optional<double> match_target_hz;   // synthesis target, also the declared f_i
    std::optional<components::MatchNetSpec> match;  // explicit, or filled in by validate()
    double alpha = 0.5;
    double v0 = 0.0;
    double t_e_k = 0.36;
    double tunnel_rate_hz = 5e9;  // gamma / 2 pi
    double c_geom_f = 50e-18;
    double drive_coupling_f = 1e-15;
    double parasitic_capacitance_f = 4e-12;
    double parasitic_resistance_ohm = 25e3;
    double idle_gate_v = 5e-3;
    friend bool operator==(const SebPathConfig&, const SebPathConfig&) = default;
};

/// Either a fixed source amplitude, or a target SNR on one SEB from which the
/// amplitude is derived.
struct DriveConfig {
    std::optional<double> amplitude_v;
    double calibrate_snr = 140.0;
    double calibrate_tau_s = 10e-6;
    int calibrate_seb = 0;
    [[nodiscard]] bool calibrated() const noexcept { return !amplitude_v.has_value(); }
    friend bool operator==(const DriveConfig&, const DriveConfig&) = default;
};

struct AssemblyConfig {
    std::string name = "assembly";
    double z0 = rf::kDefaultZ0;
    double demod_bandwidth_hz = 3e6;
    double sample_rate_hz = 1e6;
    std::uint64_t seed = 1;
    double cross_coupling_db = -16.0;
    std::optional<double> demod_phase_rad;  // empty = per-tone automatic
    bool allow_out_of_band_tones = false;
    std::vector<double> tones_hz;
    DriveConfig drive;
    std::vector<AttenuatorConfig> attenuators;
    components::SwitchSpec switch_spec;
    std::vector<SebPathConfig> seb_paths;
    components::LnaSpec lna;
    std::vector<OutputStageConfig> output_stages;

    /// SEB path model for path `i` (requires a resolved matching network).
    [[nodiscard]] seb::SebPath seb_path(std::size_t i) const;
    /// Declared resonance of path `i`, if any.
    [[nodiscard]] std::optional<double> path_frequency_hz(std::size_t i) const;
    /// Index of the path wired to switch channel `channel`, if any.
    [[nodiscard]] std::optional<std::size_t> path_on_channel(int channel) const;

    friend bool operator==(const AssemblyConfig&, const AssemblyConfig&) = default;
};

struct Diagnostic {
    std::string path;    // e.g. "seb_paths[1].channel"
    std::string reason;
};

/// Raised with every problem found, not just the first.
class ConfigValidationError : public Error {
public:
    explicit ConfigValidationError(std::vector<Diagnostic> diagnostics);
    [[nodiscard]] const std::vector<Diagnostic>& diagnostics() const noexcept { return diags_; }

private:
    std::vector<Diagnostic> diags_;
};

struct ValidatedConfig {
    AssemblyConfig config;
    std::vector<std::string> warnings;
};

/// Checks cross-references and ranges, synthesizes matching networks from
/// their targets, and attaches warnings. Idempotent on its own output.
ValidatedConfig validate(const AssemblyConfig& cfg);

/// Text parsing. `base_dir` resolves relative profile paths. Throws
/// ParseError on malformed text and ConfigValidationError on schema problems.
AssemblyConfig parse_assembly(const std::string& text,
                              const std::filesystem::path& base_dir = {});
AssemblyConfig load_assembly(const std::filesystem::path& path);

/// Canonical text form: fixed key order, SI units, shortest round-trip numbers.
std::string emit_normalized(const AssemblyConfig& cfg);

/// The shipped default assembly, as text.
const std::string& default_assembly_text();
AssemblyConfig default_assembly();

// Schedules.
tdma::TdmaSchedule parse_schedule(const std::string& text);
tdma::TdmaSchedule load_schedule(const std::filesystem::path& path);
std::string emit_schedule(const tdma::TdmaSchedule& schedule);

/// Three windows: channel 0 with the gate-0 ramp for 0-400 ms, deselected
/// for 400-660 ms, channel 1 with the gate-1 ramp for 660-1060 ms.
tdma::TdmaSchedule three_window_schedule(const AssemblyConfig& cfg);
const std::string& three_window_schedule_text();

}  // namespace cryomux::scenario
