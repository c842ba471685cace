// SPDX-License-Identifier: Apache-2.0
#pragma once

// Full-chain model of the assembly. Modules are joined by matched 50 ohm
// interconnect, so the source-to-demodulator response is a product of
// transmissions: attenuators, the addressed switch throw (plus cross-coupling
// at the SEB chiplet), the SEB path, the LNA and the room-temperature gain.
// The SEB path outputs sum at the readout node.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "cryomux/rf/two_port.hpp"
#include "cryomux/scenario/config.hpp"
#include "cryomux/seb/seb_model.hpp"
#include "cryomux/tdma/spi.hpp"

namespace cryomux::tdma {

using Complex = std::complex<double>;

class Assembly {
public:
    /// Validates `cfg` (synthesizing matching networks as needed) and resolves
    /// the drive amplitude. Throws ConfigValidationError or IncompleteConfig.
    explicit Assembly(const scenario::AssemblyConfig& cfg);

    [[nodiscard]] const scenario::AssemblyConfig& config() const noexcept { return cfg_; }
    [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    [[nodiscard]] std::size_t path_count() const noexcept { return paths_.size(); }
    [[nodiscard]] const seb::SebPath& path(std::size_t i) const { return paths_.at(i); }
    [[nodiscard]] int path_channel(std::size_t i) const { return cfg_.seb_paths.at(i).channel; }
    [[nodiscard]] std::vector<double> idle_gates() const;

    /// Path whose declared frequency lies within 1 MHz of `f_hz`, if any.
    [[nodiscard]] std::optional<std::size_t> path_for_tone(double f_hz) const;

    [[nodiscard]] double input_attenuation() const noexcept { return att_amplitude_; }
    /// Drive reaching the gate of path `i` per unit voltage at the switch
    /// common port, including cross-coupling from the other throws.
    [[nodiscard]] Complex gate_drive(const MuxState& mux, std::size_t i, double f_hz) const;
    /// LNA S21 times the room-temperature amplitude gain.
    [[nodiscard]] Complex receive_gain(double f_hz) const;

    /// Source-to-demodulator transmission. `gates` is indexed by SEB path.
    /// Throws IncompleteConfig when `gates` does not cover every path.
    [[nodiscard]] Complex chain_transmission(const MuxState& mux, std::span<const double> gates,
                                             double f_hz) const;
    [[nodiscard]] Complex chain_transmission(const MuxState& mux, double vg0, double vg1,
                                             double f_hz) const;

    /// Noise temperature at the LNA input (LNA plus later stages).
    [[nodiscard]] double system_noise_temperature(double f_hz) const;
    /// Per-quadrature output noise variance after the demodulation filter:
    /// kB * T_sys * B * z0 * |receive gain|^2, in V^2.
    [[nodiscard]] double noise_variance(double f_hz) const;

    /// Reflection at the readout node looking into the parallel SEB paths
    /// (gate lines terminated in z0), in S11 of the returned network.
    [[nodiscard]] rf::TwoPortNetwork readout_reflection(const rf::FrequencyGrid& grid) const;
    /// Chain transmission at idle gates, in S21 of the returned network.
    [[nodiscard]] rf::TwoPortNetwork transmission_sweep(const MuxState& mux,
                                                        const rf::FrequencyGrid& grid) const;

    /// Source amplitude in volts (fixed, or derived from the calibration target).
    [[nodiscard]] double drive_amplitude() const noexcept { return drive_v_; }
    /// Demodulation phase for a tone: fixed, or the phase of the addressed
    /// path's idle response so that its baseline lies on +I.
    [[nodiscard]] double demod_phase(double f_hz) const;

    /// Internal oversampling factor of the simulator: ceil(2 B / fs), at least 1.
    [[nodiscard]] int oversampling() const;
    /// Variance per quadrature of the mean of `n_out` consecutive output samples.
    [[nodiscard]] double block_mean_variance(double f_hz, std::size_t n_out) const;

private:
    double calibrate_drive() const;

    scenario::AssemblyConfig cfg_;
    std::vector<std::string> warnings_;
    std::vector<seb::SebPath> paths_;
    double att_amplitude_ = 1.0;
    double kappa_ = 0.0;
    double out_gain_amplitude_ = 1.0;
    double drive_v_ = 0.0;
};

}  // namespace cryomux::tdma
