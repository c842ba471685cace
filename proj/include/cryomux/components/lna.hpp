// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include "cryomux/components/component_model.hpp"

namespace cryomux::components {

/// Parametric cryogenic LNA. Gain follows a single second-order resonator
/// whose half-power points sit on the given band edges; the peak therefore
/// lands on the geometric mean of the edges. The default peak gain is slightly
/// above 35 dB so that the gain at the nominal 780 MHz centre also clears 35 dB.
struct LnaSpec {
    double peak_gain_db = 35.3;
    double f_center_hz = 780e6;
    double f_low_3db_hz = 709e6;
    double f_high_3db_hz = 827e6;
    double nt_min_k = 4.2;
    double f_nt_min_hz = 650e6;
    double nt_avg_k = 6.2;
    double in_band_return_loss_db = 12.0;
    double reverse_isolation_db = 60.0;

    /// Throws InvalidArgument, or UnachievableProfile when nt_min > nt_avg.
    void validate() const;

    [[nodiscard]] double resonance_hz() const;
    [[nodiscard]] double quality_factor() const;
    friend bool operator==(const LnaSpec&, const LnaSpec&) = default;
};

std::complex<double> lna_s21(const LnaSpec& spec, double f_hz);
double lna_power_gain(const LnaSpec& spec, double f_hz);

/// Convex quadratic through (f_nt_min, nt_min) scaled so that its mean over
/// [f_low_3db, f_high_3db] equals nt_avg.
double lna_noise_temperature(const LnaSpec& spec, double f_hz);

/// Grid must lie within (0, 2 GHz].
ComponentModel lna_two_port(const LnaSpec& spec, const rf::FrequencyGrid& grid);

}  // namespace cryomux::components
