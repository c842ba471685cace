// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include "cryomux/rf/two_port.hpp"

namespace cryomux::components {

/// High-pass L-section: series capacitor at port 1 (the 50 ohm side), shunt
/// inductor at port 2 (the device side).
struct MatchNetSpec {
    double c_farads = 0.0;
    double l_henries = 0.0;
    double z0 = rf::kDefaultZ0;

    void validate() const;
    friend bool operator==(const MatchNetSpec&, const MatchNetSpec&) = default;
};

rf::Abcd matchnet_abcd(const MatchNetSpec& spec, double f_hz);

rf::TwoPortNetwork matchnet_two_port(const MatchNetSpec& spec, const rf::FrequencyGrid& grid);

/// Impedance seen at the 50 ohm port with the device port terminated in
/// `z_load`, by direct series/parallel combination.
std::complex<double> matchnet_input_impedance(const MatchNetSpec& spec, double f_hz,
                                              std::complex<double> z_load);

/// Designs (L, C) so that the network terminated in `z_device` presents z0 at
/// f_target. Closed-form L-section design, then bisection on L (with C
/// re-solved to cancel the reactance) to polish the real-part residual.
/// Throws NoMatchExists when the topology cannot reach z0, including the
/// degenerate already-matched case.
MatchNetSpec synthesize_match(double f_target_hz, double z0, std::complex<double> z_device);

}  // namespace cryomux::components
