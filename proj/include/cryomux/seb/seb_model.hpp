// SPDX-License-Identifier: Apache-2.0
#pragma once

// Small-signal single-electron box: thermally broadened tunnelling
// capacitance, single-pole admittance, and its embedding between a gate drive
// capacitor and the RX-side matching network.

#include <complex>
#include <limits>

#include "cryomux/components/matching_network.hpp"
#include "cryomux/rf/two_port.hpp"
#include "cryomux/units.hpp"

namespace cryomux::seb {

using Complex = std::complex<double>;

struct SebParams {
    double alpha = 0.5;                 // gate lever arm, (0, 1]
    double v0 = 0.0;                    // degeneracy gate voltage, V
    double t_e_k = 0.36;                // electron temperature, K
    double gamma = kTwoPi * 5e9;        // dot-reservoir tunnel rate, 1/s
    double c_geom = 50e-18;             // geometric gate capacitance, F
    int index = 0;

    void validate() const;
};

/// C_t(vg) = (e^2 alpha^2 / 4 kB Te) sech^2(e alpha (vg - v0) / 2 kB Te).
double tunneling_capacitance(double vg, const SebParams& p);
double peak_tunneling_capacitance(const SebParams& p);

/// Gate-voltage FWHM of the sech^2 lineshape: 4 ln(1 + sqrt 2) kB Te / (e alpha).
double lineshape_fwhm(const SebParams& p);

/// Y = j w c_geom + j w C_t / (1 + j w / gamma).
Complex seb_admittance(double vg, double f_hz, const SebParams& p);

/// Extra shunt elements at the device node (pad capacitance, dielectric loss).
struct DeviceParasitics {
    double capacitance_f = 0.0;
    double resistance_ohm = std::numeric_limits<double>::infinity();

    [[nodiscard]] Complex admittance(double f_hz) const;
};

/// Gate port -> RX port: series drive-coupling capacitor, the SEB (plus
/// parasitics) shunting the internal node, then the matching network entered
/// from its device side.
struct SebPath {
    SebParams seb;
    components::MatchNetSpec match;
    double drive_coupling_f = 100e-18;
    DeviceParasitics parasitics;

    void validate() const;
};

rf::Abcd seb_path_abcd(double vg, double f_hz, const SebPath& path);
rf::SMatrix seb_path_s(double vg, double f_hz, const SebPath& path);

/// Complex S21 from the gate drive to the RX port.
Complex seb_transmission(double vg, double f_hz, const SebPath& path);
Complex seb_transmission(double vg, double f_hz, const SebParams& p,
                         const components::MatchNetSpec& mn, double drive_coupling_f);

/// Impedance presented to the matching network's device port, with the gate
/// line terminated in z0 through the drive capacitor. The matching network
/// itself is excluded, so this is the load used for synthesis.
Complex device_impedance(double vg, double f_hz, const SebPath& path);

/// Two-port of one SEB path over a frequency grid at fixed gate voltage.
rf::TwoPortNetwork seb_path_two_port(double vg, const SebPath& path, const rf::FrequencyGrid& grid);

}  // namespace cryomux::seb
