// SPDX-License-Identifier: Apache-2.0
#include "cryomux/seb/seb_model.hpp"

#include <cmath>

#include "cryomux/error.hpp"

namespace cryomux::seb {

namespace {

// sech^2 without overflow for large arguments.
double sech2(double x) {
    const double ax = std::abs(x);
    if (ax > 350.0) {
        return 0.0;
    }
    const double e = std::exp(-ax);
    const double s = 2.0 * e / (1.0 + e * e);
    return s * s;
}

// Reduced detuning e alpha (vg - v0) / (2 kB Te).
double reduced_detuning(double vg, const SebParams& p) {
    return kElectronCharge * p.alpha * (vg - p.v0) / (2.0 * kBoltzmann * p.t_e_k);
}

}  // namespace

void SebParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "lever arm alpha must lie in (0, 1]");
    }
    if (!(t_e_k > 0.0) || !(gamma > 0.0) || !(c_geom >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "SEB needs t_e > 0, gamma > 0, c_geom >= 0");
    }
}

double peak_tunneling_capacitance(const SebParams& p) {
    return kElectronCharge * kElectronCharge * p.alpha * p.alpha / (4.0 * kBoltzmann * p.t_e_k);
}

double tunneling_capacitance(double vg, const SebParams& p) {
    return peak_tunneling_capacitance(p) * sech2(reduced_detuning(vg, p));
}

double lineshape_fwhm(const SebParams& p) {
    return 4.0 * std::log(1.0 + std::sqrt(2.0)) * kBoltzmann * p.t_e_k / (kElectronCharge * p.alpha);
}

Complex seb_admittance(double vg, double f_hz, const SebParams& p) {
    const double omega = kTwoPi * f_hz;
    const Complex jw(0.0, omega);
    return jw * p.c_geom + jw * tunneling_capacitance(vg, p) / Complex(1.0, omega / p.gamma);
}

Complex DeviceParasitics::admittance(double f_hz) const {
    const double g = std::isinf(resistance_ohm) ? 0.0 : 1.0 / resistance_ohm;
    return Complex(g, kTwoPi * f_hz * capacitance_f);
}

void SebPath::validate() const {
    seb.validate();
    match.validate();
    if (!(drive_coupling_f > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "drive coupling capacitance must be > 0");
    }
    if (!(parasitics.capacitance_f >= 0.0) || !(parasitics.resistance_ohm > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "parasitic C must be >= 0 and R > 0");
    }
}

rf::Abcd seb_path_abcd(double vg, double f_hz, const SebPath& path) {
    const double omega = kTwoPi * f_hz;
    const Complex z_drive = 1.0 / Complex(0.0, omega * path.drive_coupling_f);
    const Complex y_node = seb_admittance(vg, f_hz, path.seb) + path.parasitics.admittance(f_hz);
    return rf::series_impedance(z_drive) * rf::shunt_admittance(y_node) *
           components::matchnet_abcd(path.match, f_hz).reversed();
}

rf::SMatrix seb_path_s(double vg, double f_hz, const SebPath& path) {
    return rf::abcd_to_s(seb_path_abcd(vg, f_hz, path), path.match.z0);
}

Complex seb_transmission(double vg, double f_hz, const SebPath& path) {
    return seb_path_s(vg, f_hz, path).s21;
}

Complex seb_transmission(double vg, double f_hz, const SebParams& p,
                         const components::MatchNetSpec& mn, double drive_coupling_f) {
    return seb_transmission(vg, f_hz, SebPath{p, mn, drive_coupling_f, {}});
}

Complex device_impedance(double vg, double f_hz, const SebPath& path) {
    const double omega = kTwoPi * f_hz;
    const Complex z_drive_branch =
        path.match.z0 + 1.0 / Complex(0.0, omega * path.drive_coupling_f);
    const Complex y = 1.0 / z_drive_branch + seb_admittance(vg, f_hz, path.seb) +
                      path.parasitics.admittance(f_hz);
    return 1.0 / y;
}

rf::TwoPortNetwork seb_path_two_port(double vg, const SebPath& path, const rf::FrequencyGrid& grid) {
    path.validate();
    std::vector<rf::SMatrix> s;
    s.reserve(grid.size());
    for (double f : grid) {
        s.push_back(seb_path_s(vg, f, path));
    }
    return rf::TwoPortNetwork(grid, std::move(s), path.match.z0);
}

}  // namespace cryomux::seb
