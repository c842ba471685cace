// SPDX-License-Identifier: Apache-2.0
#include "cryomux/components/matching_network.hpp"

#include <cmath>
#include <sstream>

#include "cryomux/error.hpp"
#include "cryomux/units.hpp"

namespace cryomux::components {

namespace {

using Complex = std::complex<double>;

constexpr double kMatchTolerance = 1e-6;

// Impedance after the shunt inductor, looking toward the device.
Complex shunted_load(double omega, double l, Complex y_device) {
    return 1.0 / (y_device + 1.0 / Complex(0.0, omega * l));
}

// Series capacitance that cancels the reactance of z (requires Im z > 0).
double cancelling_capacitance(double omega, Complex z) { return 1.0 / (omega * z.imag()); }

}  // namespace

void MatchNetSpec::validate() const {
    if (!(c_farads > 0.0) || !(l_henries > 0.0) || !(z0 > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "matching network needs C > 0, L > 0, z0 > 0");
    }
}

rf::Abcd matchnet_abcd(const MatchNetSpec& spec, double f_hz) {
    const double omega = kTwoPi * f_hz;
    return rf::series_impedance(1.0 / Complex(0.0, omega * spec.c_farads)) *
           rf::shunt_admittance(1.0 / Complex(0.0, omega * spec.l_henries));
}

rf::TwoPortNetwork matchnet_two_port(const MatchNetSpec& spec, const rf::FrequencyGrid& grid) {
    spec.validate();
    std::vector<rf::SMatrix> s;
    s.reserve(grid.size());
    for (double f : grid) {
        s.push_back(rf::abcd_to_s(matchnet_abcd(spec, f), spec.z0));
    }
    return rf::TwoPortNetwork(grid, std::move(s), spec.z0);
}

Complex matchnet_input_impedance(const MatchNetSpec& spec, double f_hz, Complex z_load) {
    const double omega = kTwoPi * f_hz;
    const Complex z_l(0.0, omega * spec.l_henries);
    const Complex z_c(0.0, -1.0 / (omega * spec.c_farads));
    return z_c + (z_l * z_load) / (z_l + z_load);
}

MatchNetSpec synthesize_match(double f_target_hz, double z0, Complex z_device) {
    if (!(f_target_hz > 0.0) || !(z0 > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "synthesis needs f_target > 0 and z0 > 0");
    }
    if (!(z_device.real() > 0.0)) {
        throw Error(ErrorCode::NoMatchExists, "device impedance has no resistive part");
    }
    const double omega = kTwoPi * f_target_hz;
    const Complex y_dev = 1.0 / z_device;
    const double g = y_dev.real();
    const double b = y_dev.imag();

    // After the shunt L the admittance is g + j*b_after with Re(1/Y) = z0.
    const double radicand = g / z0 - g * g;
    if (!(radicand > 0.0)) {
        std::ostringstream os;
        if (std::abs(radicand) <= 1e-15 * g / z0) {
            os << "device impedance already equals z0; the series capacitor would be infinite";
        } else {
            os << "device parallel resistance " << 1.0 / g
               << " ohm is below z0; a high-pass L-section with shunt L at the device cannot match";
        }
        throw Error(ErrorCode::NoMatchExists, os.str());
    }
    const double b_after = -std::sqrt(radicand);
    const double inv_omega_l = b - b_after;
    if (!(inv_omega_l > 0.0)) {
        throw Error(ErrorCode::NoMatchExists,
                    "device susceptance too inductive for a shunt-inductor match");
    }
    double l = 1.0 / (omega * inv_omega_l);

    const auto residual = [&](double l_try) {
        return shunted_load(omega, l_try, y_dev).real() - z0;
    };
    double lo = l * (1.0 - 1e-3);
    double hi = l * (1.0 + 1e-3);
    double r_lo = residual(lo);
    if (r_lo * residual(hi) < 0.0) {
        for (int it = 0; it < 200 && (hi - lo) > 1e-15 * l; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double r_mid = residual(mid);
            if (r_mid == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((r_mid < 0.0) == (r_lo < 0.0)) {
                lo = mid;
                r_lo = r_mid;
            } else {
                hi = mid;
            }
        }
        const double polished = 0.5 * (lo + hi);
        if (std::abs(residual(polished)) <= std::abs(residual(l))) {
            l = polished;
        }
    }

    const Complex z_after = shunted_load(omega, l, y_dev);
    if (!(z_after.imag() > 0.0)) {
        throw Error(ErrorCode::NoMatchExists, "no positive series capacitance cancels the reactance");
    }
    MatchNetSpec spec{cancelling_capacitance(omega, z_after), l, z0};

    const Complex z_in = matchnet_input_impedance(spec, f_target_hz, z_device);
    if (std::abs(z_in - z0) / z0 > kMatchTolerance) {
        std::ostringstream os;
        os << "synthesized network misses z0 by " << std::abs(z_in - z0) / z0 << " (relative)";
        throw Error(ErrorCode::NoMatchExists, os.str());
    }
    return spec;
}

}  // namespace cryomux::components
