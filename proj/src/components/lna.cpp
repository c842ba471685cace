// SPDX-License-Identifier: Apache-2.0
#include "cryomux/components/lna.hpp"

#include <cmath>
#include <sstream>

#include "cryomux/error.hpp"
#include "cryomux/units.hpp"

namespace cryomux::components {

namespace {

constexpr double kMaxFrequency = 2e9;

// Mean of (f - f_min)^2 over the band [lo, hi].
double band_mean_square_offset(double lo, double hi, double f_min) {
    const double a = lo - f_min;
    const double b = hi - f_min;
    return (b * b * b - a * a * a) / (3.0 * (hi - lo));
}

}  // namespace

void LnaSpec::validate() const {
    if (!(f_low_3db_hz > 0.0 && f_low_3db_hz < f_center_hz && f_center_hz < f_high_3db_hz)) {
        throw Error(ErrorCode::InvalidArgument, "LNA requires 0 < f_low_3db < f_center < f_high_3db");
    }
    if (!(nt_min_k >= 0.0) || !(f_nt_min_hz > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "LNA noise-temperature minimum must be >= 0 K at f > 0");
    }
    if (nt_min_k > nt_avg_k) {
        std::ostringstream os;
        os << "minimum noise temperature " << nt_min_k << " K exceeds the in-band average "
           << nt_avg_k << " K";
        throw Error(ErrorCode::UnachievableProfile, os.str());
    }
    if (!(in_band_return_loss_db > 0.0) || !(reverse_isolation_db > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "LNA return loss and reverse isolation must be > 0 dB");
    }
}

double LnaSpec::resonance_hz() const { return std::sqrt(f_low_3db_hz * f_high_3db_hz); }

double LnaSpec::quality_factor() const { return resonance_hz() / (f_high_3db_hz - f_low_3db_hz); }

std::complex<double> lna_s21(const LnaSpec& spec, double f_hz) {
    const double f0 = spec.resonance_hz();
    const double detune = spec.quality_factor() * (f_hz / f0 - f0 / f_hz);
    return db_to_amplitude(spec.peak_gain_db) / std::complex<double>(1.0, detune);
}

double lna_power_gain(const LnaSpec& spec, double f_hz) { return std::norm(lna_s21(spec, f_hz)); }

double lna_noise_temperature(const LnaSpec& spec, double f_hz) {
    const double excess = spec.nt_avg_k - spec.nt_min_k;
    const double msq =
        band_mean_square_offset(spec.f_low_3db_hz, spec.f_high_3db_hz, spec.f_nt_min_hz);
    const double curvature = msq > 0.0 ? excess / msq : 0.0;
    const double df = f_hz - spec.f_nt_min_hz;
    return spec.nt_min_k + curvature * df * df;
}

ComponentModel lna_two_port(const LnaSpec& spec, const rf::FrequencyGrid& grid) {
    spec.validate();
    if (grid.back() > kMaxFrequency) {
        throw Error(ErrorCode::OutOfSpan, "LNA model is defined up to 2 GHz");
    }
    const double s11 = db_to_amplitude(-spec.in_band_return_loss_db);
    const double s12 = db_to_amplitude(-spec.reverse_isolation_db);
    std::vector<rf::SMatrix> s;
    std::vector<double> gain;
    std::vector<double> t_noise;
    s.reserve(grid.size());
    for (double f : grid) {
        const auto s21 = lna_s21(spec, f);
        s.push_back(rf::SMatrix{s11, s12, s21, s11});
        gain.push_back(std::norm(s21));
        t_noise.push_back(lna_noise_temperature(spec, f));
    }
    return ComponentModel{rf::TwoPortNetwork(grid, std::move(s)),
                          noise::StageSpec::active("lna", grid, std::move(gain), std::move(t_noise))};
}

}  // namespace cryomux::components
