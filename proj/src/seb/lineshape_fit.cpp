// SPDX-License-Identifier: Apache-2.0
#include "cryomux/seb/lineshape_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "cryomux/error.hpp"
#include "cryomux/io/number_format.hpp"
#include "cryomux/units.hpp"

namespace cryomux::seb {

namespace {

constexpr std::size_t kMinSamples = 10;

double sech2(double x) {
    const double ax = std::abs(x);
    if (ax > 350.0) {
        return 0.0;
    }
    const double e = std::exp(-ax);
    const double s = 2.0 * e / (1.0 + e * e);
    return s * s;
}

double median(std::vector<double> v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

}  // namespace

double sech2_lineshape(double vg, double amplitude, double v0, double t_e_k, double offset,
                       double alpha) {
    const double x = kElectronCharge * alpha * (vg - v0) / (2.0 * kBoltzmann * t_e_k);
    return amplitude * sech2(x) + offset;
}

LineshapeFit fit_electron_temperature(std::span<const LineshapeSample> samples, double alpha,
                                      const fit::LmOptions& options) {
    if (samples.size() < kMinSamples) {
        throw Error(ErrorCode::InvalidArgument, "lineshape fit needs at least 10 samples");
    }
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "lever arm alpha must lie in (0, 1]");
    }
    std::vector<double> y;
    y.reserve(samples.size());
    double y_abs_max = 0.0;
    for (const auto& s : samples) {
        y.push_back(s.signal);
        y_abs_max = std::max(y_abs_max, std::abs(s.signal));
    }
    const auto [min_it, max_it] = std::minmax_element(y.begin(), y.end());
    const double y_min = *min_it;
    const double y_max = *max_it;
    if (!(y_max - y_min > 1e-12 * y_abs_max)) {
        throw Error(ErrorCode::DegenerateData, "samples are flat; no lineshape to fit");
    }

    // A peak stands further from the median than the baseline spread; a dip
    // is the mirror case.
    const double y_med = median(y);
    const bool is_peak = (y_max - y_med) >= (y_med - y_min);
    const auto extremum = is_peak ? max_it : min_it;
    const double v0_guess = samples[static_cast<std::size_t>(extremum - y.begin())].vg;
    const double offset_guess = is_peak ? y_min : y_max;
    const double amp_guess = is_peak ? (y_max - y_min) : (y_min - y_max);

    double w_sum = 0.0;
    double m2 = 0.0;
    for (const auto& s : samples) {
        const double w = std::max(0.0, (s.signal - offset_guess) / amp_guess);
        w_sum += w;
        m2 += w * (s.vg - v0_guess) * (s.vg - v0_guess);
    }
    // Variance of sech^2(x) viewed as a distribution is pi^2 / 12 in x.
    double te_guess = kElectronCharge * alpha * std::sqrt(m2 / w_sum) * std::sqrt(12.0) /
                      (2.0 * kBoltzmann * std::numbers::pi);
    const auto [vmin_it, vmax_it] = std::minmax_element(
        samples.begin(), samples.end(),
        [](const LineshapeSample& a, const LineshapeSample& b) { return a.vg < b.vg; });
    const double span = vmax_it->vg - vmin_it->vg;
    if (!(te_guess > 0.0) || !std::isfinite(te_guess)) {
        te_guess = kElectronCharge * alpha * span / (20.0 * kBoltzmann);
    }

    const double width_scale = 2.0 * kBoltzmann * te_guess / (kElectronCharge * alpha);
    Eigen::VectorXd p0(4);
    p0 << amp_guess, v0_guess, te_guess, offset_guess;
    Eigen::VectorXd scale(4);
    scale << std::abs(amp_guess), width_scale, te_guess, std::abs(amp_guess);

    const auto residuals = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
        if (!(p[2] > 0.0)) {
            return false;
        }
        for (std::size_t i = 0; i < samples.size(); ++i) {
            r[static_cast<Eigen::Index>(i)] =
                sech2_lineshape(samples[i].vg, p[0], p[1], p[2], p[3], alpha) - samples[i].signal;
        }
        return true;
    };
    const auto lm = fit::levenberg_marquardt(residuals, p0, scale,
                                             static_cast<Eigen::Index>(samples.size()), options);
    if (!lm.converged) {
        std::ostringstream os;
        os << "lineshape fit did not converge within " << options.max_iterations << " iterations";
        throw Error(ErrorCode::NoConvergence, os.str());
    }
    return LineshapeFit{lm.params[2], lm.params[1], lm.params[0], lm.params[3], lm.iterations,
                        std::sqrt(lm.cost / static_cast<double>(samples.size()))};
}

std::string format_fit_report(const LineshapeFit& fit, double alpha, std::size_t sample_count) {
    std::ostringstream os;
    os << "model: sech2\n"
       << "alpha: " << io::format_double(alpha) << "\n"
       << "samples: " << sample_count << "\n"
       << "t_e_k: " << io::format_double(fit.t_e_k) << "\n"
       << "v0_volts: " << io::format_double(fit.v0) << "\n"
       << "amplitude: " << io::format_double(fit.amplitude) << "\n"
       << "offset: " << io::format_double(fit.offset) << "\n"
       << "iterations: " << fit.iterations << "\n"
       << "rms_residual: " << io::format_double(fit.rms_residual) << "\n";
    return os.str();
}

}  // namespace cryomux::seb
