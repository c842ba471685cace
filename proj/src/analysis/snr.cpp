// SPDX-License-Identifier: Apache-2.0
#include "cryomux/analysis/snr.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "cryomux/error.hpp"
#include "cryomux/io/number_format.hpp"

namespace cryomux::analysis {

namespace {

using Complex = std::complex<double>;

std::vector<Complex> block_means(const tdma::IqTrace& trace, TimeWindow w, std::size_t per_block,
                                 const char* name) {
    if (!(w.t_end > w.t_start)) {
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " window is empty");
    }
    const double span_end = trace.time_at(trace.samples.size());
    if (w.t_start < trace.t0 - 1e-12 || w.t_end > span_end + 1e-12) {
        throw Error(ErrorCode::WindowTooShort,
                    std::string(name) + " window is not covered by the trace");
    }
    const auto [first, last] = trace.index_range(w.t_start, w.t_end);
    const std::size_t blocks = (last - first) / per_block;
    if (blocks < kMinBlocksPerWindow) {
        throw Error(ErrorCode::WindowTooShort,
                    std::string(name) + " window holds " + std::to_string(blocks) +
                        " integration periods, at least 10 are needed");
    }
    std::vector<Complex> means(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        Complex acc = 0.0;
        const std::size_t off = first + b * per_block;
        for (std::size_t i = 0; i < per_block; ++i) {
            acc += trace.samples[off + i];
        }
        means[b] = acc / static_cast<double>(per_block);
    }
    return means;
}

Complex mean_of(const std::vector<Complex>& v) {
    Complex acc = 0.0;
    for (const auto& x : v) {
        acc += x;
    }
    return acc / static_cast<double>(v.size());
}

// Sample standard deviation of the projection onto unit direction u.
double projected_sd(const std::vector<Complex>& v, Complex mean, Complex u) {
    double ss = 0.0;
    for (const auto& x : v) {
        const double p = (std::conj(u) * (x - mean)).real();
        ss += p * p;
    }
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

SnrReport estimate_snr(const tdma::IqTrace& trace, TimeWindow top, TimeWindow bottom, double tau_s) {
    if (!(trace.sample_rate_hz > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "trace sample rate must be > 0");
    }
    if (top.t_start < bottom.t_end && bottom.t_start < top.t_end) {
        throw Error(ErrorCode::WindowOverlap, "top and bottom windows overlap");
    }
    const double per = tau_s * trace.sample_rate_hz;
    if (!(tau_s > 0.0) || per < 1.0 - 1e-9) {
        throw Error(ErrorCode::InvalidArgument, "integration time is shorter than one sample");
    }
    const auto per_block = static_cast<std::size_t>(std::llround(per));

    const auto bt = block_means(trace, top, per_block, "top");
    const auto bb = block_means(trace, bottom, per_block, "bottom");

    SnrReport r;
    r.tau_s = static_cast<double>(per_block) / trace.sample_rate_hz;
    r.blocks_top = bt.size();
    r.blocks_bottom = bb.size();
    r.mean_top = mean_of(bt);
    r.mean_bottom = mean_of(bb);
    const Complex delta = r.mean_top - r.mean_bottom;
    r.signal_sq = std::norm(delta);
    const Complex u = std::abs(delta) > 0.0 ? delta / std::abs(delta) : Complex(1.0, 0.0);
    const double sd = 0.5 * (projected_sd(bt, r.mean_top, u) + projected_sd(bb, r.mean_bottom, u));
    r.noise_sq = sd * sd;
    if (r.noise_sq == 0.0) {
        r.noiseless = true;
        r.snr_power = std::numeric_limits<double>::infinity();
        r.t_min_s = 0.0;
    } else {
        r.snr_power = r.signal_sq / r.noise_sq;
        r.t_min_s = r.snr_power > 0.0 ? r.tau_s / r.snr_power
                                      : std::numeric_limits<double>::infinity();
    }
    return r;
}

double snr_scaling(double snr_at_tau, double tau_s, double tau_new_s) {
    if (!(snr_at_tau > 0.0) || !(tau_s > 0.0) || !(tau_new_s > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "SNR and integration times must be > 0");
    }
    return snr_at_tau * (tau_new_s / tau_s);
}

std::string format_snr_report(const SnrReport& r) {
    using io::format_double;
    std::ostringstream os;
    os << "snr_power: " << (r.noiseless ? std::string("inf") : format_double(r.snr_power)) << '\n'
       << "noiseless: " << (r.noiseless ? "true" : "false") << '\n'
       << "tau_s: " << format_double(r.tau_s) << '\n'
       << "signal_sq_v2: " << format_double(r.signal_sq) << '\n'
       << "noise_sq_v2: " << format_double(r.noise_sq) << '\n'
       << "t_min_s: " << format_double(r.t_min_s) << '\n'
       << "blocks_top: " << r.blocks_top << '\n'
       << "blocks_bottom: " << r.blocks_bottom << '\n';
    return os.str();
}

}  // namespace cryomux::analysis
