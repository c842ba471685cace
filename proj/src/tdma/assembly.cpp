// SPDX-License-Identifier: Apache-2.0
#include "cryomux/tdma/assembly.hpp"

#include <cmath>

#include "cryomux/components/lna.hpp"
#include "cryomux/components/sp8t_switch.hpp"
#include "cryomux/error.hpp"
#include "cryomux/noise/friis.hpp"
#include "cryomux/units.hpp"

namespace cryomux::tdma {

namespace {

constexpr double kToneToleranceHz = 1e6;

}  // namespace

Assembly::Assembly(const scenario::AssemblyConfig& cfg) {
    scenario::ValidatedConfig v = scenario::validate(cfg);
    cfg_ = std::move(v.config);
    warnings_ = std::move(v.warnings);
    for (std::size_t i = 0; i < cfg_.seb_paths.size(); ++i) {
        paths_.push_back(cfg_.seb_path(i));
    }
    double att_db = 0.0;
    for (const auto& a : cfg_.attenuators) {
        att_db += a.loss_db;
    }
    att_amplitude_ = db_to_amplitude(-att_db);
    kappa_ = db_to_amplitude(cfg_.cross_coupling_db);
    double out_db = 0.0;
    for (const auto& o : cfg_.output_stages) {
        out_db += o.gain_db;
    }
    out_gain_amplitude_ = db_to_amplitude(out_db);
    drive_v_ = cfg_.drive.amplitude_v ? *cfg_.drive.amplitude_v : calibrate_drive();
}

std::vector<double> Assembly::idle_gates() const {
    std::vector<double> g;
    g.reserve(cfg_.seb_paths.size());
    for (const auto& p : cfg_.seb_paths) {
        g.push_back(p.idle_gate_v);
    }
    return g;
}

std::optional<std::size_t> Assembly::path_for_tone(double f_hz) const {
    std::optional<std::size_t> best;
    double best_err = kToneToleranceHz;
    for (std::size_t i = 0; i < cfg_.seb_paths.size(); ++i) {
        if (const auto f = cfg_.path_frequency_hz(i)) {
            const double err = std::abs(*f - f_hz);
            if (err <= best_err) {
                best_err = err;
                best = i;
            }
        }
    }
    return best;
}

Complex Assembly::gate_drive(const MuxState& mux, std::size_t i, double f_hz) const {
    Complex own = 0.0;
    Complex others = 0.0;
    for (std::size_t j = 0; j < paths_.size(); ++j) {
        const Complex t =
            components::switch_s_matrix(cfg_.switch_spec, mux.selected(), path_channel(j), f_hz).s21;
        (j == i ? own : others) += t;
    }
    return own + kappa_ * others;
}

Complex Assembly::receive_gain(double f_hz) const {
    return components::lna_s21(cfg_.lna, f_hz) * out_gain_amplitude_;
}

Complex Assembly::chain_transmission(const MuxState& mux, std::span<const double> gates,
                                     double f_hz) const {
    if (gates.size() < paths_.size()) {
        throw Error(ErrorCode::IncompleteConfig, "a gate voltage is required for every SEB path");
    }
    if (mux.selected() && *mux.selected() >= cfg_.switch_spec.n_channels) {
        throw Error(ErrorCode::BadChannel, "mux selects a channel the switch does not have");
    }
    Complex sum = 0.0;
    for (std::size_t i = 0; i < paths_.size(); ++i) {
        sum += gate_drive(mux, i, f_hz) * seb::seb_transmission(gates[i], f_hz, paths_[i]);
    }
    return att_amplitude_ * sum * receive_gain(f_hz);
}

Complex Assembly::chain_transmission(const MuxState& mux, double vg0, double vg1,
                                     double f_hz) const {
    if (paths_.size() < 2) {
        throw Error(ErrorCode::IncompleteConfig, "two SEB paths are required");
    }
    std::vector<double> g = idle_gates();
    g[0] = vg0;
    g[1] = vg1;
    return chain_transmission(mux, g, f_hz);
}

double Assembly::system_noise_temperature(double f_hz) const {
    std::vector<noise::StagePoint> stages;
    stages.push_back({components::lna_power_gain(cfg_.lna, f_hz),
                      components::lna_noise_temperature(cfg_.lna, f_hz)});
    for (const auto& o : cfg_.output_stages) {
        stages.push_back({db_to_power(o.gain_db), o.noise_temperature_k});
    }
    return noise::friis_point(stages);
}

double Assembly::noise_variance(double f_hz) const {
    return kBoltzmann * system_noise_temperature(f_hz) * cfg_.demod_bandwidth_hz * cfg_.z0 *
           std::norm(receive_gain(f_hz));
}

rf::TwoPortNetwork Assembly::readout_reflection(const rf::FrequencyGrid& grid) const {
    const std::vector<double> gates = idle_gates();
    const double y0 = 1.0 / cfg_.z0;
    std::vector<rf::SMatrix> s;
    s.reserve(grid.size());
    for (double f : grid) {
        Complex y = 0.0;
        for (std::size_t i = 0; i < paths_.size(); ++i) {
            const Complex s22 = seb::seb_path_s(gates[i], f, paths_[i]).s22;
            y += y0 * (1.0 - s22) / (1.0 + s22);
        }
        s.push_back(rf::SMatrix{(y0 - y) / (y0 + y), 0.0, 0.0, 0.0});
    }
    return rf::TwoPortNetwork(grid, std::move(s), cfg_.z0);
}

rf::TwoPortNetwork Assembly::transmission_sweep(const MuxState& mux,
                                                const rf::FrequencyGrid& grid) const {
    const std::vector<double> gates = idle_gates();
    std::vector<rf::SMatrix> s;
    s.reserve(grid.size());
    for (double f : grid) {
        s.push_back(rf::SMatrix{0.0, 0.0, chain_transmission(mux, gates, f), 0.0});
    }
    return rf::TwoPortNetwork(grid, std::move(s), cfg_.z0);
}

double Assembly::demod_phase(double f_hz) const {
    if (cfg_.demod_phase_rad) {
        return *cfg_.demod_phase_rad;
    }
    const auto i = path_for_tone(f_hz);
    if (!i) {
        return 0.0;
    }
    return std::arg(chain_transmission(MuxState::select(path_channel(*i)), idle_gates(), f_hz));
}

int Assembly::oversampling() const {
    return std::max(1, static_cast<int>(
                           std::ceil(2.0 * cfg_.demod_bandwidth_hz / cfg_.sample_rate_hz - 1e-12)));
}

double Assembly::block_mean_variance(double f_hz, std::size_t n_out) const {
    // Each output sample averages M filter outputs; the filter output is an
    // AR(1) process with lag-k correlation a^k.
    const int m = oversampling();
    const double fs_int = cfg_.sample_rate_hz * m;
    const double a = std::exp(-kTwoPi * cfg_.demod_bandwidth_hz / fs_int);
    const auto n = static_cast<double>(n_out) * m;
    // sum_{k=1}^{n-1} (1 - k/n) a^k in closed form.
    const double an = std::pow(a, n);
    const double s1 = a * (1.0 - std::pow(a, n - 1.0)) / (1.0 - a);
    const double s2 = a * (1.0 - n * std::pow(a, n - 1.0) + (n - 1.0) * an) / ((1.0 - a) * (1.0 - a));
    const double corr = 1.0 + 2.0 * (s1 - s2 / n);
    return noise_variance(f_hz) * corr / n;
}

double Assembly::calibrate_drive() const {
    const auto k = static_cast<std::size_t>(cfg_.drive.calibrate_seb);
    const double f = *cfg_.path_frequency_hz(k);
    const MuxState mux = MuxState::select(path_channel(k));
    std::vector<double> top = idle_gates();
    top[k] = cfg_.seb_paths[k].v0;
    const Complex delta =
        chain_transmission(mux, top, f) - chain_transmission(mux, idle_gates(), f);
    if (!(std::abs(delta) > 0.0)) {
        throw Error(ErrorCode::IncompleteConfig,
                    "calibration SEB shows no response at its frequency");
    }
    const auto n_out = static_cast<std::size_t>(
        std::llround(cfg_.drive.calibrate_tau_s * cfg_.sample_rate_hz));
    if (n_out < 1) {
        throw Error(ErrorCode::InvalidArgument, "calibration tau is shorter than one sample");
    }
    return std::sqrt(cfg_.drive.calibrate_snr * block_mean_variance(f, n_out)) / std::abs(delta);
}

}  // namespace cryomux::tdma
