// SPDX-License-Identifier: Apache-2.0
// Acceptance run: one PASS/FAIL line per criterion, each with a wall-clock bound.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cryomux/analysis/benchmark.hpp"
#include "cryomux/analysis/resonances.hpp"
#include "cryomux/analysis/snr.hpp"
#include "cryomux/components/lna.hpp"
#include "cryomux/components/sp8t_switch.hpp"
#include "cryomux/noise/friis.hpp"
#include "cryomux/rf/two_port.hpp"
#include "cryomux/scenario/config.hpp"
#include "cryomux/seb/lineshape_fit.hpp"
#include "cryomux/tdma/assembly.hpp"
#include "cryomux/tdma/simulator.hpp"
#include "cryomux/tdma/spi.hpp"
#include "cryomux/units.hpp"
#include "support/generators.hpp"

using namespace cryomux;
using Complex = std::complex<double>;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

struct Criterion {
    int id;
    const char* name;
    double bound_s;
    std::function<void(Verdict&)> body;
};

double db(Complex v) { return amplitude_to_db(std::abs(v)); }

const tdma::Assembly& assembly() {
    static const tdma::Assembly a(scenario::default_assembly());
    return a;
}

// Crossing of `level` by f -> value on [lo, hi], assuming a single crossing.
double bisect(const std::function<double(double)>& fn, double level, double lo, double hi) {
    const bool below_at_lo = fn(lo) < level;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        ((fn(mid) < level) == below_at_lo ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

void lna_model(Verdict& v) {
    const components::LnaSpec spec;
    const auto gain = [&](double f) { return db(components::lna_s21(spec, f)); };
    double peak = -1e9;
    double f_peak = 0.0;
    for (double f = 600e6; f <= 950e6; f += 0.01e6) {
        if (gain(f) > peak) {
            peak = gain(f);
            f_peak = f;
        }
    }
    const double half = peak - 10.0 * std::log10(2.0);
    const double lo = bisect(gain, half, 600e6, f_peak);
    const double hi = bisect(gain, half, f_peak, 950e6);

    const int n = 20000;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double f = lo + (hi - lo) * i / n;
        acc += (i == 0 || i == n ? 0.5 : 1.0) * components::lna_noise_temperature(spec, f);
    }
    const double nt_avg = acc / n;
    const double nt_650 = components::lna_noise_temperature(spec, 650e6);
    double nt_floor = 1e9;
    double f_floor = 0.0;
    for (double f = 400e6; f <= 1.2e9; f += 0.1e6) {
        const double t = components::lna_noise_temperature(spec, f);
        if (t < nt_floor) {
            nt_floor = t;
            f_floor = f;
        }
    }
    v.require(peak >= 35.0, "peak >= 35 dB");
    v.require(gain(780e6) >= 35.0, "|S21(780 MHz)| >= 35 dB");
    v.require(std::abs(lo - 709e6) <= 0.5e6, "lower -3 dB point");
    v.require(std::abs(hi - 827e6) <= 0.5e6, "upper -3 dB point");
    v.require(std::abs(nt_avg - 6.2) <= 0.1, "in-band NT average");
    v.require(std::abs(nt_650 - 4.2) <= 1e-9 && std::abs(f_floor - 650e6) <= 0.1e6, "NT minimum at 650 MHz");
    v.detail << "peak " << peak << " dB at " << f_peak / 1e6 << " MHz, S21(780 MHz) " << gain(780e6)
             << " dB, -3 dB at " << lo / 1e6 << "/" << hi / 1e6 << " MHz, NT avg " << nt_avg
             << " K, NT(650 MHz) " << nt_650 << " K";
}

void switch_consistency(Verdict& v) {
    const double nt = noise::passive_noise_temperature(db_to_power(1.1), 4.0);
    const components::SwitchSpec spec;
    double worst = 1e9;
    for (double f = 100e6; f <= 2e9; f += 10e6) {
        for (int sel = 0; sel < 8; ++sel) {
            const double on = db(components::switch_s_matrix(spec, sel, sel, f).s21);
            for (int path = 0; path < 8; ++path) {
                if (path != sel) {
                    worst = std::min(worst, on - db(components::switch_s_matrix(spec, sel, path, f).s21));
                }
            }
            worst = std::min(worst, on - db(components::switch_s_matrix(spec, std::nullopt, sel, f).s21));
        }
    }
    v.require(nt >= 1.10 && nt <= 1.20, "passive NT in [1.10, 1.20] K");
    v.require(worst >= 33.9 - 1e-9, "contrast >= 33.9 dB");
    v.detail << "NT(1.1 dB, 4 K) " << nt << " K, worst contrast " << worst << " dB";
}

void friis_identity(Verdict& v) {
    const auto grid = rf::FrequencyGrid::linear(709e6, 827e6, 3);
    const std::size_t n = grid.size();
    const std::vector<noise::StageSpec> stages{
        noise::StageSpec::passive("switch", grid, std::vector<double>(n, db_to_power(1.1)), 4.0),
        noise::StageSpec::active("lna", grid, std::vector<double>(n, db_to_power(35.0)),
                                 std::vector<double>(n, 6.2))};
    const auto r = noise::friis_cascade(stages, grid);
    const double t_center = r.t_sys_k[1];
    v.require(std::abs(t_center - 9.14) <= 0.01, "T_sys = 9.14 K +- 0.01 K");
    v.detail << "T_sys(" << grid[1] / 1e6 << " MHz) " << t_center << " K";
}

void matching_synthesis(Verdict& v) {
    const tdma::Assembly a(scenario::default_assembly());
    const auto net = a.readout_reflection(rf::FrequencyGrid::linear(500e6, 750e6, 5001));
    const auto res = analysis::extract_resonances(net);
    v.require(res.size() == 2, "exactly two features");
    if (res.size() == 2) {
        v.require(std::abs(res[0].f_hz - 559e6) <= 1e6, "feature at 559 MHz");
        v.require(std::abs(res[1].f_hz - 681e6) <= 1e6, "feature at 681 MHz");
    }
    for (const auto& r : res) {
        v.detail << r.f_hz / 1e6 << " MHz (depth " << r.depth_db << " dB, bw " << r.bandwidth_hz / 1e6
                 << " MHz) ";
    }
}

void lineshape_round_trip(Verdict& v) {
    constexpr double alpha = 0.5;
    constexpr double te = 0.36;
    constexpr double v0 = 0.0;
    constexpr double amp = 1e-4;
    const auto oracle = [&](double vg) {
        const double x = kElectronCharge * alpha * (vg - v0) / (2.0 * kBoltzmann * te);
        return amp / (std::cosh(x) * std::cosh(x));
    };
    const auto make = [&](double noise, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> n(0.0, noise * amp);
        std::vector<seb::LineshapeSample> s;
        for (int i = 0; i < 500; ++i) {
            const double vg = v0 - 1e-3 + 2e-3 * i / 499.0;
            s.push_back({vg, oracle(vg) + (noise > 0.0 ? n(rng) : 0.0)});
        }
        return s;
    };
    const double clean = seb::fit_electron_temperature(make(0.0, 1), alpha).t_e_k;
    const double noisy = seb::fit_electron_temperature(make(0.05, 20240611), alpha).t_e_k;
    const double e_clean = std::abs(clean / te - 1.0);
    const double e_noisy = std::abs(noisy / te - 1.0);
    v.require(e_clean <= 1e-6, "noiseless refit to 1e-6");
    v.require(e_noisy <= 0.05, "5% noise refit to 5%");
    v.detail << "noiseless rel. error " << e_clean << ", noisy rel. error " << e_noisy;
}

double excursion(const tdma::IqTrace& t, double t0, double t1) {
    auto [a, b] = t.index_range(t0, t1);
    a += 2;
    Complex m = 0.0;
    for (std::size_t i = a; i < b; ++i) {
        m += t.samples[i];
    }
    m /= static_cast<double>(b - a);
    double worst = 0.0;
    for (std::size_t i = a; i < b; ++i) {
        worst = std::max(worst, std::abs(t.samples[i] - m));
    }
    return worst;
}

double window_rms(const tdma::IqTrace& t, double t0, double t1, bool about_mean) {
    auto [a, b] = t.index_range(t0, t1);
    a += 2;
    Complex m = 0.0;
    if (about_mean) {
        for (std::size_t i = a; i < b; ++i) {
            m += t.samples[i];
        }
        m /= static_cast<double>(b - a);
    }
    double s = 0.0;
    for (std::size_t i = a; i < b; ++i) {
        s += std::norm(t.samples[i] - m);
    }
    return std::sqrt(s / static_cast<double>(b - a));
}

void tdma_reproduction(Verdict& v) {
    const auto& a = assembly();
    const auto sched = scenario::three_window_schedule(a.config());
    const std::vector<double> tones{559e6, 681e6};

    const auto quiet = tdma::simulate(sched, tones, a, {false, 1, false});
    const auto& q0 = quiet.traces[0];
    const auto& q1 = quiet.traces[1];
    const double conf0 = amplitude_to_db(excursion(q0, 0.0, 0.4) / excursion(q0, 0.66, 1.06));
    const double conf1 = amplitude_to_db(excursion(q1, 0.66, 1.06) / excursion(q1, 0.0, 0.4));
    // Deselected window: only floating-point rounding of a constant is allowed.
    const bool silent = excursion(q0, 0.4, 0.66) <= 1e-12 * excursion(q0, 0.0, 0.4) &&
                        excursion(q1, 0.4, 0.66) <= 1e-12 * excursion(q1, 0.66, 1.06);
    v.require(conf0 >= 13.0 && conf1 >= 13.0 && silent, "oscillations confined to their windows");

    const auto noisy = tdma::simulate(sched, tones, a, {true, a.config().seed, false});
    double worst_floor = 0.0;
    for (std::size_t k = 0; k < tones.size(); ++k) {
        const double measured = window_rms(noisy.traces[k], 0.4, 0.66, true);
        const double floor = std::sqrt(2.0 * a.block_mean_variance(tones[k], 1));
        worst_floor = std::max(worst_floor, std::abs(measured / floor - 1.0));
    }
    v.require(worst_floor <= 0.10, "deselect RMS equals the noise floor within 10%");

    const auto idle = a.idle_gates();
    const auto chain = [&](int ch, double f) {
        return db(a.chain_transmission(tdma::MuxState::select(ch), idle, f));
    };
    const double cross = std::min(chain(0, 559e6) - chain(1, 559e6), chain(1, 681e6) - chain(0, 681e6));
    double unused = 1e9;
    for (int ch = 2; ch < 8; ++ch) {
        unused = std::min({unused, chain(0, 559e6) - chain(ch, 559e6), chain(1, 681e6) - chain(ch, 681e6)});
    }

    // Same check on simulated trace energy, with an unused-channel window.
    const tdma::TdmaSchedule probe({{0.0, 2e-3, tdma::MuxState::select(0), {}},
                                    {2e-3, 4e-3, tdma::MuxState::select(1), {}},
                                    {4e-3, 6e-3, tdma::MuxState::select(2), {}}});
    const auto p = tdma::simulate(probe, tones, a, {false, 1, false});
    const auto e = [&](std::size_t k, int w) { return window_rms(p.traces[k], 2e-3 * w, 2e-3 * (w + 1), false); };
    const double cross_sim = std::min(amplitude_to_db(e(0, 0) / e(0, 1)), amplitude_to_db(e(1, 1) / e(1, 0)));
    const double unused_sim = std::min(amplitude_to_db(e(0, 0) / e(0, 2)), amplitude_to_db(e(1, 1) / e(1, 2)));
    v.require(cross >= 13.0 && cross_sim >= 13.0, "cross-MN suppression >= 13 dB");
    v.require(unused >= 39.0 && unused_sim >= 39.0, "unused-channel suppression >= 39 dB");
    v.detail << "confinement " << conf0 << "/" << conf1 << " dB, deselect floor error " << worst_floor
             << ", cross-MN " << cross << " dB (trace " << cross_sim << "), unused " << unused << " dB (trace "
             << unused_sim << ")";
}

void snr_benchmark(Verdict& v) {
    const auto& a = assembly();
    const std::uint64_t seed = a.config().seed;
    const auto b10 = analysis::run_snr_benchmark(a, 10e-6, seed);
    const auto b20 = analysis::run_snr_benchmark(a, 20e-6, seed);
    const double snr = b10.report.snr_power;
    const double t_min_ns = b10.report.t_min_s * 1e9;
    const double ratio = b20.report.snr_power / snr;
    v.require(std::abs(snr / 140.0 - 1.0) <= 0.15, "SNR = 140 +- 15% at 10 us");
    v.require(t_min_ns >= 65.0 && t_min_ns <= 75.0, "t_min in [65, 75] ns");
    v.require(std::abs(ratio / 2.0 - 1.0) <= 0.15, "SNR doubles with tau within 15%");
    v.detail << "SNR(10 us) " << snr << ", t_min " << t_min_ns << " ns, SNR(20 us)/SNR(10 us) " << ratio;
}

double max_diff(const rf::TwoPortNetwork& x, const rf::TwoPortNetwork& y) {
    double w = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto& a = x.at(i);
        const auto& b = y.at(i);
        w = std::max({w, std::abs(a.s11 - b.s11), std::abs(a.s12 - b.s12), std::abs(a.s21 - b.s21),
                      std::abs(a.s22 - b.s22)});
    }
    return w;
}

void property_suites(Verdict& v) {
    std::mt19937_64 rng(8);
    const auto g = rf::FrequencyGrid::linear(100e6, 2e9, 64);
    double round_trip = 0.0;
    double assoc = 0.0;
    bool preserved = true;
    for (int i = 0; i < 50; ++i) {
        const auto x = testing::random_passive_network(g, rng);
        const auto y = testing::random_passive_network(g, rng);
        const auto z = testing::random_passive_network(g, rng);
        round_trip = std::max(round_trip, max_diff(x, rf::abcd_to_s(rf::s_to_abcd(x))));
        const auto flat = rf::cascade({x, y, z});
        assoc = std::max({assoc, max_diff(rf::cascade({rf::cascade({x, y}), z}), flat),
                          max_diff(rf::cascade({x, rf::cascade({y, z})}), flat)});
        preserved = preserved && rf::check_passivity(flat).satisfied && rf::check_reciprocity(flat).satisfied;
    }
    v.require(round_trip <= 1e-9, "S <-> ABCD round trip 1e-9");
    v.require(assoc <= 1e-9, "cascade associativity");
    v.require(preserved, "passivity and reciprocity preserved");

    bool spi = tdma::decode_frame(tdma::encode_frame(tdma::MuxState::none())).is_none();
    for (int k = 0; k < tdma::kMuxChannels; ++k) {
        const auto s = tdma::MuxState::select(k);
        spi = spi && tdma::decode_frame(tdma::encode_frame(s)) == s;
    }
    v.require(spi, "encode/decode identity over 9 states");

    const auto t = testing::two_level_trace(Complex(0.4, 1.0), Complex(-0.2, 0.1), 5000, 5000, 0.5, 77);
    const analysis::TimeWindow top{0.0, 5e-3};
    const analysis::TimeWindow bottom{5e-3, 10e-3};
    const double base = analysis::estimate_snr(t, top, bottom, 10e-6).snr_power;
    double invariance = 0.0;
    for (const Complex c : {std::polar(1.0, 0.7), std::polar(1.0, -2.2), Complex(4.5), std::polar(0.01, 1.1)}) {
        auto u = t;
        for (auto& s : u.samples) {
            s *= c;
        }
        invariance = std::max(invariance, std::abs(analysis::estimate_snr(u, top, bottom, 10e-6).snr_power / base - 1.0));
    }
    v.require(invariance <= 1e-9, "estimate_snr phase and scale invariance");

    const auto once = scenario::validate(scenario::default_assembly());
    const auto twice = scenario::validate(once.config);
    v.require(once.config == twice.config && once.warnings == twice.warnings, "validate idempotence");
    v.detail << "round trip " << round_trip << ", associativity " << assoc << ", SNR invariance " << invariance;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "LNA model", 1.0, lna_model},
        {2, "switch consistency", 1.0, switch_consistency},
        {3, "Friis two-stage identity", 1.0, friis_identity},
        {4, "matching synthesis", 5.0, matching_synthesis},
        {5, "lineshape round trip", 5.0, lineshape_round_trip},
        {6, "TDMA reproduction", 30.0, tdma_reproduction},
        {7, "SNR benchmark", 60.0, snr_benchmark},
        {8, "property suites", 10.0, property_suites},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(v);
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << "[exception: " << e.what() << "]";
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (elapsed > c.bound_s) {
            v.pass = false;
            v.detail << " [runtime bound exceeded]";
        }
        failures += v.pass ? 0 : 1;
        std::printf("%s %d %s (%.3f s, bound %.0f s): %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, elapsed,
                    c.bound_s, v.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
