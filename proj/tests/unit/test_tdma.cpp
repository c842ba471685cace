// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <set>

#include "cryomux/components/lna.hpp"
#include "cryomux/error.hpp"
#include "cryomux/scenario/config.hpp"
#include "cryomux/tdma/assembly.hpp"
#include "cryomux/tdma/schedule.hpp"
#include "cryomux/tdma/simulator.hpp"
#include "cryomux/tdma/spi.hpp"
#include "cryomux/units.hpp"

using namespace cryomux;
using namespace cryomux::tdma;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const Assembly& default_assembly() {
    static const Assembly a(scenario::default_assembly());
    return a;
}

ScheduleEntry entry(double t0, double t1, MuxState mux) {
    return ScheduleEntry{t0, t1, mux, {}};
}

double db(Complex v) { return amplitude_to_db(std::abs(v)); }

Complex window_mean(const IqTrace& t, std::size_t a, std::size_t b) {
    Complex s = 0.0;
    for (std::size_t i = a; i < b; ++i) {
        s += t.samples[i];
    }
    return s / static_cast<double>(b - a);
}

// Largest excursion from the window mean, skipping the first two samples.
double excursion(const IqTrace& t, double t0, double t1) {
    auto [a, b] = t.index_range(t0, t1);
    a += 2;
    const Complex m = window_mean(t, a, b);
    double worst = 0.0;
    for (std::size_t i = a; i < b; ++i) {
        worst = std::max(worst, std::abs(t.samples[i] - m));
    }
    return worst;
}

double rms_about_mean(const IqTrace& t, std::size_t a, std::size_t b) {
    const Complex m = window_mean(t, a, b);
    double s = 0.0;
    for (std::size_t i = a; i < b; ++i) {
        s += std::norm(t.samples[i] - m);
    }
    return std::sqrt(s / static_cast<double>(b - a));
}

double rms(const IqTrace& t, std::size_t a, std::size_t b) {
    double s = 0.0;
    for (std::size_t i = a; i < b; ++i) {
        s += std::norm(t.samples[i]);
    }
    return std::sqrt(s / static_cast<double>(b - a));
}

}  // namespace

TEST_CASE("SPI frame encoding") {
    CHECK(encode_frame(MuxState::none()).raw == 0x00);
    CHECK(encode_frame(MuxState::select(5)).raw == 0x85);
    try {
        (void)decode_frame(SpiFrame{0x40});
        FAIL("expected ReservedBitsSet");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ReservedBitsSet);
    }
    std::set<std::uint8_t> seen;
    std::vector<MuxState> states{MuxState::none()};
    for (int k = 0; k < kMuxChannels; ++k) {
        states.push_back(MuxState::select(k));
    }
    for (const auto& s : states) {
        const SpiFrame f = encode_frame(s);
        CHECK((f.raw & SpiFrame::kReservedMask) == 0);
        CHECK(decode_frame(f) == s);
        seen.insert(f.raw);
    }
    CHECK(seen.size() == 9);
    CHECK_THROWS_AS(MuxState::select(8), Error);
    CHECK_THROWS_AS(MuxState::select(-1), Error);
    // Disabled frames ignore the address bits.
    CHECK(decode_frame(SpiFrame{0x03}).is_none());
}

TEST_CASE("SPI frame application") {
    CHECK(apply_frame(MuxState::none(), encode_frame(MuxState::select(1))) == MuxState::select(1));
    CHECK(apply_frame(MuxState::select(1), encode_frame(MuxState::select(0))) == MuxState::select(0));
    CHECK(apply_frame(MuxState::select(3), encode_frame(MuxState::none())).is_none());
    CHECK_THROWS_AS(apply_frame(MuxState::select(3), SpiFrame{0x88}), Error);
}

TEST_CASE("gate waveforms") {
    CHECK(GateWaveform::constant(0.3).value_at(12.0) == 0.3);
    const auto r = GateWaveform::ramp(-1.0, 1.0, 0.0, 2.0);
    CHECK(r.value_at(-1.0) == -1.0);
    CHECK_THAT(r.value_at(1.0), WithinAbs(0.0, 1e-15));
    CHECK(r.value_at(3.0) == 1.0);
    const auto rep = GateWaveform::ramp(0.0, 1.0, 1.0, 2.0, true);
    CHECK_THAT(rep.value_at(2.25), WithinAbs(0.25, 1e-12));
    CHECK_THAT(rep.value_at(5.5), WithinAbs(0.5, 1e-12));
    CHECK_THROWS_AS(GateWaveform::ramp(0.0, 1.0, 1.0, 1.0), Error);
}

TEST_CASE("schedule structure") {
    const TdmaSchedule s({entry(0.0, 1.0, MuxState::select(0)), entry(1.5, 2.0, MuxState::none())});
    CHECK(s.start_time() == 0.0);
    CHECK(s.end_time() == 2.0);
    REQUIRE(s.gaps().size() == 1);
    CHECK(s.gaps()[0] == std::pair<double, double>{1.0, 1.5});
    CHECK(s.entry_at(0.5)->mux == MuxState::select(0));
    CHECK(s.entry_at(1.2) == nullptr);
    CHECK_THROWS_AS(TdmaSchedule({}), Error);
    CHECK_THROWS_AS(TdmaSchedule({entry(0.0, 1.0, MuxState::none()), entry(0.5, 2.0, MuxState::none())}),
                    Error);
    CHECK_THROWS_AS(TdmaSchedule({entry(1.0, 1.0, MuxState::none())}), Error);
}

TEST_CASE("assembly chain suppression") {
    const Assembly& a = default_assembly();
    const auto idle = a.idle_gates();
    const double f0 = 559e6;
    const double f1 = 681e6;
    const auto chain = [&](int ch, double f) { return a.chain_transmission(MuxState::select(ch), idle, f); };

    CHECK(db(chain(1, f1)) - db(chain(0, f1)) >= 13.0);
    CHECK(db(chain(0, f0)) - db(chain(1, f0)) >= 13.0);
    for (int unused = 2; unused < 8; ++unused) {
        CHECK(db(chain(0, f0)) - db(chain(unused, f0)) >= 39.0);
        CHECK(db(chain(1, f1)) - db(chain(unused, f1)) >= 39.0);
    }
    CHECK(db(chain(0, f0)) - db(a.chain_transmission(MuxState::none(), idle, f0)) >= 39.0);

    // Oscillation amplitude, top minus idle, for SEB 1 at its tone.
    const auto delta = [&](int ch) {
        return std::abs(a.chain_transmission(MuxState::select(ch), idle[0], a.path(1).seb.v0, f1) -
                        chain(ch, f1));
    };
    CHECK(amplitude_to_db(delta(1) / delta(0)) >= 13.0);
    CHECK(amplitude_to_db(delta(1) / delta(2)) >= 39.0);

    CHECK_THROWS_AS(a.chain_transmission(MuxState::select(0), std::vector<double>{0.0}, f0), Error);
}

TEST_CASE("assembly noise and calibration") {
    const Assembly& a = default_assembly();
    const auto& cfg = a.config();
    const double f = 559e6;
    const double g_lna = components::lna_power_gain(cfg.lna, f);
    const double t_oracle = components::lna_noise_temperature(cfg.lna, f) + 100.0 / g_lna;
    CHECK_THAT(a.system_noise_temperature(f), WithinRel(t_oracle, 1e-12));
    CHECK_THAT(a.noise_variance(f), WithinRel(kBoltzmann * t_oracle * 3e6 * 50.0 *
                                                  g_lna * db_to_power(40.0), 1e-12));
    CHECK(a.oversampling() == 6);

    // Block-mean variance against the direct lag sum.
    const int m = a.oversampling();
    const double rho = std::exp(-kTwoPi * 3e6 / (1e6 * m));
    for (std::size_t n_out : {1u, 3u, 10u}) {
        const auto n = static_cast<int>(n_out) * m;
        double corr = 1.0;
        for (int k = 1; k < n; ++k) {
            corr += 2.0 * (1.0 - static_cast<double>(k) / n) * std::pow(rho, k);
        }
        CHECK_THAT(a.block_mean_variance(f, n_out), WithinRel(a.noise_variance(f) * corr / n, 1e-10));
    }

    // Calibrated drive reproduces the target on the analytic level.
    const auto idle = a.idle_gates();
    std::vector<double> top = idle;
    top[0] = a.path(0).seb.v0;
    const Complex d = a.drive_amplitude() * (a.chain_transmission(MuxState::select(0), top, f) -
                                             a.chain_transmission(MuxState::select(0), idle, f));
    CHECK_THAT(std::norm(d) / a.block_mean_variance(f, 10), WithinRel(140.0, 1e-9));

    const double phase = a.demod_phase(f);
    CHECK_THAT(std::arg(a.chain_transmission(MuxState::select(0), idle, f) * std::polar(1.0, -phase)),
               WithinAbs(0.0, 1e-12));
    CHECK(a.path_for_tone(559.5e6) == std::optional<std::size_t>{0});
    CHECK_FALSE(a.path_for_tone(600e6).has_value());
    CHECK(a.demod_phase(600e6) == 0.0);
}

TEST_CASE("simulation with the three-window schedule") {
    const Assembly& a = default_assembly();
    const auto sched = scenario::three_window_schedule(a.config());
    const std::vector<double> tones{559e6, 681e6};

    SECTION("noise off: bit-exact and windows confined") {
        const auto r1 = simulate(sched, tones, a, {false, 1, false});
        const auto r2 = simulate(sched, tones, a, {false, 99, false});
        REQUIRE(r1.traces.size() == 2);
        CHECK(r1.traces[0].samples == r2.traces[0].samples);
        CHECK(r1.traces[1].samples == r2.traces[1].samples);
        CHECK(r1.traces[0].samples.size() == 1060000);

        const auto& t0 = r1.traces[0];
        const auto& t1 = r1.traces[1];
        const double w1_f0 = excursion(t0, 0.0, 0.4);
        const double w2_f0 = excursion(t0, 0.4, 0.66);
        const double w3_f0 = excursion(t0, 0.66, 1.06);
        const double w1_f1 = excursion(t1, 0.0, 0.4);
        const double w2_f1 = excursion(t1, 0.4, 0.66);
        const double w3_f1 = excursion(t1, 0.66, 1.06);
        CHECK(w1_f0 > 0.0);
        CHECK(w3_f1 > 0.0);
        CHECK(w2_f0 <= 1e-12 * w1_f0);
        CHECK(w2_f1 <= 1e-12 * w3_f1);
        CHECK(amplitude_to_db(w1_f0 / w3_f0) >= 13.0);
        CHECK(amplitude_to_db(w3_f1 / w1_f1) >= 13.0);
    }
    SECTION("noise on: reproducible per seed, deselect RMS equals the floor") {
        const auto r1 = simulate(sched, tones, a, {true, 7, false});
        const auto r2 = simulate(sched, tones, a, {true, 7, false});
        const auto r3 = simulate(sched, tones, a, {true, 8, false});
        CHECK(r1.traces[0].samples == r2.traces[0].samples);
        CHECK(r1.traces[0].samples != r3.traces[0].samples);
        for (std::size_t k = 0; k < tones.size(); ++k) {
            const auto& t = r1.traces[k];
            const auto [b, e] = t.index_range(0.4, 0.66);
            const double floor = std::sqrt(2.0 * a.block_mean_variance(tones[k], 1));
            CHECK_THAT(rms_about_mean(t, b + 2, e), WithinRel(floor, 0.10));
        }
    }
}

TEST_CASE("selected channel outweighs others in trace energy") {
    const Assembly& a = default_assembly();
    const TdmaSchedule s({entry(0.0, 1e-3, MuxState::select(0)), entry(1e-3, 2e-3, MuxState::select(1)),
                          entry(2e-3, 3e-3, MuxState::select(2))});
    const std::vector<double> tones{559e6, 681e6};
    const auto r = simulate(s, tones, a, {false, 1, false});
    const auto window_rms = [&](std::size_t k, int w) {
        const auto [b, e] = r.traces[k].index_range(1e-3 * w, 1e-3 * (w + 1));
        return rms(r.traces[k], b + 2, e);
    };
    CHECK(amplitude_to_db(window_rms(0, 0) / window_rms(0, 1)) >= 13.0);
    CHECK(amplitude_to_db(window_rms(1, 1) / window_rms(1, 0)) >= 13.0);
    CHECK(amplitude_to_db(window_rms(0, 0) / window_rms(0, 2)) >= 39.0);
    CHECK(amplitude_to_db(window_rms(1, 1) / window_rms(1, 2)) >= 39.0);
}

TEST_CASE("switching transient settles within one sample") {
    const Assembly& a = default_assembly();
    const TdmaSchedule s({entry(0.0, 100e-6, MuxState::none()), entry(100e-6, 200e-6, MuxState::select(0))});
    const std::vector<double> tones{559e6};
    const auto r = simulate(s, tones, a, {false, 1, false});
    const auto& y = r.traces[0].samples;
    REQUIRE(y.size() == 200);
    const Complex before = y[99];
    const Complex after = y.back();
    const double step = std::abs(after - before);
    CHECK(std::abs(y[100] - after) <= 0.01 * step);
    CHECK(std::abs(y[101] - after) <= 1e-6 * step);
    for (std::size_t i = 1; i < 100; ++i) {
        CHECK(y[i] == y[0]);
    }
}

TEST_CASE("block means of a noisy static window follow the predicted variance") {
    const Assembly& a = default_assembly();
    const TdmaSchedule s({entry(0.0, 0.2, MuxState::select(0))});
    const std::vector<double> tones{559e6};
    const auto r = simulate(s, tones, a, {true, 3, false});
    const auto& y = r.traces[0].samples;
    const std::size_t n = 10;
    std::vector<double> re;
    for (std::size_t i = 0; i + n <= y.size(); i += n) {
        re.push_back(std::accumulate(y.begin() + static_cast<long>(i), y.begin() + static_cast<long>(i + n),
                                     Complex(0.0))
                         .real() /
                     static_cast<double>(n));
    }
    const double mean = std::accumulate(re.begin(), re.end(), 0.0) / static_cast<double>(re.size());
    double var = 0.0;
    for (double v : re) {
        var += (v - mean) * (v - mean);
    }
    var /= static_cast<double>(re.size() - 1);
    CHECK_THAT(var, WithinRel(a.block_mean_variance(559e6, n), 0.05));
}

TEST_CASE("schedule gaps and tone seeds") {
    const Assembly& a = default_assembly();
    const TdmaSchedule gap({entry(0.0, 1e-4, MuxState::select(0)), entry(2e-4, 3e-4, MuxState::select(0))});
    const std::vector<double> tones{559e6};
    const auto r = simulate(gap, tones, a, {false, 1, false});
    CHECK_FALSE(r.warnings.empty());
    CHECK(r.traces[0].samples.size() == 300);
    try {
        (void)simulate(gap, tones, a, {false, 1, true});
        FAIL("expected ScheduleGap");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ScheduleGap);
    }
    CHECK(derive_tone_seed(1, 0) != derive_tone_seed(1, 1));
    CHECK(derive_tone_seed(1, 0) != derive_tone_seed(2, 0));
    CHECK(derive_tone_seed(5, 3) == derive_tone_seed(5, 3));
    const std::vector<double> bad{-1.0};
    CHECK_THROWS_AS(simulate(gap, bad, a, {}), Error);
}

TEST_CASE("trace index ranges") {
    IqTrace t{1e9, 1e6, 0.5, std::vector<Complex>(100)};
    CHECK(t.time_at(10) == Catch::Approx(0.5 + 10e-6));
    CHECK(t.index_range(0.5, 0.5 + 50e-6) == std::pair<std::size_t, std::size_t>{0, 50});
    CHECK(t.index_range(0.5 + 10.5e-6, 1.0) == std::pair<std::size_t, std::size_t>{11, 100});
    CHECK(t.index_range(0.0, 0.1) == std::pair<std::size_t, std::size_t>{0, 0});
}
