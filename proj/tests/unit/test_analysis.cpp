// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "cryomux/analysis/benchmark.hpp"
#include "cryomux/analysis/fidelity.hpp"
#include "cryomux/analysis/lineshape.hpp"
#include "cryomux/analysis/resonances.hpp"
#include "cryomux/analysis/snr.hpp"
#include "cryomux/error.hpp"
#include "cryomux/scenario/config.hpp"
#include "cryomux/seb/lineshape_fit.hpp"
#include "cryomux/tdma/assembly.hpp"
#include "support/generators.hpp"

using namespace cryomux;
using namespace cryomux::analysis;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using Complex = std::complex<double>;

namespace {

const tdma::Assembly& default_assembly() {
    static const tdma::Assembly a(scenario::default_assembly());
    return a;
}

constexpr std::size_t kBlock = 10;     // samples per integration period at 1 MS/s
constexpr double kTau = 10e-6;
constexpr std::size_t kBlocks = 1000;  // per level
const TimeWindow kTop{0.0, 10e-3};
const TimeWindow kBottom{10e-3, 20e-3};

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::IoError;
}

tdma::IqTrace rotated(tdma::IqTrace t, Complex factor) {
    for (auto& s : t.samples) {
        s *= factor;
    }
    return t;
}

std::vector<double> dip_trace(const std::vector<double>& f, double noise_db, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> y;
    for (double x : f) {
        y.push_back(testing::lorentzian_dip_db(x, 600e6, 3e6, 0.99) + noise_db * n(rng));
    }
    return y;
}

std::vector<double> grid(double a, double b, double step) {
    std::vector<double> f;
    for (double x = a; x <= b + 0.5 * step; x += step) {
        f.push_back(x);
    }
    return f;
}

}  // namespace

TEST_CASE("two-level Monte Carlo recovers the separation-to-noise ratio") {
    const double delta = 5.0;
    const double sigma_block = 1.0;
    // Per-sample, per-quadrature sd giving the block sd above.
    const double sd = sigma_block * std::sqrt(static_cast<double>(kBlock));
    const auto t = testing::two_level_trace(Complex(0.3, delta), Complex(0.3, 0.0), kBlock * kBlocks,
                                            kBlock * kBlocks, sd, 42);
    const SnrReport r = estimate_snr(t, kTop, kBottom, kTau);
    CHECK(r.blocks_top == kBlocks);
    CHECK(r.blocks_bottom == kBlocks);
    CHECK_THAT(r.snr_power, WithinRel(delta * delta / (sigma_block * sigma_block), 0.10));
    CHECK_THAT(r.snr_power, WithinRel(r.signal_sq / r.noise_sq, 1e-15));
    CHECK_THAT(r.t_min_s, WithinRel(kTau / r.snr_power, 1e-15));
    CHECK_FALSE(r.noiseless);
}

TEST_CASE("SNR is invariant to phase rotation and scaling") {
    const auto t = testing::two_level_trace(Complex(1.0, 2.0), Complex(-0.5, 0.2), kBlock * 200,
                                            kBlock * 200, 0.8, 9);
    const TimeWindow top{0.0, 2e-3};
    const TimeWindow bottom{2e-3, 4e-3};
    const SnrReport base = estimate_snr(t, top, bottom, kTau);
    for (double theta : {0.3, 1.9, -2.7}) {
        const SnrReport r = estimate_snr(rotated(t, std::polar(1.0, theta)), top, bottom, kTau);
        CHECK_THAT(r.snr_power, WithinRel(base.snr_power, 1e-9));
    }
    const double c = 3.7;
    const SnrReport s = estimate_snr(rotated(t, c), top, bottom, kTau);
    CHECK_THAT(s.snr_power, WithinRel(base.snr_power, 1e-9));
    CHECK_THAT(s.signal_sq, WithinRel(c * c * base.signal_sq, 1e-9));
    CHECK_THAT(s.noise_sq, WithinRel(c * c * base.noise_sq, 1e-9));
}

TEST_CASE("noiseless trace reports an infinite SNR") {
    const auto t = testing::two_level_trace(Complex(1.0), Complex(0.0), 200, 200, 0.0, 1);
    const SnrReport r = estimate_snr(t, {0.0, 200e-6}, {200e-6, 400e-6}, kTau);
    CHECK(r.noiseless);
    CHECK(std::isinf(r.snr_power));
    CHECK(r.noise_sq == 0.0);
    CHECK_THAT(r.signal_sq, WithinAbs(1.0, 1e-15));
}

TEST_CASE("SNR window checks") {
    const auto t = testing::two_level_trace(Complex(1.0), Complex(0.0), 200, 200, 0.1, 1);
    CHECK(code_of([&] { (void)estimate_snr(t, {0.0, 300e-6}, {200e-6, 400e-6}, kTau); }) ==
          ErrorCode::WindowOverlap);
    CHECK(code_of([&] { (void)estimate_snr(t, {0.0, 50e-6}, {200e-6, 400e-6}, kTau); }) ==
          ErrorCode::WindowTooShort);
    CHECK(code_of([&] { (void)estimate_snr(t, {0.0, 200e-6}, {300e-6, 900e-6}, kTau); }) ==
          ErrorCode::WindowTooShort);
    CHECK(code_of([&] { (void)estimate_snr(t, {0.0, 200e-6}, {200e-6, 400e-6}, 100e-9); }) ==
          ErrorCode::InvalidArgument);
}

TEST_CASE("SNR scaling with integration time") {
    CHECK(snr_scaling(140.0, 10e-6, 10e-6) == 140.0);
    CHECK_THAT(snr_scaling(140.0, 10e-6, 71.43e-9), WithinAbs(1.0, 1e-3));
    CHECK_THAT(snr_scaling(140.0, 10e-6, 1e-6), WithinRel(14.0, 1e-12));
    const double direct = snr_scaling(140.0, 10e-6, 3e-6);
    const double via = snr_scaling(snr_scaling(140.0, 10e-6, 25e-6), 25e-6, 3e-6);
    CHECK_THAT(via, WithinRel(direct, 1e-12));
    CHECK_THROWS_AS(snr_scaling(-1.0, 1.0, 1.0), Error);
}

TEST_CASE("SNR report text") {
    const auto t = testing::two_level_trace(Complex(1.0), Complex(0.0), 200, 200, 0.1, 1);
    const auto text = format_snr_report(estimate_snr(t, {0.0, 200e-6}, {200e-6, 400e-6}, kTau));
    CHECK(text.find("snr_power") != std::string::npos);
    CHECK(text.find("t_min") != std::string::npos);
}

TEST_CASE("readout fidelity model") {
    CHECK_THAT(readout_fidelity(0.0), WithinAbs(0.5, 1e-15));
    CHECK_THAT(readout_fidelity(1e6), WithinAbs(1.0, 1e-12));
    const double oracle = 1.0 - 0.5 * std::erfc(std::sqrt(14.0) / (2.0 * std::sqrt(2.0)));
    CHECK_THAT(readout_fidelity(14.0), WithinRel(oracle, 1e-14));
    CHECK_THAT(readout_fidelity(14.0), WithinAbs(0.969, 0.001));
    CHECK(readout_fidelity(20.0) > readout_fidelity(14.0));
    const auto rep = fidelity_report(14.0);
    CHECK(rep.model == kFidelityModel);
    CHECK_THAT(rep.error_per_shot, WithinRel(1.0 - oracle, 1e-12));
    CHECK_THROWS_AS(readout_fidelity(-1.0), Error);
}

TEST_CASE("Lorentzian dip is recovered") {
    const auto f = grid(500e6, 700e6, 0.1e6);
    const auto y = dip_trace(f, 0.0, 1);
    const auto res = extract_resonances(f, y);
    REQUIRE(res.size() == 1);
    CHECK_THAT(res[0].f_hz, WithinAbs(600e6, 0.1e6));
    CHECK_THAT(res[0].bandwidth_hz, WithinRel(3e6, 0.10));
    CHECK_THAT(res[0].depth_db, WithinAbs(20.0, 0.1));

    // Peaks are the same feature, negated.
    std::vector<double> neg;
    for (double v : y) {
        neg.push_back(-v);
    }
    const auto peaks = extract_resonances(f, neg, FeatureKind::Peak);
    REQUIRE(peaks.size() == 1);
    CHECK_THAT(peaks[0].f_hz, WithinAbs(res[0].f_hz, 1.0));
}

TEST_CASE("flat trace has no resonance") {
    const auto f = grid(500e6, 700e6, 1e6);
    const std::vector<double> y(f.size(), -3.0);
    CHECK(code_of([&] { (void)extract_resonances(f, y); }) == ErrorCode::NoResonanceFound);
}

TEST_CASE("feature count survives noise 20 dB below the prominence threshold") {
    const auto f = grid(500e6, 700e6, 0.1e6);
    const double noise_db = 3.0 * 0.1;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto y = dip_trace(f, noise_db, seed);
        const auto res = extract_resonances(f, y);
        REQUIRE(res.size() == 1);
        CHECK_THAT(res[0].f_hz, WithinAbs(600e6, 0.5e6));
    }
}

TEST_CASE("default assembly reflection has the two programmed resonances") {
    const auto& a = default_assembly();
    const auto net = a.readout_reflection(rf::FrequencyGrid::linear(500e6, 750e6, 5001));
    const auto res = extract_resonances(net);
    REQUIRE(res.size() == 2);
    CHECK_THAT(res[0].f_hz, WithinAbs(559e6, 1e6));
    CHECK_THAT(res[1].f_hz, WithinAbs(681e6, 1e6));
    for (const auto& r : res) {
        CHECK(r.bandwidth_hz > 1e6);
        CHECK(r.bandwidth_hz < 10e6);
    }

    const auto path = std::filesystem::temp_directory_path() / "cryomux_resonances_test.csv";
    write_resonances_csv(path, res);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "f_hz,depth_db,bw_hz");
    std::filesystem::remove(path);

    // A sweep without reflection features.
    const auto g = rf::FrequencyGrid::linear(500e6, 750e6, 11);
    const rf::TwoPortNetwork flat(g, std::vector<rf::SMatrix>(g.size(), rf::SMatrix{0.5, 0.1, 0.1, 0.5}));
    ResonanceOptions opts;
    opts.parameter = SParameter::S12;
    CHECK(code_of([&] { (void)extract_resonances(flat, opts); }) == ErrorCode::NoResonanceFound);
}

TEST_CASE("two-level benchmark schedule and run") {
    const auto& a = default_assembly();
    const auto s = two_level_schedule(a, {});
    REQUIRE(s.entries().size() == 2);
    CHECK(s.entries()[0].mux == tdma::MuxState::select(0));
    CHECK(s.entries()[1].mux == tdma::MuxState::select(0));
    CHECK_FALSE(s.gaps().size());

    const auto b = run_snr_benchmark(a, 10e-6, 7);
    CHECK(b.tone_hz == 559e6);
    CHECK(b.report.blocks_top >= kMinBlocksPerWindow);
    CHECK_THAT(b.report.snr_power, WithinRel(140.0, 0.15));
    CHECK_THAT(b.fidelity.fidelity, WithinRel(readout_fidelity(b.report.snr_power), 1e-15));
    CHECK_THROWS_AS(two_level_schedule(a, {5, 50e-3}), Error);
}

TEST_CASE("lineshape sweep peaks at degeneracy and refits the temperature") {
    const auto& a = default_assembly();
    for (std::size_t k = 0; k < a.path_count(); ++k) {
        const double v0 = a.path(k).seb.v0;
        const auto pts = lineshape_sweep(a, k, v0 - 1e-3, v0 + 1e-3, 501);
        REQUIRE(pts.size() == 501);
        std::size_t imax = 0;
        std::vector<seb::LineshapeSample> samples;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (pts[i].signal_v > pts[imax].signal_v) {
                imax = i;
            }
            samples.push_back({pts[i].vg, pts[i].signal_v});
        }
        CHECK_THAT(pts[imax].vg, WithinAbs(v0, 1e-9));
        const auto fit = seb::fit_electron_temperature(samples, a.path(k).seb.alpha);
        CHECK_THAT(fit.t_e_k, WithinRel(a.path(k).seb.t_e_k, 1e-3));
    }
    CHECK(code_of([&] { (void)lineshape_sweep(a, 2, -1e-3, 1e-3, 11); }) == ErrorCode::BadSebIndex);
}
