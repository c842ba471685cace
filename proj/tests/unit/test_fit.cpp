// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "cryomux/error.hpp"
#include "cryomux/fit/levenberg_marquardt.hpp"
#include "cryomux/seb/lineshape_fit.hpp"
#include "cryomux/units.hpp"

using namespace cryomux;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kAlpha = 0.5;
constexpr double kTe = 0.36;
constexpr double kV0 = 1.5e-3;
constexpr double kAmp = 2e-4;
constexpr double kOffset = 1e-5;

// Lineshape written out from its definition, independent of the library.
double sech2_oracle(double vg) {
    const double x = kElectronCharge * kAlpha * (vg - kV0) / (2.0 * kBoltzmann * kTe);
    const double s = 1.0 / std::cosh(x);
    return kAmp * s * s + kOffset;
}

std::vector<seb::LineshapeSample> synthetic(std::size_t n, double noise_rel, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_rel * kAmp);
    std::vector<seb::LineshapeSample> s;
    for (std::size_t i = 0; i < n; ++i) {
        const double vg = kV0 - 1e-3 + 2e-3 * static_cast<double>(i) / static_cast<double>(n - 1);
        s.push_back({vg, sech2_oracle(vg) + (noise_rel > 0.0 ? noise(rng) : 0.0)});
    }
    return s;
}

}  // namespace

TEST_CASE("LM recovers an exponential decay") {
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) {
        x.push_back(0.1 * i);
        y.push_back(3.0 * std::exp(-1.7 * x.back()) + 0.2);
    }
    const fit::ResidualFn r = [&](const Eigen::VectorXd& p, Eigen::VectorXd& out) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            out[static_cast<Eigen::Index>(i)] = p[0] * std::exp(-p[1] * x[i]) + p[2] - y[i];
        }
        return true;
    };
    Eigen::VectorXd p0(3);
    p0 << 1.0, 1.0, 0.0;
    const Eigen::VectorXd scale = Eigen::VectorXd::Ones(3);
    const auto res = fit::levenberg_marquardt(r, p0, scale, static_cast<Eigen::Index>(x.size()));
    CHECK(res.converged);
    CHECK_THAT(res.params[0], WithinRel(3.0, 1e-8));
    CHECK_THAT(res.params[1], WithinRel(1.7, 1e-8));
    CHECK_THAT(res.params[2], WithinRel(0.2, 1e-7));
    CHECK(res.cost < 1e-20);
}

TEST_CASE("LM rejects a start outside the model domain") {
    const fit::ResidualFn r = [](const Eigen::VectorXd& p, Eigen::VectorXd& out) {
        out[0] = p[0];
        return p[0] > 0.0;
    };
    Eigen::VectorXd p0(1);
    p0 << -1.0;
    CHECK_THROWS_AS(fit::levenberg_marquardt(r, p0, Eigen::VectorXd::Ones(1), 1), Error);
}

TEST_CASE("library lineshape matches the definition") {
    for (double vg = kV0 - 1e-3; vg <= kV0 + 1e-3; vg += 1e-4) {
        CHECK_THAT(seb::sech2_lineshape(vg, kAmp, kV0, kTe, kOffset, kAlpha),
                   WithinRel(sech2_oracle(vg), 1e-13));
    }
}

TEST_CASE("noiseless lineshape refits exactly") {
    const auto s = synthetic(501, 0.0, 1);
    const auto fit = seb::fit_electron_temperature(s, kAlpha);
    CHECK_THAT(fit.t_e_k, WithinRel(kTe, 1e-6));
    CHECK_THAT(fit.v0, WithinAbs(kV0, 1e-6 * std::abs(kV0)));
    CHECK_THAT(fit.amplitude, WithinRel(kAmp, 1e-6));
    CHECK(fit.iterations > 0);
}

TEST_CASE("noisy lineshape refits within 5 percent") {
    const auto s = synthetic(500, 0.05, 20240611);
    const auto fit = seb::fit_electron_temperature(s, kAlpha);
    CHECK_THAT(fit.t_e_k, WithinRel(kTe, 0.05));
    CHECK(fit.rms_residual > 0.0);
}

TEST_CASE("lineshape fit input checks") {
    std::vector<seb::LineshapeSample> flat(50, {0.0, 1.0});
    for (std::size_t i = 0; i < flat.size(); ++i) {
        flat[i].vg = 1e-5 * static_cast<double>(i);
    }
    try {
        (void)seb::fit_electron_temperature(flat, kAlpha);
        FAIL("expected DegenerateData");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateData);
    }
    const auto few = synthetic(9, 0.0, 1);
    CHECK_THROWS_AS(seb::fit_electron_temperature(few, kAlpha), Error);
    const auto ok = synthetic(50, 0.0, 1);
    CHECK_THROWS_AS(seb::fit_electron_temperature(ok, 0.0), Error);
}

TEST_CASE("fit report lists the temperature") {
    const auto s = synthetic(101, 0.0, 1);
    const auto fit = seb::fit_electron_temperature(s, kAlpha);
    const std::string report = seb::format_fit_report(fit, kAlpha, s.size());
    CHECK(report.find("t_e") != std::string::npos);
}
