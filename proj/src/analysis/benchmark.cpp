// SPDX-License-Identifier: Apache-2.0
#include "cryomux/analysis/benchmark.hpp"

#include "cryomux/error.hpp"

namespace cryomux::analysis {

tdma::TdmaSchedule two_level_schedule(const tdma::Assembly& assembly, const TwoLevelSetup& setup) {
    if (setup.seb >= assembly.path_count()) {
        throw Error(ErrorCode::BadSebIndex, "no SEB path " + std::to_string(setup.seb));
    }
    if (!(setup.window_s > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "window length must be > 0");
    }
    const auto& p = assembly.config().seb_paths[setup.seb];
    const tdma::MuxState mux = tdma::MuxState::select(p.channel);
    std::vector<std::optional<tdma::GateWaveform>> top(assembly.path_count());
    std::vector<std::optional<tdma::GateWaveform>> bottom(assembly.path_count());
    top[setup.seb] = tdma::GateWaveform::constant(p.v0);
    bottom[setup.seb] = tdma::GateWaveform::constant(p.idle_gate_v);
    return tdma::TdmaSchedule({{0.0, setup.window_s, mux, top},
                               {setup.window_s, 2.0 * setup.window_s, mux, bottom}});
}

SnrBenchmark run_snr_benchmark(const tdma::Assembly& assembly, double tau_s, std::uint64_t seed,
                               const TwoLevelSetup& setup) {
    const tdma::TdmaSchedule schedule = two_level_schedule(assembly, setup);
    const auto f = assembly.config().path_frequency_hz(setup.seb);
    if (!f) {
        throw Error(ErrorCode::IncompleteConfig, "the benchmark SEB needs a target frequency");
    }
    const double tone = *f;
    tdma::SimulationOptions opts;
    opts.noise = true;
    opts.seed = seed;
    const auto sim = tdma::simulate(schedule, std::span<const double>(&tone, 1), assembly, opts);
    SnrBenchmark out;
    out.tone_hz = tone;
    out.report = estimate_snr(sim.traces.front(), {0.0, setup.window_s},
                              {setup.window_s, 2.0 * setup.window_s}, tau_s);
    out.fidelity = fidelity_report(out.report.snr_power);
    return out;
}

}  // namespace cryomux::analysis
