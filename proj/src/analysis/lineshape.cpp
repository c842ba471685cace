// SPDX-License-Identifier: Apache-2.0
#include "cryomux/analysis/lineshape.hpp"

#include "cryomux/error.hpp"
#include "cryomux/io/csv.hpp"

namespace cryomux::analysis {

std::vector<LineshapePoint> lineshape_sweep(const tdma::Assembly& assembly, std::size_t seb,
                                            double vg_start, double vg_stop, std::size_t points) {
    if (seb >= assembly.path_count()) {
        throw Error(ErrorCode::BadSebIndex, "no SEB path " + std::to_string(seb) + " (assembly has " +
                                                std::to_string(assembly.path_count()) + ")");
    }
    if (points < 2 || !(vg_stop != vg_start)) {
        throw Error(ErrorCode::InvalidArgument, "a sweep needs >= 2 points over a non-empty range");
    }
    const auto f = assembly.config().path_frequency_hz(seb);
    if (!f) {
        throw Error(ErrorCode::IncompleteConfig, "SEB path has no declared frequency");
    }
    const tdma::MuxState mux = tdma::MuxState::select(assembly.path_channel(seb));
    const std::complex<double> scale = assembly.drive_amplitude() *
                                       std::polar(1.0, -assembly.demod_phase(*f));
    std::vector<double> gates = assembly.idle_gates();
    const std::complex<double> idle = scale * assembly.chain_transmission(mux, gates, *f);
    gates[seb] = assembly.config().seb_paths[seb].v0;
    const std::complex<double> axis = scale * assembly.chain_transmission(mux, gates, *f) - idle;
    const std::complex<double> u =
        std::abs(axis) > 0.0 ? axis / std::abs(axis) : std::complex<double>(1.0, 0.0);

    std::vector<LineshapePoint> out(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double vg = vg_start + (vg_stop - vg_start) * static_cast<double>(i) /
                                         static_cast<double>(points - 1);
        gates[seb] = vg;
        const auto iq = scale * assembly.chain_transmission(mux, gates, *f);
        out[i] = {vg, iq, (std::conj(u) * (iq - idle)).real()};
    }
    return out;
}

void write_lineshape_csv(const std::filesystem::path& path, std::span<const LineshapePoint> pts) {
    io::CsvWriter csv(path, {"vg_v", "i_v", "q_v", "signal_v"});
    for (const auto& p : pts) {
        csv.row({p.vg, p.iq.real(), p.iq.imag(), p.signal_v});
    }
}

}  // namespace cryomux::analysis
