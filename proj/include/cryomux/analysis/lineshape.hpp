// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <filesystem>
#include <span>
#include <vector>

#include "cryomux/tdma/assembly.hpp"

namespace cryomux::analysis {

struct LineshapePoint {
    double vg = 0.0;
    std::complex<double> iq;  // demodulated output, V
    double signal_v = 0.0;    // change from the idle level, projected on the response axis
};

/// Noise-free gate sweep of SEB `seb` read at its own frequency with its
/// channel selected; the other gates stay idle. The projection axis is the
/// direction of the response at charge degeneracy, so the peak is positive.
/// Throws BadSebIndex, and InvalidArgument for fewer than 2 points.
std::vector<LineshapePoint> lineshape_sweep(const tdma::Assembly& assembly, std::size_t seb,
                                            double vg_start, double vg_stop, std::size_t points);

/// Columns vg_v, i_v, q_v, signal_v.
void write_lineshape_csv(const std::filesystem::path& path, std::span<const LineshapePoint> pts);

}  // namespace cryomux::analysis
