// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>

#include "cryomux/fit/levenberg_marquardt.hpp"

namespace cryomux::seb {

struct LineshapeSample {
    double vg;
    double signal;
};

/// A * sech^2(e alpha (vg - v0) / 2 kB Te) + offset.
double sech2_lineshape(double vg, double amplitude, double v0, double t_e_k, double offset,
                       double alpha);

struct LineshapeFit {
    double t_e_k = 0.0;
    double v0 = 0.0;
    double amplitude = 0.0;
    double offset = 0.0;
    int iterations = 0;
    double rms_residual = 0.0;
};

/// Fits the sech^2 lineshape at known lever arm. Initial guesses: v0 at the
/// data extremum, Te from the second moment of the baseline-subtracted
/// signal, amplitude and offset from the data extremes.
/// Throws DegenerateData for flat input and NoConvergence when the
/// iteration budget runs out.
LineshapeFit fit_electron_temperature(std::span<const LineshapeSample> samples, double alpha,
                                      const fit::LmOptions& options = {});

/// Human-readable key/value report.
std::string format_fit_report(const LineshapeFit& fit, double alpha, std::size_t sample_count);

}  // namespace cryomux::seb
