// SPDX-License-Identifier: Apache-2.0
#include "cryomux/analysis/fidelity.hpp"

#include <cmath>

#include "cryomux/error.hpp"

namespace cryomux::analysis {

double readout_fidelity(double snr_power) {
    if (!(snr_power >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "SNR must be >= 0");
    }
    if (std::isinf(snr_power)) {
        return 1.0;
    }
    // Levels separated by d with per-shot sd s: snr = d^2 / s^2 and a
    // midpoint threshold errs with probability Q(d / 2s).
    return 1.0 - 0.5 * std::erfc(std::sqrt(snr_power) / (2.0 * std::sqrt(2.0)));
}

FidelityReport fidelity_report(double snr_power) {
    FidelityReport r;
    r.snr_power = snr_power;
    r.fidelity = readout_fidelity(snr_power);
    r.error_per_shot = 1.0 - r.fidelity;
    return r;
}

}  // namespace cryomux::analysis
