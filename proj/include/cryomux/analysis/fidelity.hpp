// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace cryomux::analysis {

/// Tag attached to every reported fidelity.
inline constexpr const char* kFidelityModel =
    "two-gaussian, equal widths, midpoint threshold; eps = erfc(sqrt(snr)/(2 sqrt 2))/2";

struct FidelityReport {
    double snr_power = 0.0;
    double error_per_shot = 0.5;
    double fidelity = 0.5;
    std::string model = kFidelityModel;
};

/// 1 - erfc(sqrt(snr) / (2 sqrt 2)) / 2. Throws InvalidArgument for snr < 0.
double readout_fidelity(double snr_power);
FidelityReport fidelity_report(double snr_power);

}  // namespace cryomux::analysis
