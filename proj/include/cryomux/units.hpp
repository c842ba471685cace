// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>

namespace cryomux {

// CODATA 2018 exact values.
inline constexpr double kElectronCharge = 1.602176634e-19;  // C
inline constexpr double kBoltzmann = 1.380649e-23;          // J/K

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double power_to_db(double p) { return 10.0 * std::log10(p); }
inline double amplitude_to_db(double a) { return 20.0 * std::log10(a); }

}  // namespace cryomux
