// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

namespace cryomux::scenario {

enum class Dimension {
    Frequency,    // Hz
    Temperature,  // K
    Decibel,      // dB
    Resistance,   // ohm
    Capacitance,  // F
    Inductance,   // H
    Voltage,      // V
    Time,         // s
    Angle,        // rad
};

std::string_view si_unit(Dimension dim) noexcept;
std::string_view dimension_name(Dimension dim) noexcept;

/// Parses "<number> <unit>" (e.g. "559 MHz", "20 mK", "-16 dB") into SI.
/// A missing or mismatched unit throws ParseError.
double parse_quantity(std::string_view text, Dimension expected);

/// Canonical "<shortest round-trip number> <SI unit>".
std::string format_quantity(double si_value, Dimension dim);

}  // namespace cryomux::scenario
