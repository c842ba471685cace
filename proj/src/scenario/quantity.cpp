// SPDX-License-Identifier: Apache-2.0
#include "cryomux/scenario/quantity.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

#include "cryomux/error.hpp"
#include "cryomux/io/number_format.hpp"

namespace cryomux::scenario {

namespace {

struct UnitEntry {
    std::string_view symbol;
    Dimension dim;
    double scale;
};

constexpr double kDeg = std::numbers::pi / 180.0;

constexpr std::array kUnits{
    UnitEntry{"Hz", Dimension::Frequency, 1.0},       UnitEntry{"kHz", Dimension::Frequency, 1e3},
    UnitEntry{"MHz", Dimension::Frequency, 1e6},      UnitEntry{"GHz", Dimension::Frequency, 1e9},
    UnitEntry{"K", Dimension::Temperature, 1.0},      UnitEntry{"mK", Dimension::Temperature, 1e-3},
    UnitEntry{"uK", Dimension::Temperature, 1e-6},    UnitEntry{"dB", Dimension::Decibel, 1.0},
    UnitEntry{"ohm", Dimension::Resistance, 1.0},     UnitEntry{"kohm", Dimension::Resistance, 1e3},
    UnitEntry{"Mohm", Dimension::Resistance, 1e6},    UnitEntry{"F", Dimension::Capacitance, 1.0},
    UnitEntry{"uF", Dimension::Capacitance, 1e-6},    UnitEntry{"nF", Dimension::Capacitance, 1e-9},
    UnitEntry{"pF", Dimension::Capacitance, 1e-12},   UnitEntry{"fF", Dimension::Capacitance, 1e-15},
    UnitEntry{"aF", Dimension::Capacitance, 1e-18},   UnitEntry{"H", Dimension::Inductance, 1.0},
    UnitEntry{"mH", Dimension::Inductance, 1e-3},     UnitEntry{"uH", Dimension::Inductance, 1e-6},
    UnitEntry{"nH", Dimension::Inductance, 1e-9},     UnitEntry{"pH", Dimension::Inductance, 1e-12},
    UnitEntry{"V", Dimension::Voltage, 1.0},          UnitEntry{"mV", Dimension::Voltage, 1e-3},
    UnitEntry{"uV", Dimension::Voltage, 1e-6},        UnitEntry{"nV", Dimension::Voltage, 1e-9},
    UnitEntry{"s", Dimension::Time, 1.0},             UnitEntry{"ms", Dimension::Time, 1e-3},
    UnitEntry{"us", Dimension::Time, 1e-6},           UnitEntry{"ns", Dimension::Time, 1e-9},
    UnitEntry{"ps", Dimension::Time, 1e-12},          UnitEntry{"rad", Dimension::Angle, 1.0},
    UnitEntry{"deg", Dimension::Angle, kDeg},
};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string_view si_unit(Dimension dim) noexcept {
    switch (dim) {
        case Dimension::Frequency: return "Hz";
        case Dimension::Temperature: return "K";
        case Dimension::Decibel: return "dB";
        case Dimension::Resistance: return "ohm";
        case Dimension::Capacitance: return "F";
        case Dimension::Inductance: return "H";
        case Dimension::Voltage: return "V";
        case Dimension::Time: return "s";
        case Dimension::Angle: return "rad";
    }
    return "";
}

std::string_view dimension_name(Dimension dim) noexcept {
    switch (dim) {
        case Dimension::Frequency: return "frequency";
        case Dimension::Temperature: return "temperature";
        case Dimension::Decibel: return "decibel ratio";
        case Dimension::Resistance: return "resistance";
        case Dimension::Capacitance: return "capacitance";
        case Dimension::Inductance: return "inductance";
        case Dimension::Voltage: return "voltage";
        case Dimension::Time: return "time";
        case Dimension::Angle: return "angle";
    }
    return "";
}

double parse_quantity(std::string_view text, Dimension expected) {
    const std::string_view t = trim(text);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr == t.data()) {
        throw Error(ErrorCode::ParseError, "'" + std::string(text) + "' does not start with a number");
    }
    std::string_view unit = trim(std::string_view(ptr, static_cast<std::size_t>(t.data() + t.size() - ptr)));
    if (unit.empty()) {
        throw Error(ErrorCode::ParseError, "'" + std::string(text) + "' has no unit; expected a " +
                                               std::string(dimension_name(expected)) + " such as '1 " +
                                               std::string(si_unit(expected)) + "'");
    }
    std::string normalized(unit);
    if (normalized.starts_with("\xC2\xB5")) {  // micro sign
        normalized = "u" + normalized.substr(2);
    }
    if (normalized.ends_with("\xCE\xA9")) {  // omega
        normalized = normalized.substr(0, normalized.size() - 2) + "ohm";
    }
    for (const auto& u : kUnits) {
        if (u.symbol == normalized) {
            if (u.dim != expected) {
                throw Error(ErrorCode::ParseError, "'" + std::string(text) + "' is a " +
                                                       std::string(dimension_name(u.dim)) +
                                                       ", expected a " +
                                                       std::string(dimension_name(expected)));
            }
            // Negative decades divide by an exact power of ten so that e.g.
            // "10 us" lands on the double nearest 1e-5.
            if (u.scale < 1.0 && u.dim != Dimension::Angle) {
                return value / std::pow(10.0, std::round(-std::log10(u.scale)));
            }
            return value * u.scale;
        }
    }
    throw Error(ErrorCode::ParseError, "unknown unit '" + std::string(unit) + "' in '" +
                                           std::string(text) + "'");
}

std::string format_quantity(double si_value, Dimension dim) {
    return io::format_double(si_value) + " " + std::string(si_unit(dim));
}

}  // namespace cryomux::scenario
