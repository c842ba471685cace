// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "cryomux/rf/two_port.hpp"

namespace cryomux::analysis {

struct Resonance {
    double f_hz = 0.0;
    double depth_db = 0.0;      // prominence above (dip) or below (peak) the lower shoulder
    double bandwidth_hz = 0.0;  // full width at half depth, in linear power
};

enum class SParameter { S11, S12, S21, S22 };
enum class FeatureKind { Dip, Peak };

struct ResonanceOptions {
    SParameter parameter = SParameter::S11;
    FeatureKind kind = FeatureKind::Dip;
    double min_prominence_db = 3.0;
};

/// Features of a magnitude trace in dB, sorted by frequency. The extremum is
/// refined with a parabola through the three samples around it.
/// Throws NoResonanceFound when nothing clears the prominence threshold.
std::vector<Resonance> extract_resonances(std::span<const double> f_hz,
                                          std::span<const double> magnitude_db,
                                          FeatureKind kind = FeatureKind::Dip,
                                          double min_prominence_db = 3.0);
std::vector<Resonance> extract_resonances(const rf::TwoPortNetwork& sweep,
                                          const ResonanceOptions& options = {});

/// Columns f_hz, depth_db, bw_hz.
void write_resonances_csv(const std::filesystem::path& path, std::span<const Resonance> list);

}  // namespace cryomux::analysis
