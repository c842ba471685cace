// SPDX-License-Identifier: Apache-2.0
#pragma once

// Noise-temperature cascade (Friis formula in temperature form).

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cryomux/rf/two_port.hpp"

namespace cryomux::noise {

inline constexpr double kReferenceTemperature = 290.0;  // K, for noise figure

/// Noise temperature of a matched passive loss L >= 1 at physical temperature
/// t_phys: (L - 1) * t_phys. Throws InvalidLoss for L < 1.
double passive_noise_temperature(double loss_linear, double t_phys_k);

/// 10 log10(1 + T / 290 K).
double noise_figure_db(double noise_temperature_k);

/// A chain element with per-frequency power gain and noise temperature. A
/// passive stage stores its loss and physical temperature; its gain (1/L) and
/// noise temperature are derived from them.
class StageSpec {
public:
    static StageSpec active(std::string label, rf::FrequencyGrid grid, std::vector<double> gain,
                            std::vector<double> noise_temperature_k);
    static StageSpec passive(std::string label, rf::FrequencyGrid grid,
                             std::vector<double> loss_linear, double t_phys_k);

    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] const rf::FrequencyGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const double> gain() const noexcept { return gain_; }
    [[nodiscard]] std::span<const double> noise_temperature() const noexcept { return t_noise_; }
    [[nodiscard]] std::optional<double> physical_temperature() const noexcept { return t_phys_; }

private:
    StageSpec(std::string label, rf::FrequencyGrid grid, std::vector<double> gain,
              std::vector<double> t_noise, std::optional<double> t_phys);

    std::string label_;
    rf::FrequencyGrid grid_;
    std::vector<double> gain_;
    std::vector<double> t_noise_;
    std::optional<double> t_phys_;
};

struct SystemNoiseResult {
    rf::FrequencyGrid grid;
    std::vector<double> t_sys_k;
    std::vector<std::string> stage_labels;
    /// contributions[stage][point], kelvin referred to the chain input.
    std::vector<std::vector<double>> per_stage_contribution_k;
};

struct StagePoint {
    double gain;
    double noise_temperature_k;
};

/// Single-frequency cascade; returns per-stage input-referred contributions.
std::vector<double> friis_contributions(std::span<const StagePoint> stages);
double friis_point(std::span<const StagePoint> stages);

/// Throws GridMismatch if any stage is defined on a different grid.
SystemNoiseResult friis_cascade(std::span<const StageSpec> stages, const rf::FrequencyGrid& grid);

/// Columns: f_hz, t_sys_k, then one "<label>_k" column per stage.
void write_noise_csv(const std::filesystem::path& path, const SystemNoiseResult& result);

}  // namespace cryomux::noise
