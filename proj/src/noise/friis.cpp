// SPDX-License-Identifier: Apache-2.0
#include "cryomux/noise/friis.hpp"

#include <cmath>
#include <sstream>

#include "cryomux/error.hpp"
#include "cryomux/io/csv.hpp"

namespace cryomux::noise {

double passive_noise_temperature(double loss_linear, double t_phys_k) {
    if (!(loss_linear >= 1.0)) {
        std::ostringstream os;
        os << "passive loss must be >= 1 (got " << loss_linear << ")";
        throw Error(ErrorCode::InvalidLoss, os.str());
    }
    if (!(t_phys_k >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "physical temperature must be >= 0 K");
    }
    return (loss_linear - 1.0) * t_phys_k;
}

double noise_figure_db(double noise_temperature_k) {
    return 10.0 * std::log10(1.0 + noise_temperature_k / kReferenceTemperature);
}

StageSpec::StageSpec(std::string label, rf::FrequencyGrid grid, std::vector<double> gain,
                     std::vector<double> t_noise, std::optional<double> t_phys)
    : label_(std::move(label)),
      grid_(std::move(grid)),
      gain_(std::move(gain)),
      t_noise_(std::move(t_noise)),
      t_phys_(t_phys) {
    if (gain_.size() != grid_.size() || t_noise_.size() != grid_.size()) {
        throw Error(ErrorCode::GridMismatch, "stage '" + label_ + "' needs one value per grid point");
    }
    for (std::size_t i = 0; i < gain_.size(); ++i) {
        if (!(gain_[i] > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "stage '" + label_ + "' gain must be > 0");
        }
        if (!(t_noise_[i] >= 0.0)) {
            throw Error(ErrorCode::InvalidArgument,
                        "stage '" + label_ + "' noise temperature must be >= 0 K");
        }
    }
}

StageSpec StageSpec::active(std::string label, rf::FrequencyGrid grid, std::vector<double> gain,
                            std::vector<double> noise_temperature_k) {
    return StageSpec(std::move(label), std::move(grid), std::move(gain),
                     std::move(noise_temperature_k), std::nullopt);
}

StageSpec StageSpec::passive(std::string label, rf::FrequencyGrid grid,
                             std::vector<double> loss_linear, double t_phys_k) {
    std::vector<double> gain(loss_linear.size());
    std::vector<double> t_noise(loss_linear.size());
    for (std::size_t i = 0; i < loss_linear.size(); ++i) {
        t_noise[i] = passive_noise_temperature(loss_linear[i], t_phys_k);
        gain[i] = 1.0 / loss_linear[i];
    }
    return StageSpec(std::move(label), std::move(grid), std::move(gain), std::move(t_noise),
                     t_phys_k);
}

std::vector<double> friis_contributions(std::span<const StagePoint> stages) {
    if (stages.empty()) {
        throw Error(ErrorCode::InvalidArgument, "noise cascade needs at least one stage");
    }
    std::vector<double> out;
    out.reserve(stages.size());
    double preceding_gain = 1.0;
    for (const auto& st : stages) {
        out.push_back(st.noise_temperature_k / preceding_gain);
        preceding_gain *= st.gain;
    }
    return out;
}

double friis_point(std::span<const StagePoint> stages) {
    double total = 0.0;
    for (double c : friis_contributions(stages)) {
        total += c;
    }
    return total;
}

SystemNoiseResult friis_cascade(std::span<const StageSpec> stages, const rf::FrequencyGrid& grid) {
    if (stages.empty()) {
        throw Error(ErrorCode::InvalidArgument, "noise cascade needs at least one stage");
    }
    for (const auto& st : stages) {
        if (!(st.grid() == grid)) {
            throw Error(ErrorCode::GridMismatch,
                        "stage '" + st.label() + "' is not defined on the cascade grid");
        }
    }
    SystemNoiseResult result{grid, std::vector<double>(grid.size(), 0.0), {}, {}};
    for (const auto& st : stages) {
        result.stage_labels.push_back(st.label());
        result.per_stage_contribution_k.emplace_back(grid.size(), 0.0);
    }
    std::vector<StagePoint> point(stages.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t k = 0; k < stages.size(); ++k) {
            point[k] = StagePoint{stages[k].gain()[i], stages[k].noise_temperature()[i]};
        }
        const auto contrib = friis_contributions(point);
        double total = 0.0;
        for (std::size_t k = 0; k < contrib.size(); ++k) {
            result.per_stage_contribution_k[k][i] = contrib[k];
            total += contrib[k];
        }
        result.t_sys_k[i] = total;
    }
    return result;
}

void write_noise_csv(const std::filesystem::path& path, const SystemNoiseResult& result) {
    std::vector<std::string> header{"f_hz", "t_sys_k"};
    for (const auto& label : result.stage_labels) {
        header.push_back(label + "_k");
    }
    io::CsvWriter csv(path, header);
    std::vector<double> row(header.size());
    for (std::size_t i = 0; i < result.grid.size(); ++i) {
        row[0] = result.grid[i];
        row[1] = result.t_sys_k[i];
        for (std::size_t k = 0; k < result.per_stage_contribution_k.size(); ++k) {
            row[2 + k] = result.per_stage_contribution_k[k][i];
        }
        csv.row(row);
    }
}

}  // namespace cryomux::noise
