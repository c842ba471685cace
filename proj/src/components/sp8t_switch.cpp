// SPDX-License-Identifier: Apache-2.0
#include "cryomux/components/sp8t_switch.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "cryomux/error.hpp"
#include "cryomux/units.hpp"

namespace cryomux::components {

namespace {

void require_channel(const SwitchSpec& spec, int channel, const char* what) {
    if (channel < 0 || channel >= spec.n_channels) {
        throw Error(ErrorCode::BadChannel, std::string(what) + " " + std::to_string(channel) +
                                               " is outside [0, " +
                                               std::to_string(spec.n_channels - 1) + "]");
    }
}

}  // namespace

void SwitchSpec::validate() const {
    if (n_channels < 1 || n_channels > 8) {
        throw Error(ErrorCode::InvalidArgument, "switch supports 1 to 8 channels");
    }
    if (!(return_loss_db > 0.0) || !(t_phys_k >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "switch return loss must be > 0 dB and t_phys >= 0 K");
    }
    std::set<double> probe(il_db.frequencies().begin(), il_db.frequencies().end());
    probe.insert(isolation_db.frequencies().begin(), isolation_db.frequencies().end());
    if (probe.empty()) {
        probe.insert(1e9);
    }
    const double refl = db_to_power(-return_loss_db);
    for (double f : probe) {
        const double il = il_db.at(f);
        const double iso = isolation_db.at(f);
        if (!(il >= 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "switch insertion loss must be >= 0 dB");
        }
        if (!(iso > il)) {
            throw Error(ErrorCode::InvalidArgument, "switch isolation must exceed insertion loss");
        }
        if (refl + db_to_power(-il) > 1.0 + 1e-12) {
            throw Error(ErrorCode::InvalidArgument,
                        "switch return loss and insertion loss are not passively realizable");
        }
    }
}

rf::SMatrix switch_s_matrix(const SwitchSpec& spec, std::optional<int> selected, int path,
                            double f_hz) {
    require_channel(spec, path, "switch path");
    if (selected) {
        require_channel(spec, *selected, "switch selection");
    }
    const bool through = selected && *selected == path;
    const double t = db_to_amplitude(-(through ? spec.il_db.at(f_hz) : spec.isolation_db.at(f_hz)));
    const rf::Complex r(0.0, db_to_amplitude(-spec.return_loss_db));
    return rf::SMatrix{r, t, t, r};
}

ComponentModel switch_two_port(const SwitchSpec& spec, std::optional<int> selected, int path,
                               const rf::FrequencyGrid& grid) {
    spec.validate();
    std::vector<rf::SMatrix> s;
    std::vector<double> loss;
    s.reserve(grid.size());
    for (double f : grid) {
        s.push_back(switch_s_matrix(spec, selected, path, f));
        loss.push_back(1.0 / std::norm(s.back().s21));
    }
    const std::string label = "switch_path" + std::to_string(path);
    return ComponentModel{rf::TwoPortNetwork(grid, std::move(s)),
                          noise::StageSpec::passive(label, grid, std::move(loss), spec.t_phys_k)};
}

}  // namespace cryomux::components
