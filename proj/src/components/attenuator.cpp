// SPDX-License-Identifier: Apache-2.0
#include "cryomux/components/attenuator.hpp"

#include "cryomux/error.hpp"
#include "cryomux/units.hpp"

namespace cryomux::components {

ComponentModel attenuator_two_port(double loss_db, double t_phys_k, const rf::FrequencyGrid& grid,
                                   std::string label) {
    if (!(loss_db >= 0.0)) {
        throw Error(ErrorCode::InvalidLoss, "attenuator loss must be >= 0 dB");
    }
    const double t = db_to_amplitude(-loss_db);
    std::vector<rf::SMatrix> s(grid.size(), rf::SMatrix{0.0, t, t, 0.0});
    std::vector<double> loss(grid.size(), db_to_power(loss_db));
    return ComponentModel{rf::TwoPortNetwork(grid, std::move(s)),
                          noise::StageSpec::passive(std::move(label), grid, std::move(loss), t_phys_k)};
}

}  // namespace cryomux::components
