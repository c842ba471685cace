// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "cryomux/components/component_model.hpp"

namespace cryomux::components {

/// Matched, reciprocal, frequency-flat attenuator held at t_phys.
ComponentModel attenuator_two_port(double loss_db, double t_phys_k, const rf::FrequencyGrid& grid,
                                   std::string label = "attenuator");

}  // namespace cryomux::components
