// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "cryomux/components/component_model.hpp"
#include "cryomux/components/db_profile.hpp"

namespace cryomux::components {

/// Single-pole eight-throw switch. IL and isolation default to their bounds,
/// frequency-flat; measured tables may replace either.
struct SwitchSpec {
    int n_channels = 8;
    DbProfile il_db{1.1};
    DbProfile isolation_db{35.0};
    double return_loss_db = 10.0;
    double t_phys_k = 4.0;

    void validate() const;
    friend bool operator==(const SwitchSpec&, const SwitchSpec&) = default;
};

/// S-matrix of the common-port-to-`path` throw. A selected path transmits
/// with the insertion loss, any other path (or no selection) with the
/// isolation. Port reflections are placed in quadrature with the
/// transmission, which keeps the matrix passive whenever |S11|^2 + |S21|^2 <= 1.
rf::SMatrix switch_s_matrix(const SwitchSpec& spec, std::optional<int> selected, int path,
                            double f_hz);

/// Throws BadChannel for path or selection outside [0, n_channels).
ComponentModel switch_two_port(const SwitchSpec& spec, std::optional<int> selected, int path,
                               const rf::FrequencyGrid& grid);

}  // namespace cryomux::components
