// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "cryomux/noise/friis.hpp"
#include "cryomux/rf/two_port.hpp"

namespace cryomux::components {

/// Frequency-domain rendering of a chain element: its S-parameters and the
/// matching noise-cascade stage.
struct ComponentModel {
    rf::TwoPortNetwork network;
    noise::StageSpec stage;
};

}  // namespace cryomux::components
