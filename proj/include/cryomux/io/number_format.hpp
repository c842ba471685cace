// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace cryomux::io {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace cryomux::io
