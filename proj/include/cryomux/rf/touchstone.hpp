// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "cryomux/rf/two_port.hpp"

namespace cryomux::rf {

/// Writes Touchstone v1 .s2p text: "# HZ S RI R <z0>" followed by one line per
/// frequency with S11 S21 S12 S22 as real/imaginary pairs.
void write_touchstone(std::ostream& os, const TwoPortNetwork& net,
                      const std::string& comment = {});
void write_touchstone(const std::filesystem::path& path, const TwoPortNetwork& net,
                      const std::string& comment = {});

/// Reads Touchstone v1 2-port data. Accepts HZ/KHZ/MHZ/GHZ, RI/MA/DB formats
/// and '!' comments; only S-parameters are supported.
TwoPortNetwork read_touchstone(std::istream& is, const std::string& source_name = "<stream>");
TwoPortNetwork read_touchstone(const std::filesystem::path& path);

}  // namespace cryomux::rf
