// SPDX-License-Identifier: Apache-2.0
#include "cryomux/io/number_format.hpp"

#include <array>
#include <charconv>

namespace cryomux::io {

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) {
        return "nan";
    }
    return std::string(buf.data(), ptr);
}

}  // namespace cryomux::io
