// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

namespace cryomux::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

/// Entry point of the `cryomux` tool. Returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cryomux::cli
