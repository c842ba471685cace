// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cryomux {

enum class ErrorCode {
    InvalidArgument,
    SingularConversion,
    GridMismatch,
    OutOfSpan,
    InvalidLoss,
    UnachievableProfile,
    BadChannel,
    NoMatchExists,
    NoConvergence,
    DegenerateData,
    ReservedBitsSet,
    IncompleteConfig,
    ScheduleGap,
    WindowTooShort,
    WindowOverlap,
    NoResonanceFound,
    BadSebIndex,
    ParseError,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Domain error raised by every cryomux operation. The code identifies the
/// failure class; the message carries the context.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace cryomux
