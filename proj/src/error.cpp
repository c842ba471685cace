// SPDX-License-Identifier: Apache-2.0
#include "cryomux/error.hpp"

namespace cryomux {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::SingularConversion: return "SingularConversion";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::OutOfSpan: return "OutOfSpan";
        case ErrorCode::InvalidLoss: return "InvalidLoss";
        case ErrorCode::UnachievableProfile: return "UnachievableProfile";
        case ErrorCode::BadChannel: return "BadChannel";
        case ErrorCode::NoMatchExists: return "NoMatchExists";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::DegenerateData: return "DegenerateData";
        case ErrorCode::ReservedBitsSet: return "ReservedBitsSet";
        case ErrorCode::IncompleteConfig: return "IncompleteConfig";
        case ErrorCode::ScheduleGap: return "ScheduleGap";
        case ErrorCode::WindowTooShort: return "WindowTooShort";
        case ErrorCode::WindowOverlap: return "WindowOverlap";
        case ErrorCode::NoResonanceFound: return "NoResonanceFound";
        case ErrorCode::BadSebIndex: return "BadSebIndex";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace cryomux
