#include "decentral/error.hpp"

namespace decentral {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::Io: return "Io";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::NonMonotonicHeight: return "NonMonotonicHeight";
    case ErrorCode::EmptyProducers: return "EmptyProducers";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyTally: return "EmptyTally";
    case ErrorCode::ZeroTotalCredit: return "ZeroTotalCredit";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::InvalidWindowSpec: return "InvalidWindowSpec";
    case ErrorCode::WindowLargerThanStream: return "WindowLargerThanStream";
    case ErrorCode::NoWindows: return "NoWindows";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::InvalidShares: return "InvalidShares";
    case ErrorCode::NonStationary: return "NonStationary";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::optional<std::int64_t> detail)
    : std::runtime_error(message), code_(code), detail_(detail) {}

} // namespace decentral
