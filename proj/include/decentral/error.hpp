#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace decentral {

enum class ErrorCode {
    Io,
    MalformedRecord,
    NonMonotonicHeight,
    EmptyProducers,
    EmptyInput,
    EmptyTally,
    ZeroTotalCredit,
    InvalidThreshold,
    InvalidWindowSpec,
    WindowLargerThanStream,
    NoWindows,
    TooFewPoints,
    EmptySeries,
    InvalidShares,
    NonStationary,
    InvalidProfile,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; `code()` identifies the failure and
// `detail()` carries the line number or block height where one applies.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<std::int64_t> detail = std::nullopt);

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::int64_t> detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::optional<std::int64_t> detail_;
};

} // namespace decentral
