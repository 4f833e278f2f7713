#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace robomem {

// Stable error codes. The string form is part of the HTTP API surface.
enum class ErrorCode {
    unknown_robot,
    unknown_user,
    unknown_session,
    missing_valence,
    spurious_valence,
    empty_value,
    empty_name,
    invalid_observation,
    invalid_argument,
    corruption,
    io,
    missing_template,
    closed_session,
    conflict,
    format,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace robomem
