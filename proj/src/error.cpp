#include "robomem/error.hpp"

namespace robomem {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::unknown_robot: return "unknown_robot";
        case ErrorCode::unknown_user: return "unknown_user";
        case ErrorCode::unknown_session: return "unknown_session";
        case ErrorCode::missing_valence: return "missing_valence";
        case ErrorCode::spurious_valence: return "spurious_valence";
        case ErrorCode::empty_value: return "empty_value";
        case ErrorCode::empty_name: return "empty_name";
        case ErrorCode::invalid_observation: return "invalid_observation";
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::corruption: return "corruption";
        case ErrorCode::io: return "io_error";
        case ErrorCode::missing_template: return "missing_template";
        case ErrorCode::closed_session: return "closed_session";
        case ErrorCode::conflict: return "conflict";
        case ErrorCode::format: return "format_error";
    }
    return "unknown";
}

}  // namespace robomem
