#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace parley {

enum class ErrorCode {
    parse_error,
    validation_error,
    malformed_tree,
    malformed_response,
    impossible_combination,
    not_unsure,
    applicability_violation,
    session_concluded,
    no_open_action,
    preconditions_still_open,
    missing_template,
    unknown_format,
    unknown_scenario,
    unknown_session,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library. The code carries enough information
// for the gateway to pick an HTTP status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace parley
