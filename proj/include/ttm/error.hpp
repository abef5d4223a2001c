/// @file error.hpp
/// @brief Error type shared by every ttm module.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ttm {

/// Coarse error classes. The HTTP layer maps these onto status codes and the
/// CLI maps them onto exit codes, so keep the set small.
enum class ErrorCode {
    invalid_argument,  ///< bad caller input (count, names, cards, winner)
    not_found,         ///< unknown pairing, session or object name
    conflict,          ///< operation not allowed in the current state
    version_conflict,  ///< optimistic concurrency check failed
    structural,        ///< malformed matrix or match matrix
    inconsistent,      ///< matrix violates additive consistency
    schema,            ///< document failed schema validation
    parse,             ///< unreadable CSV/JSON text
    io,                ///< filesystem failure
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string field = {})
        : std::runtime_error(message), code_(code), field_(std::move(field)) {}

    ErrorCode code() const noexcept { return code_; }

    /// JSON path or CSV location the error refers to; empty when not applicable.
    const std::string& field() const noexcept { return field_; }

private:
    ErrorCode code_;
    std::string field_;
};

} // namespace ttm
