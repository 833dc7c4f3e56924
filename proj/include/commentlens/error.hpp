#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace commentlens {

enum class ErrorCode {
    unparsable_file,
    model_feature_mismatch,
    undefined_split,
    empty_matrix,
    degenerate_agreement,
    invalid_distribution,
    unmapped_kind,
    fetch_failed,
    insufficient_comments,
    invalid_input,
    io_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base for every error raised by the library. The code names the failure
/// class; the message carries detail for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace commentlens
