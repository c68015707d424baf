#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idprof {

/// Failure categories shared by every module. The C API maps these one-to-one
/// onto `idprof_status` values, so the order here is part of the ABI.
enum class ErrorCode {
    InvalidArgument = 1,
    Io,
    Format,
    NonFinite,
    DuplicatePoints,
    KTooLarge,
    DegenerateRow,
    EmptyInput,
    Schema,
    MissingDump,
    RowCountMismatch,
    EmptyRecord,
    ZeroVariance,
    LengthMismatch,
    TooFewDatasets,
    EmptyGroup,
    SpecInvalid,
};

std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace idprof
