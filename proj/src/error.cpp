#include "error.hpp"

namespace idprof {

std::string_view error_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "IoError";
        case ErrorCode::Format: return "FormatError";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::DuplicatePoints: return "DuplicatePoints";
        case ErrorCode::KTooLarge: return "KTooLarge";
        case ErrorCode::DegenerateRow: return "DegenerateRow";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::Schema: return "SchemaError";
        case ErrorCode::MissingDump: return "MissingDump";
        case ErrorCode::RowCountMismatch: return "RowCountMismatch";
        case ErrorCode::EmptyRecord: return "EmptyRecord";
        case ErrorCode::ZeroVariance: return "ZeroVariance";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::TooFewDatasets: return "TooFewDatasets";
        case ErrorCode::EmptyGroup: return "EmptyGroup";
        case ErrorCode::SpecInvalid: return "SpecInvalid";
    }
    return "Unknown";
}

}  // namespace idprof
