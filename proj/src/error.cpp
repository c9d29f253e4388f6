#include "reebsim/error.hpp"

namespace reebsim {

const char* error_code_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::Config: return "config";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
    case ErrorCode::Provenance: return "provenance";
    case ErrorCode::Lookup: return "lookup";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::DataIntegrity: return "data-integrity";
    case ErrorCode::ShortPath: return "short-path";
    case ErrorCode::UndefinedInput: return "undefined-input";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Pairing: return "pairing";
    }
    return "unknown";
}

} // namespace reebsim
