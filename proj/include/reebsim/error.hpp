#pragma once

#include <stdexcept>
#include <string>

namespace reebsim {

enum class ErrorCode {
    Config,         // invalid configuration value
    Validation,     // dataset violates a type invariant
    Parse,          // malformed input file
    Io,             // filesystem failure
    Provenance,     // mismatched artifacts (wrong dataset/config for a graph)
    Lookup,         // unknown key
    Degenerate,     // structurally empty/unusable result
    DataIntegrity,  // internal inconsistency (e.g. empty edge support)
    ShortPath,      // traversal ended before covering all L indices
    UndefinedInput, // operation undefined for this input (e.g. all-zero distribution)
    Domain,         // math domain violation (e.g. KL support)
    Pairing,        // datasets cannot be paired agent-by-agent
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }
    const char* code_name() const { return error_code_name(code_); }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace reebsim
