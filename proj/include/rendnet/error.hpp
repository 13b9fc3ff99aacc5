#pragma once

#include <stdexcept>
#include <string>

namespace rendnet {

// Base class for all errors this library raises on bad data or bad usage.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text (canonical JSON, SVG, path data).
struct ParseError : Error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& msg, int line_, int column_)
        : Error(msg + " at line " + std::to_string(line_) + ", column " + std::to_string(column_)),
          line(line_), column(column_) {}
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Structurally valid input that violates a documented invariant; `path` names
// the offending field, e.g. "curves[2].radius".
struct ValidationError : Error {
    std::string path;
    ValidationError(const std::string& path_, const std::string& msg)
        : Error(path_.empty() ? msg : path_ + ": " + msg), path(path_) {}
};

// Argument outside an operation's stated domain.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Dataset / checkpoint / model-level failures surfaced by the harness.
struct DataError : Error {
    explicit DataError(const std::string& msg) : Error(msg) {}
};

} // namespace rendnet
