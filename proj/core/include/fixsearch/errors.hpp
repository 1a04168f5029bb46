#pragma once

#include <stdexcept>
#include <string>

namespace fixsearch {

/// Violated precondition or invalid configuration (maps to CLI exit 1).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent input data (maps to CLI exit 2).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Filesystem-level failure: missing file, unwritable path (maps to CLI exit 2).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fixsearch
