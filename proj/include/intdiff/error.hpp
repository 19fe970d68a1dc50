#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace intdiff {

enum class ErrorKind {
    validation,  // malformed values (NaN, negative noise, bad labels)
    size,        // shape or count preconditions
    alignment,   // row identities disagree between modalities
    numerical,   // solver failure or broken numerical invariant
    parse,       // malformed input file
    io,          // cannot open / write a path
    config,      // unknown option, bad config file
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(ErrorKind::validation, what) {}
};

class SizeError : public Error {
public:
    explicit SizeError(const std::string& what) : Error(ErrorKind::size, what) {}
};

class AlignmentError : public Error {
public:
    explicit AlignmentError(const std::string& what) : Error(ErrorKind::alignment, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

/// Malformed file content. `offset` is a byte offset for binary formats and a
/// 1-based line number for CSV.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::uint64_t offset)
        : Error(ErrorKind::parse, what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}
    std::uint64_t offset() const noexcept { return offset_; }

private:
    std::uint64_t offset_;
};

/// Process exit code for an error class: 1 numerical, 2 usage/config, 3 IO/parse.
int exit_code(ErrorKind kind) noexcept;

}  // namespace intdiff
