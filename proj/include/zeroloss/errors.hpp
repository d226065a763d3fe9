#pragma once

#include <stdexcept>
#include <string>

namespace zeroloss {

inline constexpr const char* kVersion = "0.1.0";

/// Error taxonomy shared by the library and the CLI exit-code mapping
/// (2 = parse error, 3 = numerical failure, 4 = precondition violation).
/// Each exception carries a stable machine-readable code such as
/// "UNSUPPORTED_POINT" next to the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Malformed input files or records. CLI exit code 2.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A numerical routine could not reach its target (quadrature budget,
/// update budget, unreachable solver target). CLI exit code 3.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its contract. CLI exit code 4.
class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace zeroloss
