#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qspec {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed spec-language or JSON input. Carries a 1-based location.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A system or label structure breaks a well-formedness rule.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Operands do not fit together (different formalisms, label kinds, unknown names).
class MismatchError : public Error {
public:
    using Error::Error;
};

/// The requested combination of label kind / synchronization / metric is not supported.
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// A configured size limit was exceeded.
class BudgetError : public Error {
public:
    using Error::Error;
};

} // namespace qspec
