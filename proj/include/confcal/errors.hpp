#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace confcal {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An argument lies outside the mathematical domain of the operation
/// (negative base of a real power, x <= 0 where a positive point is required, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// The argument of a q-exponential (or of one of its relatives) lies outside
/// the support 1 + (1-q)x > 0. A support violation is a domain violation.
class SupportError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A result left the representable range of double.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// A user-supplied function returned a non-finite value where a finite one
/// was needed.
class NumericsError : public Error {
public:
    using Error::Error;
};

/// Richardson extrapolation of a limit definition failed to settle.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature exhausted its subdivision budget before reaching the
/// requested tolerance.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// Expression text could not be parsed. `position` is the 0-based byte
/// offset of the first offending character (== input length for truncation).
class ParseError : public Error {
public:
    ParseError(std::size_t position, const std::string& message)
        : Error(message + " (at offset " + std::to_string(position) + ")"),
          position_(position),
          message_(message) {}

    std::size_t position() const { return position_; }
    const std::string& message() const { return message_; }

private:
    std::size_t position_;
    std::string message_;
};

/// Evaluation reached a variable with no binding.
class UnboundVariableError : public Error {
public:
    explicit UnboundVariableError(const std::string& name)
        : Error("unbound variable '" + name + "'"), name_(name) {}

    const std::string& name() const { return name_; }

private:
    std::string name_;
};

/// Symbolic differentiation met a node it has no rule for.
class UnsupportedNodeError : public Error {
public:
    using Error::Error;
};

/// An identity check could not collect enough valid samples.
class InsufficientSamplesError : public Error {
public:
    using Error::Error;
};

/// A time stepper produced a non-finite state.
class StepError : public Error {
public:
    using Error::Error;
};

}  // namespace confcal
