#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fracspec {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments: out-of-range orders, mismatched sizes, unknown names.
class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& what, std::string field = {})
        : Error(what), field_(std::move(field)) {}

    /// Name of the offending parameter, empty when not attributable.
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class GridMismatchError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

class UnknownEstimateError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

class InsufficientSamplesError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// Evaluation at a point outside the mathematical domain (t = 0 for a
/// singular kernel, Gamma at a pole).
class DomainError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Failures of the numerics themselves, as opposed to bad input.
class NumericalError : public Error {
public:
    using Error::Error;
};

class OverflowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InstabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Quadrature grid too coarse for the requested truncation.
class ResolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class AliasingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class BoxEscapeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace fracspec
