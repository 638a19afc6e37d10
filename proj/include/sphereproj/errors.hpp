#pragma once

#include <stdexcept>
#include <string>

namespace sphereproj {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Points or vectors of incompatible dimension.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Iteration cap reached or a numerical procedure failed to converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Adaptive refinement hit its cap; carries the last two estimates.
class RefinementError : public NumericalError {
public:
    RefinementError(const std::string& what, double previous, double last)
        : NumericalError(what), previous_(previous), last_(last) {}
    double previous() const noexcept { return previous_; }
    double last() const noexcept { return last_; }

private:
    double previous_;
    double last_;
};

/// Operator assembled from inconsistent parts (e.g. rule exactness below 2n).
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// Node set on which the harmonic evaluation matrix loses rank.
class DegenerateNodeSet : public Error {
public:
    using Error::Error;
};

/// A stored invariant does not hold (non-positive weight, non-unit node, ...).
class InvariantViolation : public Error {
public:
    using Error::Error;
};

/// Non-finite function value at a quadrature node.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, std::size_t node)
        : Error(what), node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

/// Malformed or inconsistent input file.
class LoadError : public Error {
public:
    LoadError(const std::string& what, std::size_t line)
        : Error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace sphereproj
