#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace greylift {

// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parameter is outside its admissible domain. field() names the culprit.
class ParameterError : public Error {
public:
    ParameterError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A series or quadrature did not reach its tolerance.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double residual)
        : Error(what + " (residual estimate " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Matrix factorization failed; pivot() is the offending row.
class NumericalRankError : public Error {
public:
    NumericalRankError(const std::string& what, std::size_t pivot)
        : Error(what + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}
    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

// Probe time or coordinate not present in an ensemble.
class QueryError : public Error {
public:
    using Error::Error;
};

// Law is degenerate at the requested point (t = 0, unbounded density).
class DegenerateLawError : public Error {
public:
    using Error::Error;
};

// An integrability condition fails: the integral it names is infinite.
class DivergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace greylift
