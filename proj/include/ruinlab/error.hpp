#pragma once

#include <stdexcept>
#include <string>

namespace ruinlab {

class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Parameter values outside the model's domain (NaN, negative, zero intensity).
class InvalidParams : public Error {
   public:
    using Error::Error;
};

/// The survival problem has no solution for these parameters.
class NoSolution : public Error {
   public:
    using Error::Error;
};

/// Parameters on a boundary the library declines to extrapolate across.
class Refused : public Error {
   public:
    using Error::Error;
};

/// An operation was called for a regime it does not handle.
class RegimeMismatch : public Error {
   public:
    using Error::Error;
};

/// Integrator breakdown, unstable limit estimate and similar failures.
class NumericalFailure : public Error {
   public:
    using Error::Error;
};

class IntegrationError : public NumericalFailure {
   public:
    IntegrationError(const std::string& what, double at)
        : NumericalFailure(what + " at u = " + std::to_string(at)), at_(at) {}

    double at() const noexcept { return at_; }

   private:
    double at_;
};

}  // namespace ruinlab
