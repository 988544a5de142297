#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kslab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ZeroVector : public Error {
  public:
    ZeroVector() : Error("vector norm is below 1e-12") {}
};

class FieldMismatch : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

/// Raised when a ray set or graph breaks one of its structural invariants.
/// `index` names the offending ray/vertex.
class InvariantViolation : public Error {
  public:
    InvariantViolation(std::size_t index, const std::string &what)
        : Error("invariant violation at index " + std::to_string(index) + ": " + what),
          index(index) {}

    std::size_t index;
};

class TooLarge : public Error {
  public:
    TooLarge(std::size_t n, std::size_t limit)
        : Error("input of size " + std::to_string(n) + " exceeds the limit of " +
                std::to_string(limit)),
          size(n), limit(limit) {}

    std::size_t size;
    std::size_t limit;
};

/// A heuristic search ran out of iterations. Not a proof of impossibility.
class NonConvergence : public Error {
  public:
    explicit NonConvergence(double best_residual)
        : Error("no convergence; best residual " + std::to_string(best_residual)),
          best_residual(best_residual) {}

    double best_residual;
};

class NumericalFailure : public Error {
  public:
    NumericalFailure(const std::string &what, double achieved)
        : Error(what + " (achieved " + std::to_string(achieved) + ")"), achieved(achieved) {}

    double achieved;
};

class InvalidAssignment : public Error {
  public:
    using Error::Error;
};

} // namespace kslab
