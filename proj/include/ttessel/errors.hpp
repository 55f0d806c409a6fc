#ifndef TTESSEL_ERRORS_HPP
#define TTESSEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ttessel {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input data (bad polygon, malformed file, broken invariant).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Geometric degeneracy (missing chord, parallel lines, ...).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure (overflow, singular Hessian, separation).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Sampler failure (frozen chain, renewal cap reached).
class ChainError : public Error {
 public:
  using Error::Error;
};

}  // namespace ttessel

#endif
