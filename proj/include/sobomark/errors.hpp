#pragma once

#include <stdexcept>
#include <string>

namespace sobomark {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range family, Sobolev, chaos or QIM parameters.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A closed-form coefficient was requested on its singular set
/// (x in {alpha, ..., alpha + j} or sigma(x) + tau(x) = 0, Xi = 0, ...).
class SingularPointError : public Error {
 public:
  using Error::Error;
};

/// A callable produced a non-finite value inside an inner product.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Basis construction produced a non-finite entry.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Image not aligned to the block grid.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Not enough blocks to carry the robust payload.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Chaotic map evaluated outside (0, 1).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The chaotic orbit failed to visit every index within its step budget.
class DegenerateKeyError : public Error {
 public:
  using Error::Error;
};

/// Malformed image, watermark, key or preset file.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace sobomark
