#pragma once

#include <stdexcept>
#include <string>

namespace weavelab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: non-finite entries, mismatched shapes, out-of-range indices.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Singular operator, or condition number beyond the configured cap.
class NotInvertible : public Error {
 public:
  using Error::Error;
};

/// A family of vectors that was required to be a basis is not one.
class NotABasis : public Error {
 public:
  using Error::Error;
};

/// The frame operator of a system failed inversion.
class NotAFrame : public Error {
 public:
  using Error::Error;
};

/// Two subspaces that were required to be at positive distance intersect.
class DistanceZero : public Error {
 public:
  using Error::Error;
};

}  // namespace weavelab
