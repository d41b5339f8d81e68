#pragma once

#include <stdexcept>
#include <string>

namespace ampgdf {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (bad CSV, mismatched dimensions). Maps to CLI exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure broke down. Maps to CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  using DataError::DataError;
};

// The effective variance is too large for the closed-form prox branches of a
// nonconvex penalty (sigma2 >= a-1 for SCAD, sigma2 >= a for MCP).
class CurvatureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Subgradient requested at x == 0 where it is set-valued.
class ZeroArgument : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class NumericalDivergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NegativeVariance : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class EmptySupport : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularSystem : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ReclassificationLoop : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NegativeCorrectedVariance : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UnstableRegion : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SolverFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ampgdf
