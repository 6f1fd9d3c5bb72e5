#pragma once

#include <stdexcept>
#include <string>

namespace trstat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Numerical failures (singular operators, degenerate projections, series blow-up).
class NumericalError : public Error {
public:
  using Error::Error;
};

class SingularGreen : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class SingularFoldyLax : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class ZeroTau : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Data vector lies (numerically) inside the probed signal subspace.
class DegenerateDenominator : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class ZeroXi : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class SeriesNonConvergence : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class UnsupportedStatistic : public Error {
public:
  using Error::Error;
};

/// Caller supplied inconsistent shapes or out-of-domain arguments.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

}  // namespace trstat
