#pragma once

#include <stdexcept>
#include <string>

namespace dyson {

/// Base class for every failure raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive integration or iteration could not reach the requested tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Shooting could not bracket the decaying solution.
class BracketNotFound : public Error {
 public:
  using Error::Error;
};

class GridTooCoarse : public Error {
 public:
  using Error::Error;
};

/// Gradient flow energy kept increasing after step halving.
class Diverged : public Error {
 public:
  using Error::Error;
};

/// Ground energy moved by more than the tolerance when the Fock cutoff doubled.
class TruncationUnconverged : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NotNormalized : public Error {
 public:
  using Error::Error;
};

class AllWindowsDegenerate : public Error {
 public:
  using Error::Error;
};

class SingularPoint : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Bump width parameter outside (0, 1/2).
class InvalidT : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class DegenerateField : public Error {
 public:
  using Error::Error;
};

}  // namespace dyson
