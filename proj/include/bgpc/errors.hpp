#pragma once

#include <stdexcept>
#include <string>

namespace bgpc {

// Base of every error the library throws. The CLI maps any of these to exit code 2.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Shapes that do not fit together (non-square where square is required, n <= m, ...).
class DimensionError : public Error {
public:
  using Error::Error;
};

// A matrix that must have full (column) rank does not, at the active tolerance.
class RankError : public Error {
public:
  using Error::Error;
};

// Out-of-range parameters: sigma = 0, |J| != s, theta outside (0, 1), ...
class ParameterError : public Error {
public:
  using Error::Error;
};

// Inputs on which a ratio or a group action is undefined (zero gains).
class DegenerateInputError : public Error {
public:
  using Error::Error;
};

// Hypotheses of a checker or condition do not hold (zero row in Y, n < 4, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

// Exhaustive enumeration refused because it would blow up.
class GuardError : public Error {
public:
  using Error::Error;
};

// Malformed instance / transcript files.
class SchemaError : public Error {
public:
  using Error::Error;
};

}  // namespace bgpc
