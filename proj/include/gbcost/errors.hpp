#pragma once

#include <stdexcept>
#include <string>

namespace gbcost {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in rings with different variable counts, or a shape is off.
class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Checked 64-bit integer arithmetic overflowed.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// A Buchberger run exceeded its pair-processing budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class UnsupportedParameter : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  RankDeficient(const std::string& feature)
      : Error("design matrix is rank deficient at feature '" + feature + "'"), feature_(feature) {}
  const std::string& feature() const noexcept { return feature_; }

 private:
  std::string feature_;
};

class FeatureMismatch : public Error {
 public:
  using Error::Error;
};

/// R^2 is undefined when the test responses have zero variance.
class UndefinedR2 : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Bad user configuration (CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unreadable or malformed data (CLI exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace gbcost
