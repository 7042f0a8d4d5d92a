#pragma once

#include <stdexcept>
#include <string>

namespace lsint {

// Numerical failures map to CLI exit status 1; argument errors to 2.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SingularMomentSystem : public NumericalError {
public:
  SingularMomentSystem(const std::string& what, double condition)
      : NumericalError(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

private:
  double condition_;
};

class DegenerateArc : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class UndefinedGradient : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class EmptyBand : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class SingularOnBand : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class NoInterface : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class NotConverged : public NumericalError {
public:
  NotConverged(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

class IllConditionedFit : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class FitFailed : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class ResourceCap : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

} // namespace lsint
