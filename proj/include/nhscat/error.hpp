#pragma once

#include <stdexcept>
#include <string>

namespace nhscat {

// Base for failures of a well-posed computation (bad numerics, divergences,
// unmet physical preconditions). Invalid inputs throw std::invalid_argument.
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Real k sits on a pole of the scattering amplitudes.
class DivergentAmplitudes : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class SingularSystem : public ComputationError {
 public:
  SingularSystem(const std::string& what, double rcond)
      : ComputationError(what), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

// Branch formula evaluated where the poles run off to -i*infinity.
class PolesAtInfinity : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class NoCriticalPoint : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class FitFailure : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class NotLocalized : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class NearExceptionalPoint : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

class StepperInstability : public ComputationError {
 public:
  using ComputationError::ComputationError;
};

}  // namespace nhscat
