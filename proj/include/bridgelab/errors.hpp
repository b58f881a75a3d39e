#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bridgelab {

// Config/parameter problems. Carries the full list of violations so a caller
// can report all of them at once instead of fixing one field at a time.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<std::string> issues)
      : std::invalid_argument(join(issues)), issues_(std::move(issues)) {}
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid configuration:";
    for (const auto& e : v) s += "\n  - " + e;
    return s;
  }
  std::vector<std::string> issues_;
};

// Base for failures of the numerics themselves (as opposed to bad input).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularShift : public NumericalError {
 public:
  SingularShift(double sigma_min, double threshold)
      : NumericalError("shifted system is numerically singular (sigma_min " +
                       std::to_string(sigma_min) + " < threshold " +
                       std::to_string(threshold) + ")"),
        sigma_min(sigma_min),
        threshold(threshold) {}
  double sigma_min;
  double threshold;
};

class FixedPointDivergence : public NumericalError {
 public:
  FixedPointDivergence(double contraction_estimate, int iterations)
      : NumericalError("midpoint fixed point failed to converge after " +
                       std::to_string(iterations) + " iterations (contraction estimate " +
                       std::to_string(contraction_estimate) + ")"),
        contraction_estimate(contraction_estimate),
        iterations(iterations) {}
  double contraction_estimate;
  int iterations;
};

class IncommensurableXi : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NondifferentiableFamily : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Scanning one exact period needs xi as a rational multiple of ell; float
// locations must supply an explicit window instead.
class IrrationalXi : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ZeroEnergy : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class StrideTooCoarse : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bridgelab
