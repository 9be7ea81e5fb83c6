#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace entmeas {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Ordered subsystem dimensions. Index 0 is the most significant digit of
/// the row-major tensor index.
using Dims = std::vector<int>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

namespace tol {
inline constexpr double kHermitian = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kPsd = 1e-10;
inline constexpr double kNorm = 1e-10;
inline constexpr double kEigenCutoff = 1e-12;
/// Shared floor for clamping small negative spectral residue to zero.
inline constexpr double kClamp = 1e-10;
inline constexpr double kKraus = 1e-9;
inline constexpr double kProbabilitySum = 1e-9;
inline constexpr double kDropOutcome = 1e-14;
}  // namespace tol

/// Bad argument shape or domain (wrong dims, out-of-range index, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An input violates a type invariant. Carries the invariant name and the
/// measured residual so callers can report both.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string invariant, double residual, const std::string& what)
      : std::runtime_error(what), invariant_(std::move(invariant)), residual_(residual) {}

  const std::string& invariant() const { return invariant_; }
  double residual() const { return residual_; }

 private:
  std::string invariant_;
  double residual_;
};

/// The request is well formed but outside what the implementation supports.
class UnsupportedCase : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A condition that can only fail through an implementation defect.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace entmeas
