#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace anyon_lab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Error hierarchy. Everything derives from std::runtime_error except bad
// arguments, which use std::invalid_argument so callers can tell them apart.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct AlgebraViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoSupportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidDensityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Largest entry modulus; the max-norm used by every tolerance check here.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace anyon_lab
