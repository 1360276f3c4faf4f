#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "anyon_lab/types.hpp"

namespace anyon_lab {

inline double hermiticity_defect(const Matrix& m) { return max_abs(m - m.adjoint()); }

/// Eigenvalues ascending with matching orthonormal eigenvector columns.
struct Eigensystem {
  RealVector values;
  Matrix vectors;
};

inline Eigensystem hermitian_eigensystem(const Matrix& h, double hermitian_tol = 1e-10) {
  if (h.rows() != h.cols()) throw ArgumentError("hermitian_eigensystem: matrix is not square");
  if (hermiticity_defect(h) > hermitian_tol) {
    throw ArgumentError("hermitian_eigensystem: matrix is not Hermitian");
  }
  if (h.rows() == 0) return {};
  // Symmetrize so round-off in the upper triangle cannot leak in.
  const Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigensystem: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// exp(-i h t) for Hermitian h, through its eigendecomposition.
inline Matrix unitary_propagator(const Matrix& h, double t) {
  const auto es = hermitian_eigensystem(h);
  Vector phases(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) phases(i) = std::exp(-kI * es.values(i) * t);
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

/// Singular values by one-sided (Hestenes) Jacobi rotations, descending.
///
/// Each column pair is first rephased so the overlap is real, then rotated
/// by a real Jacobi angle. Column norms at convergence are the singular
/// values; for a wide matrix the trailing values are zero.
inline std::vector<double> jacobi_singular_values(Matrix a, int max_sweeps = 60) {
  const Eigen::Index cols = a.cols();
  const double eps = 1e-15;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index i = 0; i + 1 < cols; ++i) {
      for (Eigen::Index j = i + 1; j < cols; ++j) {
        const double alpha = a.col(i).squaredNorm();
        const double beta = a.col(j).squaredNorm();
        const Complex gamma = a.col(i).dot(a.col(j));  // conj(col i) . col j
        const double g = std::abs(gamma);
        if (g <= eps * std::sqrt(alpha * beta) || g == 0.0) continue;
        rotated = true;
        a.col(j) *= std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Vector ci = a.col(i);
        const Vector cj = a.col(j);
        a.col(i) = c * ci - s * cj;
        a.col(j) = s * ci + c * cj;
      }
    }
    if (!rotated) break;
  }
  std::vector<double> values(static_cast<std::size_t>(cols));
  for (Eigen::Index k = 0; k < cols; ++k) values[static_cast<std::size_t>(k)] = a.col(k).norm();
  std::sort(values.begin(), values.end(), std::greater<>());
  const auto rank_bound = static_cast<std::size_t>(std::min(a.rows(), a.cols()));
  for (std::size_t k = rank_bound; k < values.size(); ++k) values[k] = 0.0;
  return values;
}

/// Multiplies a unit vector by the phase that makes its first significant
/// component real and positive.
inline Vector fix_global_phase(Vector v, double threshold = 1e-12) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > threshold) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(mag, 0.0);
      break;
    }
  }
  return v;
}

}  // namespace anyon_lab
