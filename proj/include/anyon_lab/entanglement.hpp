#pragma once

// Localized partial trace for indistinguishable particles:
//
//   rho_M = (1/N_M) sum_{k in M} a_k |Phi><Phi| a^dag_k,
//   N_M   = <Phi| sum_{k in M} a^dag_k a_k |Phi>,
//
// represented on the whole (N-1)-particle sector, plus von Neumann entropy
// by eigenvalues or by singular values of the coefficient matrix.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/QR>

#include <optional>

#include "anyon_lab/fock.hpp"
#include "anyon_lab/linalg.hpp"
#include "anyon_lab/model.hpp"

namespace anyon_lab {

enum class SubspaceLabel { b1, b2, b12, custom };

struct OneParticleSubspace {
  std::vector<ModeIndex> modes;
  SubspaceLabel label = SubspaceLabel::custom;

  static OneParticleSubspace b1() { return {{up(1), down(1)}, SubspaceLabel::b1}; }
  static OneParticleSubspace b2() { return {{up(2), down(2)}, SubspaceLabel::b2}; }
  static OneParticleSubspace b12() { return {{up(1), down(1), up(2), down(2)}, SubspaceLabel::b12}; }

  static OneParticleSubspace custom(std::vector<ModeIndex> modes) {
    return {std::move(modes), SubspaceLabel::custom};
  }

  std::string name() const {
    switch (label) {
      case SubspaceLabel::b1: return "B1";
      case SubspaceLabel::b2: return "B2";
      case SubspaceLabel::b12: return "B12";
      case SubspaceLabel::custom: break;
    }
    std::string out = "{";
    for (std::size_t i = 0; i < modes.size(); ++i) out += (i ? "," : "") + modes[i].label();
    return out + "}";
  }

  void validate(const FockBasis& basis) const {
    if (modes.empty()) throw ArgumentError("subspace: no modes");
    std::set<int> seen;
    for (const auto& m : modes) {
      basis.require_mode(m);
      if (!seen.insert(m.canonical()).second) throw ArgumentError("subspace: duplicate mode " + m.label());
    }
  }
};

inline OneParticleSubspace parse_subspace(const std::string& text) {
  if (text == "B1" || text == "b1") return OneParticleSubspace::b1();
  if (text == "B2" || text == "b2") return OneParticleSubspace::b2();
  if (text == "B12" || text == "b12") return OneParticleSubspace::b12();
  std::vector<ModeIndex> modes;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find(',', start);
    const auto token = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!token.empty()) modes.push_back(parse_mode(token));
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (modes.empty()) throw ArgumentError("bad subspace '" + text + "'");
  return OneParticleSubspace::custom(std::move(modes));
}

struct ReducedDensityMatrix {
  Matrix matrix;                        // on `states`
  std::vector<std::size_t> states;      // basis positions of the (N-1)-particle sector
  OneParticleSubspace subspace;
  double normalizer = 0.0;              // N_M
  RealVector eigenvalues;               // ascending
};

enum class LogBase { two, e };

namespace detail {

inline constexpr double kNormTol = 1e-10;

// Particle number of a normalized state supported on one N-sector.
inline int definite_particle_number(const Vector& phi, const FockBasis& basis) {
  if (phi.size() != basis.dimension()) throw ArgumentError("state dimension does not match the basis");
  const double norm = phi.norm();
  if (std::abs(norm - 1.0) > kNormTol) throw ArgumentError("state is not normalized");
  std::vector<double> weight(static_cast<std::size_t>(basis.modes() + 1), 0.0);
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    weight[static_cast<std::size_t>(basis.states()[static_cast<std::size_t>(i)].particle_count())] +=
        std::norm(phi(i));
  }
  const auto best = std::max_element(weight.begin(), weight.end());
  if (1.0 - *best > 1e-12) throw ArgumentError("state mixes particle-number sectors");
  return static_cast<int>(best - weight.begin());
}

// The vectors a_k |Phi> for k in M and their summed squared norm N_M.
struct Projections {
  std::vector<Vector> vectors;
  double normalizer = 0.0;
  int particles = 0;
};

inline Projections project_out(const Vector& phi, const OneParticleSubspace& m, double nu,
                               const FockBasis& basis) {
  m.validate(basis);
  Projections out;
  out.particles = definite_particle_number(phi, basis);
  if (out.particles < 1) throw ArgumentError("reduced density matrix needs N >= 1");
  for (const auto& mode : m.modes) {
    out.vectors.push_back(apply_ladder(phi, mode, LadderKind::annihilate, nu, basis));
    out.normalizer += out.vectors.back().squaredNorm();
  }
  if (out.normalizer < 1e-14) throw NoSupportError("state has no support on subspace " + m.name());
  return out;
}

inline ReducedDensityMatrix assemble(const std::vector<Vector>& vectors, double normalizer, int particles,
                                     const OneParticleSubspace& m, const FockBasis& basis) {
  ReducedDensityMatrix rho;
  rho.states = basis.particle_sector(particles - 1);
  const auto dim = static_cast<Eigen::Index>(rho.states.size());
  rho.matrix = Matrix::Zero(dim, dim);
  for (const auto& v : vectors) {
    Vector restricted(dim);
    for (Eigen::Index i = 0; i < dim; ++i) restricted(i) = v(static_cast<Eigen::Index>(rho.states[static_cast<std::size_t>(i)]));
    rho.matrix += restricted * restricted.adjoint();
  }
  rho.matrix /= normalizer;
  rho.subspace = m;
  rho.normalizer = normalizer;
  rho.eigenvalues = hermitian_eigensystem(rho.matrix, 1e-12).values;
  return rho;
}

}  // namespace detail

inline ReducedDensityMatrix reduced_density_matrix(const Vector& phi, const OneParticleSubspace& m, double nu,
                                                   const FockBasis& basis) {
  const auto p = detail::project_out(phi, m, nu, basis);
  return detail::assemble(p.vectors, p.normalizer, p.particles, m, basis);
}

/// Same partial trace, but with the ladder operators of a rotated basis
/// inside M: b_j = sum_k rotation(j,k) a_k. Modes outside M are untouched.
inline ReducedDensityMatrix reduced_density_matrix_rotated(const Vector& phi, const OneParticleSubspace& m,
                                                           const Matrix& rotation, double nu,
                                                           const FockBasis& basis) {
  const auto n = static_cast<Eigen::Index>(m.modes.size());
  if (rotation.rows() != n || rotation.cols() != n) throw ArgumentError("rotation has the wrong shape");
  const auto p = detail::project_out(phi, m, nu, basis);
  std::vector<Vector> rotated;
  double normalizer = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector b = Vector::Zero(phi.size());
    for (Eigen::Index k = 0; k < n; ++k) b += rotation(j, k) * p.vectors[static_cast<std::size_t>(k)];
    normalizer += b.squaredNorm();
    rotated.push_back(std::move(b));
  }
  return detail::assemble(rotated, normalizer, p.particles, m, basis);
}

/// -sum p log p with 0 log 0 = 0. Values in (-1e-8, 0) are treated as zero;
/// anything below -1e-8 is rejected.
inline double entropy_of_spectrum(const std::vector<double>& probabilities, LogBase base = LogBase::two) {
  double s = 0.0;
  for (double p : probabilities) {
    if (p < -1e-8) throw InvalidDensityError("negative eigenvalue " + std::to_string(p));
    if (p <= 0.0) continue;
    s -= p * std::log(p);
  }
  return base == LogBase::two ? s / std::log(2.0) : s;
}

inline double von_neumann_entropy(const ReducedDensityMatrix& rho, LogBase base = LogBase::two) {
  std::vector<double> ev(rho.eigenvalues.data(), rho.eigenvalues.data() + rho.eigenvalues.size());
  return entropy_of_spectrum(ev, base);
}

/// phi_{mk} = <0| a_m a_k |Phi> / sqrt(N_M); rows are all one-particle
/// modes in canonical order, columns the modes of M in the given order.
inline Matrix coefficient_matrix(const Vector& phi, const OneParticleSubspace& m, double nu,
                                 const FockBasis& basis) {
  const auto p = detail::project_out(phi, m, nu, basis);
  if (p.particles != 2) throw ArgumentError("coefficient_matrix: two-particle state required");
  Matrix out(basis.modes(), static_cast<Eigen::Index>(m.modes.size()));
  for (std::size_t k = 0; k < p.vectors.size(); ++k) {
    for (int row = 0; row < basis.modes(); ++row) {
      const Vector vac = apply_ladder(p.vectors[k], ModeIndex::from_canonical(row), LadderKind::annihilate, nu, basis);
      out(row, static_cast<Eigen::Index>(k)) = vac(0);
    }
  }
  return out / std::sqrt(p.normalizer);
}

inline double entropy_via_svd(const Vector& phi, const OneParticleSubspace& m, double nu, const FockBasis& basis,
                              LogBase base = LogBase::two) {
  const auto sigma = jacobi_singular_values(coefficient_matrix(phi, m, nu, basis));
  std::vector<double> probs;
  for (double s : sigma) probs.push_back(s * s);
  return entropy_of_spectrum(probs, base);
}

/// Haar-distributed unitary (QR of a complex Ginibre matrix with the R
/// diagonal phases divided out).
template <typename Rng>
Matrix haar_unitary(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix z(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = Complex(gauss(rng), gauss(rng)) / std::sqrt(2.0);
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Largest max-entry change of rho_M over `trials` Haar rotations of M.
inline double verify_basis_invariance(const Vector& phi, const OneParticleSubspace& m, double nu,
                                      const FockBasis& basis, int trials, std::uint64_t seed) {
  const auto reference = reduced_density_matrix(phi, m, nu, basis);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Matrix u = haar_unitary(static_cast<Eigen::Index>(m.modes.size()), rng);
    const auto rotated = reduced_density_matrix_rotated(phi, m, u, nu, basis);
    worst = std::max(worst, max_abs(rotated.matrix - reference.matrix));
  }
  return worst;
}

/// -2(1/4 - k/Y) log(1/4 - k/Y) - 2(1/4 + k/Y) log(1/4 + k/Y), the
/// non-local entropy of the two mixed (2,0) eigenstates.
inline double mixed_state_nonlocal_entropy(const ModelParams& p, LogBase base = LogBase::two) {
  const auto d = two_site_derived(p);
  const double r = (d.upsilon == 0.0) ? 0.0 : p.hopping / d.upsilon;
  return entropy_of_spectrum({0.25 - r, 0.25 - r, 0.25 + r, 0.25 + r}, base);
}

/// Closed-form E_M of the two-particle eigenstates for M in {B1, B2, B12}.
inline std::optional<double> closed_form_entropy(const ModelParams& p, LevelLabel label, SubspaceLabel m,
                                                 LogBase base = LogBase::two) {
  if (label.particles != 2 || label.index < 1 || label.index > 6 || m == SubspaceLabel::custom) return std::nullopt;
  const double bit = base == LogBase::two ? 1.0 : std::log(2.0);
  const bool product = label.index == 1 || label.index == 6;
  if (m != SubspaceLabel::b12) return product ? 0.0 : bit;
  if (product) return bit;
  if (label.index <= 3) return 2.0 * bit;
  return mixed_state_nonlocal_entropy(p, base);
}

}  // namespace anyon_lab
