#pragma once

// Two-site model in a uniform field with vector potential A(t) = Omega t.
// The hopping picks up a Wilson-line phase,
//
//   H(t) = H(kappa a^dag_1s a_2s -> kappa e^{i Omega t} a^dag_1s a_2s) = G H G^dag,
//   G(t) = exp(i Omega t N_1),
//
// so the rotating frame is exact: W(t) = W1(t) exp(-i Htilde t) with
// W1 = exp(i Omega t D), Htilde = H + Omega D and D = N_1 - ceil(N/2) in
// each (N, 2Sz) block.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "anyon_lab/entanglement.hpp"
#include "anyon_lab/model.hpp"
#include "anyon_lab/parallel.hpp"

namespace anyon_lab {

struct FieldProtocol {
  double omega = 0.0;

  void validate() const {
    if (!std::isfinite(omega)) throw ArgumentError("field strength must be finite");
  }
};

inline Matrix time_dependent_hamiltonian(const ModelParams& p, double omega, double t, const FockBasis& basis) {
  detail::require_two_sites(p, "time_dependent_hamiltonian");
  FieldProtocol{omega}.validate();
  if (!std::isfinite(t)) throw ArgumentError("time must be finite");
  return detail::assemble_hamiltonian(p, basis, std::exp(kI * (omega * t)));
}

/// Diagonal of D = N_1 - ceil(N/2).
inline RealVector frame_generator(const FockBasis& basis) {
  RealVector d(basis.dimension());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const auto& s = basis.states()[static_cast<std::size_t>(i)];
    d(i) = s.site_count(1) - (s.particle_count() + 1) / 2;
  }
  return d;
}

/// Htilde = H + Omega D, time independent.
inline Matrix rotating_frame_hamiltonian(const ModelParams& p, double omega, const FockBasis& basis) {
  detail::require_two_sites(p, "rotating_frame_hamiltonian");
  FieldProtocol{omega}.validate();
  const RealVector d = frame_generator(basis);
  return build_hamiltonian(p, basis) + (omega * d).cast<Complex>().asDiagonal().toDenseMatrix();
}

/// W1(t) = exp(i Omega t D).
inline Matrix frame_rotation(double omega, double t, const FockBasis& basis) {
  const RealVector d = frame_generator(basis);
  Vector phases(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) phases(i) = std::exp(kI * (omega * t * d(i)));
  return phases.asDiagonal();
}

struct EvolutionOperator {
  Matrix w;
  double t = 0.0;
  double omega = 0.0;
};

/// Precomputed per-block eigensystems of Htilde; evaluating W(t) is then a
/// product of diagonal phases.
class Propagator {
 public:
  Propagator(const ModelParams& p, double omega, const FockBasis& basis) : omega_(omega), basis_(&basis) {
    const Matrix htilde = rotating_frame_hamiltonian(p, omega, basis);
    for (const auto& [key, block] : block_decompose(htilde, basis)) {
      blocks_.push_back({basis.sector(key), hermitian_eigensystem(block, 1e-10)});
    }
  }

  EvolutionOperator at(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ArgumentError("evolution time must be finite and >= 0");
    const Eigen::Index dim = basis_->dimension();
    Matrix frame = Matrix::Zero(dim, dim);
    for (const auto& b : blocks_) {
      Vector phases(b.eig.values.size());
      for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::exp(-kI * (b.eig.values(i) * t));
      const Matrix local = b.eig.vectors * phases.asDiagonal() * b.eig.vectors.adjoint();
      for (std::size_t r = 0; r < b.members.size(); ++r) {
        for (std::size_t c = 0; c < b.members.size(); ++c) {
          frame(static_cast<Eigen::Index>(b.members[r]), static_cast<Eigen::Index>(b.members[c])) =
              local(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
      }
    }
    return {frame_rotation(omega_, t, *basis_) * frame, t, omega_};
  }

 private:
  struct Block {
    std::vector<std::size_t> members;
    Eigensystem eig;
  };
  double omega_;
  const FockBasis* basis_;
  std::vector<Block> blocks_;
};

inline EvolutionOperator evolution_operator(const ModelParams& p, double omega, double t, const FockBasis& basis) {
  return Propagator(p, omega, basis).at(t);
}

/// max over `times` of || i dW/dt - H(t) W ||_max with a central difference.
inline double evolution_residual(const ModelParams& p, double omega, const std::vector<double>& times,
                                 const FockBasis& basis, double step = 1e-6) {
  const Propagator prop(p, omega, basis);
  double worst = 0.0;
  for (double t : times) {
    const double lo = std::max(0.0, t - step);
    const double hi = t + step;
    const Matrix derivative = (prop.at(hi).w - prop.at(lo).w) / (hi - lo);
    const double mid = 0.5 * (lo + hi);
    const Matrix lhs = kI * derivative;
    const Matrix rhs = time_dependent_hamiltonian(p, omega, mid, basis) * prop.at(mid).w;
    worst = std::max(worst, max_abs(lhs - rhs));
  }
  return worst;
}

struct EntropyPoint {
  double t = 0.0;
  double entropy = 0.0;
  std::optional<std::string> error;
};

inline std::vector<EntropyPoint> entropy_vs_time(const Vector& initial, const OneParticleSubspace& m,
                                                 const ModelParams& p, double omega,
                                                 const std::vector<double>& times, const FockBasis& basis,
                                                 LogBase base = LogBase::two) {
  const Propagator prop(p, omega, basis);
  std::vector<EntropyPoint> out(times.size());
  parallel_for(times.size(), [&](std::size_t i) {
    out[i].t = times[i];
    try {
      const Vector phi = prop.at(times[i]).w * initial;
      out[i].entropy = von_neumann_entropy(reduced_density_matrix(phi, m, p.statistics, basis), base);
    } catch (const NoSupportError& e) {
      out[i].entropy = std::nan("");
      out[i].error = e.what();
    }
  });
  return out;
}

/// The (2,0) block of W in the literal basis
/// {|1u,1d>, |2u,2d>, |1u,2d>, |1d,2u>}.
inline Matrix doublon_block(const EvolutionOperator& w, double nu, const FockBasis& basis) {
  return literal_block(w.w, two_site_display_order({2, 0}), nu, basis);
}

/// Coefficients of W(t)|1u,1d> = c1 |1u,1d> + c2 (|1u,2d> - |1d,2u>)/sqrt2 + c3 |2u,2d>.
struct ExtractionCoefficients {
  Complex c1, c2, c3;
  Complex w13, w14;  // block entries rows 3 and 4 of the first column
  Matrix block;
};

inline ExtractionCoefficients extraction_coefficients(const ModelParams& p, double omega, double t,
                                                      const FockBasis& basis) {
  detail::require_two_sites(p, "extraction_coefficients");
  const Matrix block = doublon_block(evolution_operator(p, omega, t, basis), p.statistics, basis);
  return {block(0, 0), std::sqrt(2.0) * block(2, 0), block(1, 0), block(2, 0), block(3, 0), block};
}

/// Permutation exchanging the two singly occupied states with a sign flip,
/// a symmetry of the doublon block.
inline Matrix doublon_block_symmetry() {
  Matrix p = Matrix::Zero(4, 4);
  p(0, 0) = 1.0;
  p(1, 1) = 1.0;
  p(2, 3) = -1.0;
  p(3, 2) = -1.0;
  return p;
}

}  // namespace anyon_lab
