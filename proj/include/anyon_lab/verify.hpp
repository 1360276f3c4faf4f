#pragma once

// Self-consistency suite behind the `verify` command. Each check reports
// its worst deviation against a tolerance.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "anyon_lab/dynamics.hpp"
#include "anyon_lab/entanglement.hpp"
#include "anyon_lab/model.hpp"
#include "anyon_lab/thermal.hpp"

namespace anyon_lab {

struct CheckResult {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed() const { return deviation <= tolerance; }
};

struct VerifyOptions {
  ModelParams params;
  double beta = 1.0;
  std::vector<double> nu_grid{0.0, kPi / 4, kPi / 2, 3 * kPi / 4, kPi, 1.2345};
  std::uint64_t seed = 12345;
  int invariance_trials = 100;
  int random_states = 1000;
};

/// Random normalized state in the two-particle sector.
template <typename Rng>
Vector random_two_particle_state(const FockBasis& basis, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector psi = Vector::Zero(basis.dimension());
  for (std::size_t i : basis.particle_sector(2)) psi(static_cast<Eigen::Index>(i)) = Complex(gauss(rng), gauss(rng));
  return psi / psi.norm();
}

namespace detail {

inline double sorted_spectrum_gap(const RealVector& numeric, std::vector<double> closed) {
  std::vector<double> num(numeric.data(), numeric.data() + numeric.size());
  std::sort(num.begin(), num.end());
  std::sort(closed.begin(), closed.end());
  if (num.size() != closed.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) worst = std::max(worst, std::abs(num[i] - closed[i]));
  return worst;
}

}  // namespace detail

inline std::vector<CheckResult> run_invariant_suite(const VerifyOptions& opt) {
  ModelParams base = opt.params;
  base.sites = 2;
  base.validate();
  const FockBasis basis(2);
  std::vector<CheckResult> out;
  auto record = [&](std::string name, double tol, const std::function<double(double)>& per_nu) {
    double worst = 0.0;
    for (double nu : opt.nu_grid) worst = std::max(worst, per_nu(nu));
    out.push_back({std::move(name), worst, tol});
  };
  auto at = [&](double nu) {
    ModelParams p = base;
    p.statistics = nu;
    return p;
  };

  record("algebra L=2,3", 1e-12, [&](double nu) {
    return std::max(verify_algebra(nu, 2, 1.0).max_deviation, verify_algebra(nu, 3, 1.0).max_deviation);
  });
  record("hamiltonian hermitian and block diagonal", 1e-12, [&](double nu) {
    const Matrix h = build_hamiltonian(at(nu), basis);
    double leak = 0.0;
    try {
      block_decompose(h, basis, 0.0);
    } catch (const StructureError&) {
      leak = 1.0;
    }
    return std::max(hermiticity_defect(h), leak);
  });
  record("spectrum vs closed form", 1e-10, [&](double nu) {
    const auto p = at(nu);
    std::vector<double> closed;
    for (const auto& l : closed_form_spectrum(p)) closed.push_back(l.energy);
    return detail::sorted_spectrum_gap(diagonalize(build_hamiltonian(p, basis)).eigenvalues, closed);
  });
  record("closed-form eigenvector residual", 1e-10, [&](double nu) {
    const auto p = at(nu);
    const Matrix h = build_hamiltonian(p, basis);
    double worst = 0.0;
    for (const auto& e : closed_form_eigenvectors(p, basis)) {
      worst = std::max(worst, (h * e.state - e.energy * e.state).norm());
    }
    return worst;
  });
  record("entropy table", 1e-10, [&](double nu) {
    const auto p = at(nu);
    double worst = 0.0;
    for (int k = 1; k <= 6; ++k) {
      const Vector phi = closed_form_eigenvector(p, basis, {2, k});
      for (const auto& m : {OneParticleSubspace::b1(), OneParticleSubspace::b2(), OneParticleSubspace::b12()}) {
        const double s = von_neumann_entropy(reduced_density_matrix(phi, m, nu, basis));
        worst = std::max(worst, std::abs(s - *closed_form_entropy(p, {2, k}, m.label)));
      }
    }
    return worst;
  });

  {
    std::mt19937_64 rng(opt.seed);
    double worst_svd = 0.0, worst_inv = 0.0;
    for (int i = 0; i < opt.random_states; ++i) {
      const double nu = opt.nu_grid[static_cast<std::size_t>(i) % opt.nu_grid.size()];
      const Vector phi = random_two_particle_state(basis, rng);
      const auto m = OneParticleSubspace::b12();
      worst_svd = std::max(worst_svd, std::abs(von_neumann_entropy(reduced_density_matrix(phi, m, nu, basis)) -
                                               entropy_via_svd(phi, m, nu, basis)));
    }
    out.push_back({"svd route vs eigenvalue route", worst_svd, 1e-10});
    for (double nu : opt.nu_grid) {
      const auto p = at(nu);
      for (int k = 1; k <= 6; ++k) {
        const Vector phi = closed_form_eigenvector(p, basis, {2, k});
        for (const auto& m : {OneParticleSubspace::b1(), OneParticleSubspace::b2(), OneParticleSubspace::b12()}) {
          worst_inv = std::max(worst_inv, verify_basis_invariance(phi, m, nu, basis, opt.invariance_trials / 6 + 1,
                                                                  rng()));
        }
      }
    }
    out.push_back({"basis invariance of reduced density matrices", worst_inv, 1e-10});
  }

  const std::vector<double> omegas{0.0, 0.5, 2.0};
  const std::vector<double> times{0.0, 0.3, 1.7, 3.7, 9.0};
  record("evolution operator unitary", 1e-10, [&](double nu) {
    double worst = 0.0;
    for (double om : omegas) {
      const Propagator prop(at(nu), om, basis);
      for (double t : times) {
        const Matrix w = prop.at(t).w;
        worst = std::max(worst, max_abs(w.adjoint() * w - Matrix::Identity(16, 16)));
      }
    }
    return worst;
  });
  record("i dW/dt = H(t) W (finite difference)", 1e-6, [&](double nu) {
    double worst = 0.0;
    for (double om : omegas) worst = std::max(worst, evolution_residual(at(nu), om, times, basis));
    return worst;
  });
  record("extraction coefficients", 1e-10, [&](double nu) {
    double worst = 0.0;
    const Matrix sym = doublon_block_symmetry();
    for (double om : omegas) {
      for (double t : times) {
        const auto c = extraction_coefficients(at(nu), om, t, basis);
        worst = std::max({worst, std::abs(std::norm(c.c1) + std::norm(c.c2) + std::norm(c.c3) - 1.0),
                          std::abs(c.w14 + c.w13), max_abs(sym * c.block * sym.adjoint() - c.block)});
      }
    }
    return worst;
  });

  record("partition function closed vs trace (relative)", 1e-10, [&](double nu) {
    const ThermalParams tp{opt.beta, at(nu)};
    const double z = partition_function(tp);
    return std::abs(z - partition_function_closed(tp)) / z;
  });
  record("g1 closed vs trace", 1e-10, [&](double nu) {
    const ThermalParams tp{opt.beta, at(nu)};
    return max_abs(one_particle_density(tp) - one_particle_density_closed(tp));
  });
  record("g2 closed vs trace", 1e-10, [&](double nu) {
    const ThermalParams tp{opt.beta, at(nu)};
    const ThermalEnsemble ens(tp, basis);
    double worst = 0.0;
    for (const auto& [idx, value] : pair_correlation_closed_table(tp)) {
      worst = std::max(worst, std::abs(pair_correlation(ens, idx) - value));
    }
    return worst;
  });
  record("quasi-momentum sum rule and spin symmetry", 1e-10, [&](double nu) {
    const ThermalParams tp{opt.beta, at(nu)};
    const Matrix g1 = one_particle_density(tp);
    const auto up_n = quasimomentum_distribution(g1, Spin::up, 2, discrete_momenta(2));
    const auto dn_n = quasimomentum_distribution(g1, Spin::down, 2, discrete_momenta(2));
    const double trace_up = (g1(0, 0) + g1(2, 2)).real();
    double worst = std::abs(up_n[0].occupation + up_n[1].occupation - 2.0 * trace_up);
    for (std::size_t i = 0; i < up_n.size(); ++i) {
      worst = std::max({worst, std::abs(up_n[i].occupation - dn_n[i].occupation), std::abs(up_n[i].imaginary),
                        std::max(0.0, -up_n[i].occupation)});
    }
    return worst;
  });
  return out;
}

}  // namespace anyon_lab
