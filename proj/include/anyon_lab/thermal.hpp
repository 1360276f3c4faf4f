#pragma once

// Canonical-ensemble observables of the grand Hamiltonian (the chemical
// potential is part of H): Z = tr e^{-beta H},
//   g1_{a;b}     = tr(a^dag_a a_b e^{-beta H}) / Z,
//   g2_{a,b;c,d} = tr(a^dag_a a^dag_b a_c a_d e^{-beta H}) / Z,
//   n_{k,s}      = sum_{j,j'} e^{ik(j-j')} g1_{js;j's}.

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anyon_lab/model.hpp"

namespace anyon_lab {

struct ThermalParams {
  double beta = 1.0;
  ModelParams model;

  void validate() const {
    if (!std::isfinite(beta) || beta <= 0.0) throw ArgumentError("beta must be positive and finite");
    model.validate();
  }
};

/// Energy eigenbasis with Boltzmann weights shifted by the ground energy
/// so that large beta does not overflow.
class ThermalEnsemble {
 public:
  ThermalEnsemble(const ThermalParams& tp, const FockBasis& basis)
      : params_(tp), basis_(&basis), ops_(basis, tp.model.statistics) {
    tp.validate();
    const auto es = hermitian_eigensystem(build_hamiltonian(tp.model, basis), 1e-10);
    energies_ = es.values;
    vectors_ = es.vectors;
    ground_ = energies_.minCoeff();
    weights_.resize(energies_.size());
    for (Eigen::Index i = 0; i < energies_.size(); ++i) weights_(i) = std::exp(-tp.beta * (energies_(i) - ground_));
    shifted_z_ = weights_.sum();
  }

  const ThermalParams& params() const { return params_; }
  const FockBasis& basis() const { return *basis_; }
  const LadderOperators& operators() const { return ops_; }
  const RealVector& energies() const { return energies_; }

  double partition_function() const { return shifted_z_ * std::exp(-params_.beta * ground_); }
  double log_partition_function() const { return std::log(shifted_z_) - params_.beta * ground_; }

  /// tr(op e^{-beta H}) / Z.
  Complex expectation(const Matrix& op) const {
    const Matrix in_eigenbasis = vectors_.adjoint() * op * vectors_;
    Complex acc = 0.0;
    for (Eigen::Index i = 0; i < weights_.size(); ++i) acc += weights_(i) * in_eigenbasis(i, i);
    return acc / shifted_z_;
  }

 private:
  ThermalParams params_;
  const FockBasis* basis_;
  LadderOperators ops_;
  RealVector energies_;
  Matrix vectors_;
  RealVector weights_;
  double ground_ = 0.0;
  double shifted_z_ = 0.0;
};

inline double partition_function(const ThermalParams& tp) {
  const FockBasis basis(tp.model.sites);
  return ThermalEnsemble(tp, basis).partition_function();
}

inline double partition_function_closed(const ThermalParams& tp) {
  tp.validate();
  detail::require_two_sites(tp.model, "partition_function_closed");
  const auto& p = tp.model;
  const double b = tp.beta, k = p.hopping, mu = p.chemical_potential, u = p.onsite, v = p.density_density;
  const double jc = p.exchange * std::cos(p.statistics);
  const auto d = two_site_derived(p);
  return 1.0 + 2.0 * std::exp(b * (k + mu)) + 2.0 * std::exp(-b * (k - mu)) +
         2.0 * std::exp(-b * (-k + u + 4.0 * v - 2.0 * jc - 3.0 * mu)) +
         2.0 * std::exp(-b * (k + u + 4.0 * v - 2.0 * jc - 3.0 * mu)) +
         std::exp(-2.0 * b * (u + 4.0 * v - 2.0 * jc - 2.0 * mu)) + 3.0 * std::exp(-2.0 * b * (v - jc - mu)) +
         std::exp(-b * (u - 2.0 * mu)) + std::exp(-0.5 * b * (-4.0 * mu - d.upsilon + d.v1)) +
         std::exp(-0.5 * b * (-4.0 * mu + d.upsilon + d.v1));
}

/// g1 indexed by canonical mode order (1u, 1d, 2u, 2d, ...).
inline Matrix one_particle_density(const ThermalEnsemble& ens) {
  const int modes = ens.basis().modes();
  Matrix g(modes, modes);
  for (int a = 0; a < modes; ++a) {
    for (int b = 0; b < modes; ++b) {
      g(a, b) = ens.expectation(ens.operators().create(ModeIndex::from_canonical(a)) *
                                ens.operators().annihilate(ModeIndex::from_canonical(b)));
    }
  }
  return g;
}

inline Matrix one_particle_density(const ThermalParams& tp) {
  const FockBasis basis(tp.model.sites);
  return one_particle_density(ThermalEnsemble(tp, basis));
}

namespace detail {

// Boltzmann factors e^{-beta eps_{m,n}} divided by Z, keyed by level.
struct LevelWeights {
  std::map<LevelLabel, double> w;
  TwoSiteDerived d;
  double operator()(int m, int n) const { return w.at({m, n}); }
};

inline LevelWeights level_weights(const ThermalParams& tp) {
  tp.validate();
  detail::require_two_sites(tp.model, "closed-form correlators");
  LevelWeights out;
  out.d = two_site_derived(tp.model);
  const double z = partition_function_closed(tp);
  for (const auto& lvl : closed_form_spectrum(tp.model)) out.w[lvl.label] = std::exp(-tp.beta * lvl.energy) / z;
  return out;
}

}  // namespace detail

inline Matrix one_particle_density_closed(const ThermalParams& tp) {
  const auto e = detail::level_weights(tp);
  const double k = tp.model.hopping, ups = e.d.upsilon;
  const double diag = 0.5 * (e(1, 1) + e(1, 2) + 3.0 * e(2, 1) + e(2, 2) + e(2, 4) + e(2, 5) + 3.0 * e(3, 1) +
                             3.0 * e(3, 2) + 2.0 * e(4, 1));
  const double off = 0.5 * (-4.0 * k * e(2, 4) / ups + 4.0 * k * e(2, 5) / ups + e(1, 1) - e(1, 2) + e(3, 1) - e(3, 2));
  Matrix g = Matrix::Zero(4, 4);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const auto ma = ModeIndex::from_canonical(a), mb = ModeIndex::from_canonical(b);
      if (ma.spin != mb.spin) continue;
      g(a, b) = (ma.site == mb.site) ? diag : off;
    }
  }
  return g;
}

/// Index (a, b; c, d) of a^dag_a a^dag_b a_c a_d.
struct PairIndex {
  std::array<ModeIndex, 4> modes;

  std::string label() const {
    return modes[0].label() + "," + modes[1].label() + ";" + modes[2].label() + "," + modes[3].label();
  }
  bool conserves_spin() const {
    auto two_s = [](ModeIndex m) { return m.spin == Spin::up ? 1 : -1; };
    return two_s(modes[0]) + two_s(modes[1]) == two_s(modes[2]) + two_s(modes[3]);
  }
  PairIndex adjoint() const { return {{modes[3], modes[2], modes[1], modes[0]}}; }
  friend bool operator==(const PairIndex&, const PairIndex&) = default;
  friend auto operator<=>(const PairIndex&, const PairIndex&) = default;
};

/// Parses "1u,2u;1u,2u" (commas optional).
inline PairIndex parse_pair_index(const std::string& text) {
  std::vector<ModeIndex> modes;
  std::string token;
  for (char ch : text) {
    if (ch == ',' || ch == ';' || ch == ' ') continue;
    token += ch;
    if (ch == 'u' || ch == 'd') {
      modes.push_back(parse_mode(token));
      token.clear();
    }
  }
  if (modes.size() != 4 || !token.empty()) throw ArgumentError("bad pair index '" + text + "'");
  return {{modes[0], modes[1], modes[2], modes[3]}};
}

inline Complex pair_correlation(const ThermalEnsemble& ens, const PairIndex& idx) {
  for (const auto& m : idx.modes) ens.basis().require_mode(m);
  const auto& ops = ens.operators();
  return ens.expectation(ops.create(idx.modes[0]) * ops.create(idx.modes[1]) * ops.annihilate(idx.modes[2]) *
                         ops.annihilate(idx.modes[3]));
}

inline Complex pair_correlation(const ThermalParams& tp, const PairIndex& idx) {
  const FockBasis basis(tp.model.sites);
  return pair_correlation(ThermalEnsemble(tp, basis), idx);
}

/// The six independent two-site pair correlators.
inline std::vector<PairIndex> distinct_pair_indices() {
  const ModeIndex u1 = up(1), d1 = down(1), u2 = up(2), d2 = down(2);
  return {
      {{u1, u2, u1, u2}}, {{u1, d1, u1, d1}}, {{u1, d1, u2, d2}},
      {{u1, d1, u1, d2}}, {{u1, d2, u1, d2}}, {{u1, d2, d1, u2}},
  };
}

/// Closed-form pair correlators: the six independent ones, the entries
/// related to them by symmetry, their Hermitian conjugates, and the
/// spin-selection zeros. nullopt for indices outside that set.
inline std::map<PairIndex, Complex> pair_correlation_closed_table(const ThermalParams& tp) {
  const auto e = detail::level_weights(tp);
  const double k = tp.model.hopping, ups = e.d.upsilon, v2 = e.d.v2;
  const Complex em = std::exp(-kI * tp.model.statistics), ep = std::conj(em);
  const ModeIndex u1 = up(1), d1 = down(1), u2 = up(2), d2 = down(2);

  const Complex same_spin = em * (-e(2, 1) - e(3, 1) - e(3, 2) - e(4, 1));
  const Complex doublon = 0.25 * (-2.0 * e(2, 2) - e(2, 4) - e(2, 5) - 4.0 * e(3, 1) - 4.0 * e(3, 2) -
                                  4.0 * e(4, 1) + v2 * (e(2, 5) - e(2, 4)) / ups);
  const Complex doublon_hop = 0.25 * ep * (2.0 * e(2, 2) - e(2, 4) - e(2, 5) + v2 * (e(2, 5) - e(2, 4)) / ups);
  const Complex mixed = (2.0 * k * e(2, 4) - 2.0 * k * e(2, 5) - ups * e(3, 1) + ups * e(3, 2)) / (2.0 * ups);
  const Complex offsite = 0.25 * em * (-2.0 * e(2, 1) - 4.0 * e(3, 1) - 4.0 * e(3, 2) - 4.0 * e(4, 1) +
                                       (v2 - ups) * e(2, 4) / ups - (ups + v2) * e(2, 5) / ups);
  const Complex spin_flip = em / (4.0 * ups) * (-2.0 * ups * e(2, 1) + (ups - v2) * e(2, 4) + (ups + v2) * e(2, 5));

  std::map<PairIndex, Complex> table{
      {{{u1, u2, u1, u2}}, same_spin},
      {{{d1, d2, d1, d2}}, same_spin},
      {{{u1, d1, u1, d1}}, doublon},
      {{{u2, d2, u2, d2}}, doublon},
      {{{u1, d1, u2, d2}}, doublon_hop},
      {{{u1, d2, u1, d2}}, offsite},
      {{{u1, d2, d1, u2}}, spin_flip},
      {{{u1, d1, u1, d2}}, mixed},
      {{{u1, d1, d1, u2}}, -mixed},
      {{{u2, d2, u1, d2}}, em * mixed},
      {{{u2, d2, d1, u2}}, -em * mixed},
      {{{u1, d2, u1, d1}}, em * mixed},
      {{{u1, d2, u2, d2}}, mixed},
      {{{d1, u2, u1, d1}}, -em * mixed},
      {{{d1, u2, u2, d2}}, -mixed},
  };
  std::vector<std::pair<PairIndex, Complex>> conjugates;
  for (const auto& [idx, value] : table) conjugates.emplace_back(idx.adjoint(), std::conj(value));
  for (const auto& [idx, value] : conjugates) table.emplace(idx, value);
  return table;
}

inline std::optional<Complex> pair_correlation_closed(const ThermalParams& tp, const PairIndex& idx) {
  for (const auto& m : idx.modes) {
    if (!m.valid_for(2)) throw ArgumentError("pair index mode " + m.label() + " is not a two-site mode");
  }
  if (!idx.conserves_spin()) {
    tp.validate();
    return Complex(0.0);
  }
  const auto table = pair_correlation_closed_table(tp);
  const auto it = table.find(idx);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

struct MomentumPoint {
  double k = 0.0;
  double occupation = 0.0;   // real part of n_{k,s}
  double imaginary = 0.0;    // residual imaginary part
};

inline std::vector<MomentumPoint> quasimomentum_distribution(const Matrix& g1, Spin spin, int sites,
                                                             const std::vector<double>& k_grid) {
  if (g1.rows() != 2 * sites || g1.cols() != 2 * sites) throw ArgumentError("g1 has the wrong shape");
  std::vector<MomentumPoint> out;
  for (double k : k_grid) {
    Complex n = 0.0;
    for (int j = 1; j <= sites; ++j) {
      for (int jp = 1; jp <= sites; ++jp) {
        n += std::exp(kI * (k * (j - jp))) * g1(ModeIndex{j, spin}.canonical(), ModeIndex{jp, spin}.canonical());
      }
    }
    out.push_back({k, n.real(), n.imag()});
  }
  return out;
}

inline std::vector<MomentumPoint> quasimomentum_distribution(const ThermalParams& tp, Spin spin,
                                                             const std::vector<double>& k_grid) {
  return quasimomentum_distribution(one_particle_density(tp), spin, tp.model.sites, k_grid);
}

/// The discrete grid {2 pi m / L}, m = 0..L-1.
inline std::vector<double> discrete_momenta(int sites) {
  std::vector<double> out;
  for (int m = 0; m < sites; ++m) out.push_back(2.0 * kPi * m / sites);
  return out;
}

}  // namespace anyon_lab
