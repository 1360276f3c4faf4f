#pragma once

// Anyonic Hubbard Hamiltonian on an open chain,
//
//   H = -kappa sum_<ij> sum_s a^dag_is a_js + U sum_i n_iu n_id
//       + V sum_<ij> sum_ss' n_is n_js' + J sum_<ij> sum_ss' a^dag_is a^dag_js' a_is' a_js
//       - mu sum_is n_is,
//
// where <ij> runs over ordered nearest-neighbour pairs in both directions.

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "anyon_lab/fock.hpp"
#include "anyon_lab/linalg.hpp"

namespace anyon_lab {

struct ModelParams {
  int sites = 2;
  double hopping = 1.0;             // kappa
  double onsite = 4.0;              // U
  double density_density = 1.0;     // V
  double exchange = 0.25;           // J
  double chemical_potential = 0.5;  // mu
  double statistics = 0.0;          // nu, radians

  void validate() const {
    for (double x : {hopping, onsite, density_density, exchange, chemical_potential, statistics}) {
      if (!std::isfinite(x)) throw ArgumentError("ModelParams: parameters must be finite");
    }
    if (sites < 1 || sites > kMaxSites) throw ArgumentError("ModelParams: L must be in 1..4");
  }
};

/// Combinations that appear throughout the two-site closed forms.
struct TwoSiteDerived {
  double v1 = 0.0;        // 2J cos(nu) + U + 2V
  double v2 = 0.0;        // -2J cos(nu) + U - 2V
  double upsilon = 0.0;   // sqrt(16 kappa^2 + v2^2)
};

inline TwoSiteDerived two_site_derived(const ModelParams& p) {
  const double c = std::cos(p.statistics);
  TwoSiteDerived d;
  d.v1 = 2.0 * p.exchange * c + p.onsite + 2.0 * p.density_density;
  d.v2 = -2.0 * p.exchange * c + p.onsite - 2.0 * p.density_density;
  d.upsilon = std::hypot(4.0 * p.hopping, d.v2);
  return d;
}

namespace detail {

inline void require_matching(const ModelParams& p, const FockBasis& basis) {
  p.validate();
  if (basis.sites() != p.sites) {
    throw ArgumentError("Hamiltonian: basis has L=" + std::to_string(basis.sites()) +
                        " but parameters have L=" + std::to_string(p.sites));
  }
}

inline void require_two_sites(const ModelParams& p, const char* what) {
  p.validate();
  if (p.sites != 2) throw UnsupportedError(std::string(what) + ": only the two-site model is supported");
}

// Hopping a^dag_i a_{i+1} carries `forward_phase`, its conjugate the
// reverse hop. forward_phase = 1 is the static model.
inline Matrix assemble_hamiltonian(const ModelParams& p, const FockBasis& basis, Complex forward_phase) {
  require_matching(p, basis);
  const LadderOperators ops(basis, p.statistics);
  const Eigen::Index dim = basis.dimension();
  Matrix h = Matrix::Zero(dim, dim);
  const std::array<Spin, 2> spins{Spin::up, Spin::down};

  std::vector<std::pair<int, int>> bonds;
  for (int i = 1; i < p.sites; ++i) {
    bonds.emplace_back(i, i + 1);
    bonds.emplace_back(i + 1, i);
  }

  for (const auto& [i, j] : bonds) {
    const Complex phase = (j == i + 1) ? forward_phase : std::conj(forward_phase);
    for (Spin s : spins) {
      h -= p.hopping * phase * ops.create({i, s}) * ops.annihilate({j, s});
      for (Spin t : spins) {
        h += p.density_density * ops.number({i, s}) * ops.number({j, t});
        h += p.exchange * ops.create({i, s}) * ops.create({j, t}) * ops.annihilate({i, t}) *
             ops.annihilate({j, s});
      }
    }
  }
  for (int i = 1; i <= p.sites; ++i) {
    h += p.onsite * ops.number(up(i)) * ops.number(down(i));
    h -= p.chemical_potential * (ops.number(up(i)) + ops.number(down(i)));
  }
  return h;
}

}  // namespace detail

inline Matrix build_hamiltonian(const ModelParams& p, const FockBasis& basis) {
  return detail::assemble_hamiltonian(p, basis, Complex(1.0));
}

/// Diagonal matrices of total particle number and 2*Sz.
inline Matrix total_number_matrix(const FockBasis& basis) {
  RealVector d(basis.dimension());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = basis.states()[static_cast<std::size_t>(i)].particle_count();
  return d.cast<Complex>().asDiagonal();
}

inline Matrix two_sz_matrix(const FockBasis& basis) {
  RealVector d(basis.dimension());
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = basis.states()[static_cast<std::size_t>(i)].two_sz();
  return d.cast<Complex>().asDiagonal();
}

inline Matrix extract_block(const Matrix& m, const std::vector<std::size_t>& rows,
                            const std::vector<std::size_t>& cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          m(static_cast<Eigen::Index>(rows[r]), static_cast<Eigen::Index>(cols[c]));
    }
  }
  return out;
}

inline Matrix extract_block(const Matrix& m, const std::vector<std::size_t>& positions) {
  return extract_block(m, positions, positions);
}

/// Splits a sector-conserving matrix into its (N, 2Sz) blocks. Throws
/// StructureError if any cross-sector entry exceeds `tol`.
inline std::map<SectorKey, Matrix> block_decompose(const Matrix& h, const FockBasis& basis,
                                                   double tol = 1e-12) {
  if (h.rows() != basis.dimension() || h.cols() != basis.dimension()) {
    throw ArgumentError("block_decompose: matrix and basis dimensions differ");
  }
  std::vector<SectorKey> key_of(static_cast<std::size_t>(basis.dimension()));
  for (const auto& [key, members] : basis.sectors()) {
    for (std::size_t i : members) key_of[i] = key;
  }
  double leak = 0.0;
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      if (key_of[static_cast<std::size_t>(r)] != key_of[static_cast<std::size_t>(c)]) {
        leak = std::max(leak, std::abs(h(r, c)));
      }
    }
  }
  if (leak > tol) {
    throw StructureError("block_decompose: cross-sector element " + std::to_string(leak) +
                         " exceeds tolerance");
  }
  std::map<SectorKey, Matrix> blocks;
  for (const auto& [key, members] : basis.sectors()) blocks.emplace(key, extract_block(h, members));
  return blocks;
}

// ---------------------------------------------------------------------------
// Two-site closed forms.

/// Level label (particle number, index within that particle number).
struct LevelLabel {
  int particles = 0;
  int index = 1;

  std::string str() const { return std::to_string(particles) + "," + std::to_string(index); }
  friend bool operator==(const LevelLabel&, const LevelLabel&) = default;
  friend auto operator<=>(const LevelLabel&, const LevelLabel&) = default;
};

struct ClosedLevel {
  LevelLabel label;
  SectorKey sector;
  double energy = 0.0;
};

inline std::vector<ClosedLevel> closed_form_spectrum(const ModelParams& p) {
  detail::require_two_sites(p, "closed_form_spectrum");
  const auto d = two_site_derived(p);
  const double k = p.hopping, mu = p.chemical_potential, u = p.onsite, v = p.density_density;
  const double jc = p.exchange * std::cos(p.statistics);
  const double triplet = 2.0 * (v - jc - mu);
  const double three = u + 4.0 * v - 2.0 * jc - 3.0 * mu;
  return {
      {{0, 1}, {0, 0}, 0.0},
      {{1, 1}, {1, 1}, -k - mu},
      {{1, 2}, {1, 1}, k - mu},
      {{1, 3}, {1, -1}, -k - mu},
      {{1, 4}, {1, -1}, k - mu},
      {{2, 1}, {2, 2}, triplet},
      {{2, 2}, {2, 0}, u - 2.0 * mu},
      {{2, 3}, {2, 0}, triplet},
      {{2, 4}, {2, 0}, 0.5 * (-4.0 * mu + d.upsilon + d.v1)},
      {{2, 5}, {2, 0}, 0.5 * (-4.0 * mu - d.upsilon + d.v1)},
      {{2, 6}, {2, -2}, triplet},
      {{3, 1}, {3, 1}, three - k},
      {{3, 2}, {3, 1}, three + k},
      {{3, 3}, {3, -1}, three - k},
      {{3, 4}, {3, -1}, three + k},
      {{4, 1}, {4, 0}, 2.0 * (u + 4.0 * v - 2.0 * jc - 2.0 * mu)},
  };
}

inline double closed_form_energy(const ModelParams& p, LevelLabel label) {
  for (const auto& lvl : closed_form_spectrum(p)) {
    if (lvl.label == label) return lvl.energy;
  }
  throw ArgumentError("closed_form_energy: no level " + label.str());
}

/// A linear combination of literal kets a^dag a^dag ... |0>.
struct KetTerm {
  Complex coefficient;
  std::vector<ModeIndex> modes;
};

inline Vector superpose(const std::vector<KetTerm>& terms, double nu, const FockBasis& basis) {
  Vector psi = Vector::Zero(basis.dimension());
  for (const auto& t : terms) psi += t.coefficient * product_state(std::span<const ModeIndex>(t.modes), nu, basis);
  return psi;
}

struct ClosedEigenpair {
  LevelLabel label;
  SectorKey sector;
  double energy = 0.0;
  Vector state;  // unit norm, first significant component real-positive
};

namespace detail {

// Coefficients (doublon weight, off-site weight) of the two (2,0) states
// that mix doublons with singly occupied sites. Written without dividing by
// Upsilon -+ v2 so that kappa -> 0 is continuous.
struct MixedWeights {
  double doublon;
  double offsite;
};

inline MixedWeights mixed_weights(double kappa, double v2, double upsilon, bool upper) {
  const double four_k = 4.0 * kappa;
  if (std::abs(kappa) == 0.0 && v2 == 0.0) return {upper ? 1.0 : -1.0, 1.0};
  // upper branch (eps_{2,4}): 4k/(Y - v2) == (Y + v2)/(4k)
  // lower branch (eps_{2,5}): -4k/(Y + v2) == -(Y - v2)/(4k)
  if (upper) {
    return v2 >= 0.0 ? MixedWeights{upsilon + v2, four_k} : MixedWeights{four_k, upsilon - v2};
  }
  return v2 <= 0.0 ? MixedWeights{-(upsilon - v2), four_k} : MixedWeights{-four_k, upsilon + v2};
}

}  // namespace detail

/// The sixteen two-site eigenstates built from their literal ket expansions.
inline std::vector<ClosedEigenpair> closed_form_eigenvectors(const ModelParams& p, const FockBasis& basis) {
  detail::require_matching(p, basis);
  detail::require_two_sites(p, "closed_form_eigenvectors");
  const double nu = p.statistics;
  const Complex en = std::exp(-kI * nu);
  const auto d = two_site_derived(p);
  const auto hi = detail::mixed_weights(p.hopping, d.v2, d.upsilon, true);
  const auto lo = detail::mixed_weights(p.hopping, d.v2, d.upsilon, false);
  const ModeIndex u1 = up(1), d1 = down(1), u2 = up(2), d2 = down(2);

  const std::map<LevelLabel, std::vector<KetTerm>> expansions{
      {{0, 1}, {{1.0, {}}}},
      {{1, 1}, {{1.0, {u1}}, {1.0, {u2}}}},
      {{1, 2}, {{-1.0, {u1}}, {1.0, {u2}}}},
      {{1, 3}, {{1.0, {d1}}, {1.0, {d2}}}},
      {{1, 4}, {{-1.0, {d1}}, {1.0, {d2}}}},
      {{2, 1}, {{1.0, {u1, u2}}}},
      {{2, 2}, {{-en, {u1, d1}}, {1.0, {u2, d2}}}},
      {{2, 3}, {{1.0, {u1, d2}}, {1.0, {d1, u2}}}},
      {{2, 4},
       {{hi.doublon * en, {u1, d1}}, {hi.doublon, {u2, d2}}, {-hi.offsite, {u1, d2}}, {hi.offsite, {d1, u2}}}},
      {{2, 5},
       {{lo.doublon * en, {u1, d1}}, {lo.doublon, {u2, d2}}, {-lo.offsite, {u1, d2}}, {lo.offsite, {d1, u2}}}},
      {{2, 6}, {{1.0, {d1, d2}}}},
      {{3, 1}, {{-en, {u1, d1, u2}}, {1.0, {u1, u2, d2}}}},
      {{3, 2}, {{en, {u1, d1, u2}}, {1.0, {u1, u2, d2}}}},
      {{3, 3}, {{-en, {u1, d1, d2}}, {1.0, {d1, u2, d2}}}},
      {{3, 4}, {{en, {u1, d1, d2}}, {1.0, {d1, u2, d2}}}},
      {{4, 1}, {{1.0, {u1, d1, u2, d2}}}},
  };

  std::vector<ClosedEigenpair> out;
  for (const auto& lvl : closed_form_spectrum(p)) {
    Vector psi = superpose(expansions.at(lvl.label), nu, basis);
    psi /= psi.norm();
    out.push_back({lvl.label, lvl.sector, lvl.energy, fix_global_phase(psi)});
  }
  return out;
}

inline Vector closed_form_eigenvector(const ModelParams& p, const FockBasis& basis, LevelLabel label) {
  for (auto& e : closed_form_eigenvectors(p, basis)) {
    if (e.label == label) return e.state;
  }
  throw ArgumentError("closed_form_eigenvector: no level " + label.str());
}

/// The basis order in which the two-site blocks are usually displayed, as
/// mode lists (ascending canonical order within each state).
inline std::vector<std::vector<ModeIndex>> two_site_display_order(SectorKey key) {
  const ModeIndex u1 = up(1), d1 = down(1), u2 = up(2), d2 = down(2);
  static const std::map<SectorKey, std::vector<std::vector<ModeIndex>>> order{
      {{0, 0}, {{}}},
      {{1, 1}, {{u1}, {u2}}},
      {{1, -1}, {{d1}, {d2}}},
      {{2, 2}, {{u1, u2}}},
      {{2, 0}, {{u1, d1}, {u2, d2}, {u1, d2}, {d1, u2}}},
      {{2, -2}, {{d1, d2}}},
      {{3, 1}, {{u1, d1, u2}, {u1, u2, d2}}},
      {{3, -1}, {{u1, d1, d2}, {d1, u2, d2}}},
      {{4, 0}, {{u1, d1, u2, d2}}},
  };
  const auto it = order.find(key);
  if (it == order.end()) throw ArgumentError("two_site_display_order: no sector " + key.label());
  return it->second;
}

/// Canonical-basis positions of a list of occupation sets.
inline std::vector<std::size_t> positions_of(const std::vector<std::vector<ModeIndex>>& states) {
  std::vector<std::size_t> out;
  for (const auto& modes : states) {
    std::uint32_t occ = 0;
    for (const auto& m : modes) occ |= 1u << m.canonical();
    out.push_back(occ);
  }
  return out;
}

/// Matrix elements <k_a| op |k_b> between literal kets k = a^dag ... |0>
/// with the modes applied in the order written.
inline Matrix literal_block(const Matrix& op, const std::vector<std::vector<ModeIndex>>& kets, double nu,
                            const FockBasis& basis) {
  Matrix k(basis.dimension(), static_cast<Eigen::Index>(kets.size()));
  for (std::size_t i = 0; i < kets.size(); ++i) {
    k.col(static_cast<Eigen::Index>(i)) = product_state(std::span<const ModeIndex>(kets[i]), nu, basis);
  }
  return k.adjoint() * op * k;
}

// ---------------------------------------------------------------------------
// Numerical diagonalization.

struct SpectralDecomposition {
  RealVector eigenvalues;           // ascending (within each sector for the by-sector variant)
  Matrix eigenvectors;              // columns, orthonormal
  std::vector<SectorKey> sectors;   // empty unless produced sector by sector
};

inline SpectralDecomposition diagonalize(const Matrix& h) {
  const auto es = hermitian_eigensystem(h, 1e-10);
  return {es.values, es.vectors, {}};
}

/// Diagonalizes block by block and embeds the eigenvectors back into the
/// full space. Eigenvalues come out sorted globally ascending.
inline SpectralDecomposition diagonalize_by_sector(const Matrix& h, const FockBasis& basis) {
  const auto blocks = block_decompose(h, basis);
  struct Pair {
    double value;
    Vector vec;
    SectorKey key;
  };
  std::vector<Pair> pairs;
  for (const auto& [key, block] : blocks) {
    const auto es = hermitian_eigensystem(block, 1e-10);
    const auto& members = basis.sector(key);
    for (Eigen::Index c = 0; c < es.values.size(); ++c) {
      Vector v = Vector::Zero(basis.dimension());
      for (std::size_t r = 0; r < members.size(); ++r) {
        v(static_cast<Eigen::Index>(members[r])) = es.vectors(static_cast<Eigen::Index>(r), c);
      }
      pairs.push_back({es.values(c), fix_global_phase(v), key});
    }
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.value < b.value; });
  SpectralDecomposition out;
  out.eigenvalues.resize(static_cast<Eigen::Index>(pairs.size()));
  out.eigenvectors.resize(basis.dimension(), static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.eigenvalues(static_cast<Eigen::Index>(i)) = pairs[i].value;
    out.eigenvectors.col(static_cast<Eigen::Index>(i)) = pairs[i].vec;
    out.sectors.push_back(pairs[i].key);
  }
  return out;
}

}  // namespace anyon_lab
