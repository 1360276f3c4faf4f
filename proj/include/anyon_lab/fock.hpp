#pragma once

// Fock space of a spin-1/2 chain with L sites and anyonic exchange phases.
//
// Modes are ordered site-major, up before down: canonical index
// 2*(site-1) + (spin == down). An occupation set {m_1 < ... < m_N} is
// represented by the basis vector
//
//     a^dag_{m_N} ... a^dag_{m_2} a^dag_{m_1} |0>,
//
// i.e. creation operators are applied to the vacuum in ascending canonical
// order. Creating mode m on such a state means commuting a^dag_m past every
// occupied mode m' > m, each crossing contributing
// -exp(i nu sgn(site(m) - site(m'))) (so -1 on the same site).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "anyon_lab/types.hpp"

namespace anyon_lab {

inline constexpr int kMaxSites = 4;

enum class Spin { up, down };

inline char spin_symbol(Spin s) { return s == Spin::up ? 'u' : 'd'; }

struct ModeIndex {
  int site = 1;  // 1-based
  Spin spin = Spin::up;

  constexpr int canonical() const { return 2 * (site - 1) + (spin == Spin::down ? 1 : 0); }

  static constexpr ModeIndex from_canonical(int index) {
    return ModeIndex{index / 2 + 1, index % 2 == 0 ? Spin::up : Spin::down};
  }

  bool valid_for(int sites) const { return site >= 1 && site <= sites; }

  std::string label() const { return std::to_string(site) + spin_symbol(spin); }

  friend constexpr bool operator==(const ModeIndex&, const ModeIndex&) = default;
  friend constexpr auto operator<=>(const ModeIndex& a, const ModeIndex& b) {
    return a.canonical() <=> b.canonical();
  }
};

inline constexpr ModeIndex up(int site) { return {site, Spin::up}; }
inline constexpr ModeIndex down(int site) { return {site, Spin::down}; }

/// Parses labels such as "1u" or "2d".
inline ModeIndex parse_mode(const std::string& text) {
  if (text.size() < 2) throw ArgumentError("bad mode label '" + text + "'");
  const char s = text.back();
  if (s != 'u' && s != 'd') throw ArgumentError("bad mode label '" + text + "'");
  int site = 0;
  try {
    site = std::stoi(text.substr(0, text.size() - 1));
  } catch (const std::exception&) {
    throw ArgumentError("bad mode label '" + text + "'");
  }
  return {site, s == 'u' ? Spin::up : Spin::down};
}

struct FockState {
  std::uint32_t occupation = 0;

  bool occupied(int canonical) const { return (occupation >> canonical) & 1u; }
  int particle_count() const { return std::popcount(occupation); }

  int two_sz() const {
    int result = 0;
    for (std::uint32_t bits = occupation; bits != 0; bits &= bits - 1) {
      result += (std::countr_zero(bits) % 2 == 0) ? 1 : -1;
    }
    return result;
  }

  int site_count(int site) const {
    return static_cast<int>((occupation >> (2 * (site - 1))) & 1u) +
           static_cast<int>((occupation >> (2 * (site - 1) + 1)) & 1u);
  }

  std::string label() const {
    std::string out = "|";
    bool first = true;
    for (int m = 0; m < 32; ++m) {
      if (!occupied(m)) continue;
      if (!first) out += ',';
      out += ModeIndex::from_canonical(m).label();
      first = false;
    }
    return out + ">";
  }

  friend bool operator==(const FockState&, const FockState&) = default;
};

/// Quantum numbers of a block: particle number and twice the z-spin.
struct SectorKey {
  int particles = 0;
  int two_sz = 0;

  friend bool operator==(const SectorKey&, const SectorKey&) = default;
  friend auto operator<=>(const SectorKey&, const SectorKey&) = default;

  std::string label() const {
    std::ostringstream os;
    os << "(" << particles << "," << two_sz << "/2)";
    return os.str();
  }
};

/// Full Fock basis in occupation-bitmask order, so position == bitmask.
class FockBasis {
 public:
  explicit FockBasis(int sites) : sites_(sites) {
    if (sites < 1 || sites > kMaxSites) {
      throw ArgumentError("FockBasis: supported site counts are 1.." + std::to_string(kMaxSites));
    }
    const std::uint32_t dim = 1u << modes();
    states_.reserve(dim);
    for (std::uint32_t occ = 0; occ < dim; ++occ) {
      FockState s{occ};
      states_.push_back(s);
      sectors_[SectorKey{s.particle_count(), s.two_sz()}].push_back(occ);
    }
  }

  int sites() const { return sites_; }
  int modes() const { return 2 * sites_; }
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(states_.size()); }
  const std::vector<FockState>& states() const { return states_; }
  const std::map<SectorKey, std::vector<std::size_t>>& sectors() const { return sectors_; }

  const std::vector<std::size_t>& sector(SectorKey key) const {
    const auto it = sectors_.find(key);
    if (it == sectors_.end()) throw ArgumentError("FockBasis: no sector " + key.label());
    return it->second;
  }

  /// Positions of all states with the given particle number, ascending.
  std::vector<std::size_t> particle_sector(int particles) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (states_[i].particle_count() == particles) out.push_back(i);
    }
    return out;
  }

  /// All modes in canonical order.
  std::vector<ModeIndex> mode_list() const {
    std::vector<ModeIndex> out;
    for (int c = 0; c < modes(); ++c) out.push_back(ModeIndex::from_canonical(c));
    return out;
  }

  void require_mode(const ModeIndex& m) const {
    if (!m.valid_for(sites_)) {
      throw ArgumentError("mode " + m.label() + " is not valid for L=" + std::to_string(sites_));
    }
  }

 private:
  int sites_;
  std::vector<FockState> states_;
  std::map<SectorKey, std::vector<std::size_t>> sectors_;
};

/// Nonzero result of applying a single ladder operator to a basis state.
struct LadderResult {
  Complex amplitude;
  FockState state;
};

namespace detail {

inline int sign_of(int x) { return (x > 0) - (x < 0); }

struct Crossings {
  int count = 0;        // occupied modes of higher canonical index
  int phase_units = 0;  // sum of sgn(site(m) - site(m')) over them
};

inline Crossings count_crossings(std::uint32_t occupation, int canonical) {
  const int site = canonical / 2 + 1;
  Crossings out;
  for (std::uint32_t bits = occupation >> (canonical + 1); bits != 0; bits &= bits - 1) {
    const int other = canonical + 1 + std::countr_zero(bits);
    ++out.count;
    out.phase_units += sign_of(site - (other / 2 + 1));
  }
  return out;
}

// Amplitude of commuting a^dag at `canonical` into place on `occupation`
// (which must not contain that mode).
inline Complex crossing_amplitude(std::uint32_t occupation, int canonical, double nu) {
  const Crossings c = count_crossings(occupation, canonical);
  const double sign = (c.count % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(kI * (nu * c.phase_units));
}

}  // namespace detail

inline std::optional<LadderResult> apply_creation(FockState state, ModeIndex m, double nu, int sites) {
  if (!m.valid_for(sites)) throw ArgumentError("apply_creation: invalid mode " + m.label());
  const int c = m.canonical();
  if (state.occupied(c)) return std::nullopt;
  return LadderResult{detail::crossing_amplitude(state.occupation, c, nu),
                      FockState{state.occupation | (1u << c)}};
}

inline std::optional<LadderResult> apply_annihilation(FockState state, ModeIndex m, double nu,
                                                      int sites) {
  if (!m.valid_for(sites)) throw ArgumentError("apply_annihilation: invalid mode " + m.label());
  const int c = m.canonical();
  if (!state.occupied(c)) return std::nullopt;
  const FockState rest{state.occupation & ~(1u << c)};
  return LadderResult{std::conj(detail::crossing_amplitude(rest.occupation, c, nu)), rest};
}

enum class LadderKind { create, annihilate };

inline Matrix operator_matrix(ModeIndex m, LadderKind kind, double nu, const FockBasis& basis) {
  basis.require_mode(m);
  const Eigen::Index dim = basis.dimension();
  Matrix out = Matrix::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const FockState s = basis.states()[static_cast<std::size_t>(col)];
    const auto r = kind == LadderKind::create ? apply_creation(s, m, nu, basis.sites())
                                              : apply_annihilation(s, m, nu, basis.sites());
    if (r) out(static_cast<Eigen::Index>(r->state.occupation), col) = r->amplitude;
  }
  return out;
}

/// Applies a ladder operator directly to a state vector.
inline Vector apply_ladder(const Vector& psi, ModeIndex m, LadderKind kind, double nu,
                           const FockBasis& basis) {
  basis.require_mode(m);
  Vector out = Vector::Zero(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (psi(i) == Complex(0.0)) continue;
    const FockState s = basis.states()[static_cast<std::size_t>(i)];
    const auto r = kind == LadderKind::create ? apply_creation(s, m, nu, basis.sites())
                                              : apply_annihilation(s, m, nu, basis.sites());
    if (r) out(static_cast<Eigen::Index>(r->state.occupation)) += r->amplitude * psi(i);
  }
  return out;
}

/// Creation matrices for every mode at fixed nu; annihilators are adjoints.
class LadderOperators {
 public:
  LadderOperators(const FockBasis& basis, double nu) : nu_(nu) {
    for (int c = 0; c < basis.modes(); ++c) {
      create_.push_back(operator_matrix(ModeIndex::from_canonical(c), LadderKind::create, nu, basis));
      annihilate_.push_back(create_.back().adjoint());
    }
  }

  double nu() const { return nu_; }
  const Matrix& create(ModeIndex m) const { return create_.at(static_cast<std::size_t>(m.canonical())); }
  const Matrix& annihilate(ModeIndex m) const {
    return annihilate_.at(static_cast<std::size_t>(m.canonical()));
  }
  Matrix number(ModeIndex m) const { return create(m) * annihilate(m); }

 private:
  double nu_;
  std::vector<Matrix> create_;
  std::vector<Matrix> annihilate_;
};

/// The ket a^dag_{modes[0]} a^dag_{modes[1]} ... |0>, operators applied
/// right to left exactly as written. Repeated modes give the zero vector.
inline Vector product_state(std::span<const ModeIndex> modes, double nu, const FockBasis& basis) {
  Vector psi = Vector::Zero(basis.dimension());
  psi(0) = 1.0;
  for (auto it = modes.rbegin(); it != modes.rend(); ++it) {
    psi = apply_ladder(psi, *it, LadderKind::create, nu, basis);
  }
  return psi;
}

inline Vector product_state(std::initializer_list<ModeIndex> modes, double nu, const FockBasis& basis) {
  return product_state(std::span<const ModeIndex>(modes.begin(), modes.size()), nu, basis);
}

struct AlgebraReport {
  double max_deviation = 0.0;
  std::string worst_pair;
};

/// Checks both exchange relations as matrix identities on the full space:
///   a_j a_k + e^{i nu sgn(j-k)} a_k a_j = 0
///   a_j a^dag_k + e^{-i nu sgn(j-k)} a^dag_k a_j = delta_jk
/// with j, k running over all (site, spin) modes and sgn acting on sites.
inline AlgebraReport verify_algebra(double nu, int sites, double tol) {
  if (sites < 1 || sites > kMaxSites) throw ArgumentError("verify_algebra: L must be in 1..4");
  const FockBasis basis(sites);
  const LadderOperators ops(basis, nu);
  const Matrix identity = Matrix::Identity(basis.dimension(), basis.dimension());
  AlgebraReport report;
  for (int p = 0; p < basis.modes(); ++p) {
    for (int q = 0; q < basis.modes(); ++q) {
      const ModeIndex j = ModeIndex::from_canonical(p);
      const ModeIndex k = ModeIndex::from_canonical(q);
      const Complex phase = std::exp(kI * (nu * detail::sign_of(j.site - k.site)));
      const double d1 = max_abs(ops.annihilate(j) * ops.annihilate(k) +
                                phase * ops.annihilate(k) * ops.annihilate(j));
      Matrix mixed = ops.annihilate(j) * ops.create(k) + std::conj(phase) * ops.create(k) * ops.annihilate(j);
      if (p == q) mixed -= identity;
      const double d2 = max_abs(mixed);
      const double worst = std::max(d1, d2);
      if (worst > report.max_deviation) {
        report.max_deviation = worst;
        report.worst_pair = "(" + j.label() + "," + k.label() + ")";
      }
    }
  }
  if (report.max_deviation > tol) {
    std::ostringstream os;
    os << "exchange algebra violated for pair " << report.worst_pair << ": deviation "
       << report.max_deviation << " > " << tol;
    throw AlgebraViolation(os.str());
  }
  return report;
}

}  // namespace anyon_lab
