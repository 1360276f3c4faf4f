#include <gtest/gtest.h>

#include "anyon_lab/thermal.hpp"
#include "support/oracles.hpp"

using namespace anyon_lab;

namespace {

const std::vector<double> kNuGrid{0.0, kPi / 4, kPi / 2, 3 * kPi / 4, kPi, 1.2345};

ThermalParams thermal_at(double nu, double beta = 1.0) {
  ThermalParams tp;
  tp.beta = beta;
  tp.model.statistics = nu;
  return tp;
}

oracle::Params to_oracle(const ModelParams& p) {
  return {p.hopping, p.onsite, p.density_density, p.exchange, p.chemical_potential, p.statistics};
}

std::vector<PairIndex> all_pair_indices() {
  std::vector<PairIndex> out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        for (int d = 0; d < 4; ++d) {
          out.push_back({{ModeIndex::from_canonical(a), ModeIndex::from_canonical(b), ModeIndex::from_canonical(c),
                          ModeIndex::from_canonical(d)}});
        }
      }
    }
  }
  return out;
}

}  // namespace

TEST(Thermal, RejectsBadTemperature) {
  for (double beta : {0.0, -1.0, std::nan(""), std::numeric_limits<double>::infinity()}) {
    EXPECT_THROW(partition_function(thermal_at(0.0, beta)), ArgumentError);
    EXPECT_THROW(partition_function_closed(thermal_at(0.0, beta)), ArgumentError);
  }
}

TEST(PartitionFunction, ClosedFormMatchesTheTrace) {
  for (double nu : kNuGrid) {
    for (double beta : {0.3, 1.0, 2.5}) {
      const auto tp = thermal_at(nu, beta);
      const double trace = partition_function(tp);
      EXPECT_NEAR(partition_function_closed(tp) / trace, 1.0, 1e-12) << nu << " " << beta;
    }
  }
}

TEST(PartitionFunction, HighTemperatureCountsStates) {
  EXPECT_NEAR(partition_function(thermal_at(0.7, 1e-12)), 16.0, 1e-9);
  EXPECT_NEAR(partition_function_closed(thermal_at(0.7, 1e-12)), 16.0, 1e-9);
}

TEST(PartitionFunction, LargeBetaDoesNotOverflow) {
  const auto tp = thermal_at(0.5, 800.0);
  const FockBasis basis(2);
  const ThermalEnsemble ens(tp, basis);
  EXPECT_TRUE(std::isfinite(ens.log_partition_function()));
  const Matrix g = one_particle_density(ens);
  EXPECT_TRUE(g.allFinite());
}

TEST(FermionLimit, MatchesAJordanWignerImplementation) {
  const auto tp = thermal_at(0.0);
  const oracle::FermionThermal ref(to_oracle(tp.model), tp.beta);
  EXPECT_NEAR(partition_function(tp), ref.z, 1e-10 * ref.z);
  EXPECT_NEAR(partition_function_closed(tp), ref.z, 1e-10 * ref.z);
  std::vector<oracle::Matrix> c;
  for (int m = 0; m < 4; ++m) c.push_back(oracle::jw_annihilator(m, 4));
  const Matrix g1 = one_particle_density(tp), g1c = one_particle_density_closed(tp);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Complex expected = ref.average(c[a].adjoint() * c[b]);
      EXPECT_NEAR(std::abs(g1(a, b) - expected), 0.0, 1e-10);
      EXPECT_NEAR(std::abs(g1c(a, b) - expected), 0.0, 1e-10);
    }
  }
  const FockBasis basis(2);
  const ThermalEnsemble ens(tp, basis);
  for (const auto& idx : all_pair_indices()) {
    const auto& m = idx.modes;
    const Complex expected = ref.average(c[m[0].canonical()].adjoint() * c[m[1].canonical()].adjoint() *
                                         c[m[2].canonical()] * c[m[3].canonical()]);
    EXPECT_NEAR(std::abs(pair_correlation(ens, idx) - expected), 0.0, 1e-10) << idx.label();
    if (const auto closed = pair_correlation_closed(tp, idx)) {
      EXPECT_NEAR(std::abs(*closed - expected), 0.0, 1e-10) << idx.label();
    }
  }
}

TEST(OneParticleDensity, ClosedFormMatchesTheTrace) {
  for (double nu : kNuGrid) {
    const auto tp = thermal_at(nu);
    EXPECT_LT(max_abs(one_particle_density_closed(tp) - one_particle_density(tp)), 1e-10) << nu;
  }
}

TEST(OneParticleDensity, StructuralProperties) {
  const auto tp = thermal_at(1.1);
  const Matrix g = one_particle_density(tp);
  EXPECT_LT(hermiticity_defect(g), 1e-12);
  // spin-diagonal and spin-symmetric
  EXPECT_LT(std::abs(g(up(1).canonical(), down(1).canonical())), 1e-12);
  EXPECT_LT(std::abs(g(up(1).canonical(), down(2).canonical())), 1e-12);
  EXPECT_NEAR(std::abs(g(up(1).canonical(), up(2).canonical()) - g(down(1).canonical(), down(2).canonical())), 0.0,
              1e-12);
  const FockBasis basis(2);
  const ThermalEnsemble ens(tp, basis);
  EXPECT_NEAR(std::abs(g.trace() - ens.expectation(total_number_matrix(basis))), 0.0, 1e-12);
  for (int a = 0; a < 4; ++a) {
    EXPECT_GE(g(a, a).real(), 0.0);
    EXPECT_LE(g(a, a).real(), 1.0);
  }
}

TEST(OneParticleDensity, LargeChemicalPotentialFillsTheLattice) {
  auto tp = thermal_at(0.9, 2.0);
  tp.model.chemical_potential = 50.0;
  EXPECT_LT(max_abs(one_particle_density(tp) - Matrix::Identity(4, 4)), 1e-12);
  EXPECT_LT(max_abs(one_particle_density_closed(tp) - Matrix::Identity(4, 4)), 1e-12);
}

TEST(PairCorrelation, ClosedTableMatchesTheTrace) {
  for (double nu : kNuGrid) {
    const auto tp = thermal_at(nu);
    const FockBasis basis(2);
    const ThermalEnsemble ens(tp, basis);
    const auto table = pair_correlation_closed_table(tp);
    EXPECT_EQ(table.size(), 30u);
    for (const auto& [idx, value] : table) {
      EXPECT_NEAR(std::abs(value - pair_correlation(ens, idx)), 0.0, 1e-10) << idx.label() << " nu=" << nu;
    }
    for (const auto& idx : distinct_pair_indices()) EXPECT_TRUE(table.count(idx)) << idx.label();
  }
}

TEST(PairCorrelation, SpinSelectionRule) {
  const auto tp = thermal_at(2.0);
  const FockBasis basis(2);
  const ThermalEnsemble ens(tp, basis);
  int zeros = 0;
  for (const auto& idx : all_pair_indices()) {
    if (idx.conserves_spin()) continue;
    ++zeros;
    EXPECT_LT(std::abs(pair_correlation(ens, idx)), 1e-12) << idx.label();
    EXPECT_EQ(*pair_correlation_closed(tp, idx), Complex(0.0));
  }
  EXPECT_GT(zeros, 0);
}

TEST(PairCorrelation, PauliZerosAndAdjoints) {
  const auto tp = thermal_at(0.8);
  const FockBasis basis(2);
  const ThermalEnsemble ens(tp, basis);
  for (const auto& idx : all_pair_indices()) {
    const auto& m = idx.modes;
    if (m[0] == m[1] || m[2] == m[3]) {
      EXPECT_LT(std::abs(pair_correlation(ens, idx)), 1e-14);
    }
    EXPECT_NEAR(std::abs(pair_correlation(ens, idx.adjoint()) - std::conj(pair_correlation(ens, idx))), 0.0, 1e-12);
  }
}

TEST(PairCorrelation, ParsingAndUnknownEntries) {
  const auto idx = parse_pair_index("1u,2u;1u,2u");
  EXPECT_EQ(idx, distinct_pair_indices().front());
  EXPECT_EQ(parse_pair_index("1u2u1u2u"), idx);
  EXPECT_EQ(idx.label(), "1u,2u;1u,2u");
  EXPECT_THROW(parse_pair_index("1u,2u;1u"), ArgumentError);
  EXPECT_THROW(parse_pair_index("1u,2u;1u,2x"), ArgumentError);
  const auto tp = thermal_at(0.3);
  EXPECT_FALSE(pair_correlation_closed(tp, parse_pair_index("2u,1u;1u,2u")).has_value());
  EXPECT_THROW(pair_correlation_closed(tp, parse_pair_index("1u,2u;1u,3u")), ArgumentError);
}

TEST(Momentum, RealNonNegativeAndSpinSymmetric) {
  std::vector<double> grid;
  for (int i = 0; i <= 50; ++i) grid.push_back(-kPi + 2 * kPi * i / 50);
  for (double nu : {0.0, kPi / 4, kPi / 2, 3 * kPi / 4, kPi}) {
    auto tp = thermal_at(nu);
    tp.model.chemical_potential = 10.0;
    const Matrix g1 = one_particle_density(tp);
    const auto upk = quasimomentum_distribution(g1, Spin::up, 2, grid);
    const auto dnk = quasimomentum_distribution(g1, Spin::down, 2, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      EXPECT_GE(upk[i].occupation, -1e-12);
      EXPECT_LT(std::abs(upk[i].imaginary), 1e-12);
      EXPECT_NEAR(upk[i].occupation, dnk[i].occupation, 1e-12);
    }
    const auto discrete = quasimomentum_distribution(g1, Spin::up, 2, discrete_momenta(2));
    const double diagonal = (g1(up(1).canonical(), up(1).canonical()) + g1(up(2).canonical(), up(2).canonical())).real();
    EXPECT_NEAR(discrete[0].occupation + discrete[1].occupation, 2 * diagonal, 1e-10);
  }
}

TEST(Momentum, ShapeChecksAndGrid) {
  EXPECT_THROW(quasimomentum_distribution(Matrix::Zero(3, 3), Spin::up, 2, {0.0}), ArgumentError);
  const auto k = discrete_momenta(2);
  ASSERT_EQ(k.size(), 2u);
  EXPECT_EQ(k[0], 0.0);
  EXPECT_NEAR(k[1], kPi, 1e-15);
}
