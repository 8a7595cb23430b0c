#include <gtest/gtest.h>

#include <numbers>

#include "qcrit/ed.hpp"
#include "qcrit/free_fermion.hpp"
#include "qcrit/xxz.hpp"

namespace xxz = qcrit::xxz;
using std::numbers::pi;

namespace {

const double kHeisenberg = (1.0 - 4.0 * std::numbers::ln2) / 3.0;

}  // namespace

TEST(Xxz, FerromagneticPhaseIsExact) {
  for (double d : {-1.0, -2.0, -10.0}) {
    const auto c = xxz::correlators({d});
    EXPECT_EQ(c.zz, 1.0);
    EXPECT_EQ(c.xx, 0.0);
  }
  const auto s = xxz::reduced_density(xxz::XxzSpec{-2.0});
  EXPECT_EQ(s.u11, 0.5);
  EXPECT_EQ(s.u44, 0.5);
  EXPECT_EQ(s.u22, 0.0);
  EXPECT_EQ(s.u23, 0.0);
}

TEST(Xxz, FreeFermionPoint) {
  const auto c = xxz::correlators({0.0});
  EXPECT_NEAR(c.xx, -2.0 / pi, 1e-8);
  EXPECT_NEAR(c.zz, -4.0 / (pi * pi), 1e-6);
  const auto s = xxz::reduced_density(xxz::XxzSpec{0.0});
  EXPECT_NEAR(s.u11, 0.1487, 1e-4);
  EXPECT_NEAR(s.u22, 0.3513, 1e-4);
  EXPECT_NEAR(s.u23, -0.3183, 1e-4);
  EXPECT_EQ(s.u14, 0.0);
}

// Combinatorial point: zz = -1/2, xx = -5/8 exactly.
TEST(Xxz, CombinatorialPoint) {
  const auto c = xxz::correlators({0.5});
  EXPECT_NEAR(c.zz, -0.5, 1e-9);
  EXPECT_NEAR(c.xx, -0.625, 1e-9);
}

TEST(Xxz, HeisenbergLimitFromBothSides) {
  for (double d : {1.0 - 1e-3, 1.0 + 1e-3}) {
    const auto c = xxz::correlators({d});
    EXPECT_NEAR(c.zz, kHeisenberg, 2e-3) << d;
    EXPECT_NEAR(c.xx, kHeisenberg, 2e-3) << d;
  }
  const auto lo = xxz::correlators({1.0 - 1e-3});
  const auto hi = xxz::correlators({1.0 + 1e-3});
  EXPECT_NEAR(lo.zz, hi.zz, 1e-3);
  EXPECT_NEAR(lo.xx, hi.xx, 1e-3);
}

TEST(Xxz, JustOutsideTheExclusionWindows) {
  for (double d : {1.0 - 1.1e-6, 1.0 + 1.1e-6}) {
    const auto c = xxz::correlators({d});
    EXPECT_NEAR(c.zz, kHeisenberg, 1e-5) << d;
    EXPECT_NEAR(c.xx, kHeisenberg, 1e-5) << d;
  }
  EXPECT_NO_THROW(xxz::correlators({-1.0 + 1.1e-6}));
}

TEST(Xxz, RejectsCriticalWindowsAndBadSpecs) {
  EXPECT_THROW(xxz::correlators({1.0}), qcrit::invalid_spec);
  EXPECT_THROW(xxz::correlators({1.0 + 5e-7}), qcrit::invalid_spec);
  EXPECT_THROW(xxz::correlators({1.0 - 5e-7}), qcrit::invalid_spec);
  EXPECT_THROW(xxz::correlators({-1.0 + 5e-7}), qcrit::invalid_spec);
  EXPECT_THROW(xxz::correlators({std::nan("")}), qcrit::invalid_spec);
  EXPECT_THROW(xxz::correlators({0.3, 0.0}), qcrit::invalid_spec);
  EXPECT_THROW(xxz::correlators({0.3, 1e-10, -1.0}), qcrit::invalid_spec);
}

TEST(Xxz, StatesArePositiveOnGrid) {
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back(-3.0 + 2.0 * i / 99.0);
  for (int i = 0; i < 200; ++i) grid.push_back(-0.999 + 1.998 * i / 199.0);
  for (int i = 0; i < 200; ++i) grid.push_back(1.001 + 8.999 * i / 199.0);
  for (double d : grid) {
    const auto c = xxz::correlators({d});
    EXPECT_LE(std::abs(c.zz), 1.0) << d;
    EXPECT_LE(std::abs(c.xx), 1.0) << d;
    EXPECT_TRUE(qcrit::is_valid(xxz::reduced_density(c))) << d;
  }
}

TEST(Xxz, HalvingToleranceIsStable) {
  for (double d : {-0.9, -0.3, 0.4, 0.95, 1.05, 2.0, 6.0}) {
    const auto a = xxz::correlators({d, 1e-10});
    const auto b = xxz::correlators({d, 5e-11});
    const double bound = std::max(a.error_estimate, 1e-13);
    EXPECT_LE(std::abs(a.zz - b.zz), bound) << d;
    EXPECT_LE(std::abs(a.xx - b.xx), bound) << d;
    EXPECT_LE(a.error_estimate, 1e-10) << d;
  }
}

TEST(Xxz, DeepNeelTrend) {
  const auto c3 = xxz::correlators({3.0});
  const auto c5 = xxz::correlators({5.0});
  const auto c10 = xxz::correlators({10.0});
  EXPECT_LT(c5.zz, c3.zz);
  EXPECT_LT(c10.zz, c5.zz);
  EXPECT_GT(c10.zz, -1.0);
  EXPECT_LT(c5.xx, 0.0);
  EXPECT_GT(c5.xx, c3.xx);
  EXPECT_GT(c10.xx, c5.xx);
  const auto s = xxz::reduced_density(xxz::XxzSpec{5.0});
  EXPECT_LT(s.u23, 0.0);
  EXPECT_GT(s.u23, -0.1);
  EXPECT_GT(s.u22, 0.45);
}

// The chain conventions differ by a sublattice rotation, so compare |zz|.
TEST(Xxz, MatchesFreeFermionChainAtFreePoint) {
  const auto ff = qcrit::chain::correlators(qcrit::chain::xy(1e-9, 0.0, 4001));
  EXPECT_NEAR(std::abs(xxz::correlators({0.0}).zz), std::abs(ff.zz), 2e-3);
}

// Finite-size exact diagonalisation approaches the infinite chain.
TEST(Xxz, ExactDiagonalisationConverges) {
  for (double d : {0.5, 2.0}) {
    const auto inf = xxz::correlators({d});
    double prev = 1.0;
    for (int n : {8, 12, 14}) {
      const auto s = qcrit::ed::reduced_density(qcrit::ed::ground_space(qcrit::ed::xxz_spec(d, n)), 0, 1);
      const double zz = s.u11 + s.u44 - s.u22 - s.u33;
      const double err = std::abs(zz - inf.zz);
      EXPECT_LT(err, prev) << "delta=" << d << " N=" << n;
      prev = err;
    }
    EXPECT_LT(prev, 2e-2) << d;
  }
}
