#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "lieconf/hopfmap.hpp"

using namespace lieconf;

namespace {

Complex horner(const Eigen::VectorXcd& coeffs, Complex t) {
  Complex acc = 0;
  for (Eigen::Index i = coeffs.size() - 1; i >= 0; --i) acc = acc * t + coeffs[i];
  return acc;
}

}  // namespace

TEST(HopfLift, Poles) {
  const auto north = hopf_lift(Vec3::UnitZ());
  EXPECT_EQ(north.u, Complex(1, 0));
  EXPECT_EQ(north.v, Complex(0, 0));
  const auto south = hopf_lift(-Vec3::UnitZ());
  EXPECT_EQ(south.u, Complex(0, 0));
  EXPECT_EQ(south.v, Complex(1, 0));
}

TEST(HopfLift, Equator) {
  const auto l = hopf_lift(Vec3::UnitX());
  EXPECT_NEAR(std::abs(l.u - 1 / std::sqrt(2.0)), 0, 1e-15);
  EXPECT_NEAR(std::abs(l.v - 1 / std::sqrt(2.0)), 0, 1e-15);
  EXPECT_NEAR(std::abs(2.0 * l.u * std::conj(l.v) - 1.0), 0, 1e-15);
  EXPECT_NEAR(std::norm(l.u) - std::norm(l.v), 0, 1e-15);
}

TEST(HopfLift, RoundTripNearPoles) {
  Rng rng(9);
  for (double z : {1.0, 1 - 1e-15, 1e-300, 0.0, -1e-300, -1 + 1e-15, -1.0}) {
    const Vec3 w = Vec3(std::sqrt(std::max(0.0, 1 - z * z)), 0, z).normalized();
    const auto l = hopf_lift(w);
    EXPECT_LT((hopf_map(l) - w).norm(), 1e-15);
  }
  for (int i = 0; i < 1000; ++i) {
    const Vec3 w = random_unit_vector(rng);
    const auto l = hopf_lift(w);
    EXPECT_LT((hopf_map(l) - w).norm(), 1e-12);
    EXPECT_NEAR(std::norm(l.u) + std::norm(l.v), 1.0, 1e-12);
  }
  EXPECT_THROW(hopf_lift(Vec3(1, 1, 0)), InvalidInput);
}

TEST(LiftTable, AntipodesAndSize) {
  const auto rs = build_root_system("A3");
  Rng rng(4);
  const auto x = sample_configuration(rs, rng);
  const auto table = build_lift_table(rs, x);
  EXPECT_EQ(table.size(), 12);
  for (int j = 0; j < rs.num_roots(); ++j)
    EXPECT_EQ(table.directions[rs.opposite(j)], (-table.directions[j]).eval());
  EXPECT_THROW(build_lift_table(rs, Configuration::from_coords(rs, Mat::Zero(3, 3))), InvalidInput);
}

TEST(LiftTable, CollinearPoles) {
  const auto rs = build_root_system("A3");
  const auto table = build_lift_table(rs, canonical_collinear(rs));
  for (int j = 0; j < rs.num_roots(); ++j) {
    const auto& l = table.lifts[j];
    if (rs.is_positive(j)) {
      EXPECT_EQ(l.u, Complex(1, 0));
      EXPECT_EQ(l.v, Complex(0, 0));
    } else {
      EXPECT_EQ(l.u, Complex(0, 0));
      EXPECT_EQ(l.v, Complex(1, 0));
    }
  }
}

TEST(AssembleF, A1Fundamental) {
  const auto rs = build_root_system("A1");
  const auto wd = parse_weight(rs, "fund:1");
  const auto orbit = weyl_orbit(rs, wd);
  ASSERT_EQ(wd.m, 1);
  ASSERT_EQ(orbit.size(), 2);
  const auto F = assemble_F(rs, wd, orbit, canonical_collinear(rs));
  ASSERT_EQ(F.entries.rows(), 2);
  ASSERT_EQ(F.entries.cols(), 2);
  // Up to phase: column 0 is t, column 1 is -1.
  EXPECT_NEAR(std::abs(F.entries(0, 0)), 0, 1e-15);
  EXPECT_NEAR(std::abs(F.entries(1, 0)), 1, 1e-15);
  EXPECT_NEAR(std::abs(F.entries(0, 1)), 1, 1e-15);
  EXPECT_NEAR(std::abs(F.entries(1, 1)), 0, 1e-15);
  EXPECT_EQ(Eigen::FullPivLU<CMat>(F.entries).rank(), 2);
}

TEST(AssembleF, A3FirstFundamentalCollinearMonomials) {
  const auto rs = build_root_system("A3");
  const auto wd = parse_weight(rs, "[1,0,0,0]");
  const auto orbit = weyl_orbit(rs, wd);
  const auto F = assemble_F(rs, wd, orbit, canonical_collinear(rs));
  std::set<int> exponents;
  for (int k = 0; k < F.n; ++k) {
    int nonzero = 0;
    for (int i = 0; i <= F.m; ++i) {
      const double a = std::abs(F.entries(i, k));
      if (a > 1e-14) {
        EXPECT_NEAR(a, 1.0, 1e-14);
        exponents.insert(i);
        ++nonzero;
      }
    }
    EXPECT_EQ(nonzero, 1);
  }
  EXPECT_EQ(exponents, (std::set<int>{0, 1, 2, 3}));
}

TEST(AssembleF, ShapeContract) {
  for (const auto& [t, w] : std::vector<std::pair<const char*, const char*>>{
           {"A3", "[6,4,2,0]"}, {"B2", "fund:1,1"}, {"G2", "fund:0,1"}, {"C3", "fund:1,0,0"}}) {
    SCOPED_TRACE(std::string(t) + w);
    const auto rs = build_root_system(t);
    const auto wd = parse_weight(rs, w);
    const auto orbit = weyl_orbit(rs, wd);
    Rng rng(8);
    const auto F = assemble_F(rs, wd, orbit, sample_configuration(rs, rng));
    EXPECT_EQ(F.entries.rows(), wd.m + 1);
    EXPECT_EQ(F.entries.cols(), wd.n);
    for (int k = 0; k < F.n; ++k) EXPECT_GT(F.entries.col(k).norm(), 0.0);
  }
}

// Column k evaluated at random t against the direct product of linear factors.
TEST(AssembleF, MatchesPointwiseProduct) {
  const auto rs = build_root_system("A3");
  const auto wd = parse_weight(rs, "[3,1,1,0]");
  const auto orbit = weyl_orbit(rs, wd);
  Rng rng(12);
  const auto x = sample_configuration(rs, rng);
  const auto lifts = build_lift_table(rs, x);
  const auto F = assemble_F(rs, wd, orbit, lifts);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 5; ++trial) {
    const Complex t(normal(rng), normal(rng));
    for (int k = 0; k < F.n; ++k) {
      Complex direct = 1.0;
      for (int j = 0; j < rs.num_positive(); ++j) {
        const auto& l = lifts.lifts[orbit.root_image[k][j]];
        direct *= std::pow(l.u * t - l.v, wd.m_alpha[j]);
      }
      const Complex via_coeffs = horner(F.entries.col(k), t);
      EXPECT_LT(std::abs(via_coeffs - direct), 1e-10 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST(AssembleF, RejectsMismatchedLifts) {
  const auto rs = build_root_system("A3");
  const auto wd = parse_weight(rs, "[1,0,0,0]");
  const auto orbit = weyl_orbit(rs, wd);
  LiftTable empty;
  EXPECT_THROW(assemble_F(rs, wd, orbit, empty), InvalidInput);
}
