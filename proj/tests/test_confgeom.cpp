#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "lieconf/confgeom.hpp"

using namespace lieconf;

namespace {

std::multiset<long long> pairing_norms(const RootSystem& rs, const Configuration& x) {
  std::multiset<long long> out;
  for (const auto& a : rs.positive_roots) out.insert(std::llround(pair_root(x, a).norm() * 1e9));
  return out;
}

}  // namespace

TEST(PairRoot, RhoAlongZ) {
  const auto rs = build_root_system("A3");
  const auto x = canonical_collinear(rs);
  const Vec rho = rs.rho();
  for (const auto& a : rs.simple_roots) {
    const Vec3 p = pair_root(x, a);
    EXPECT_NEAR(p[0], 0, 1e-15);
    EXPECT_NEAR(p[1], 0, 1e-15);
    EXPECT_NEAR(p[2], a.dot(rho), 1e-14);
    EXPECT_GT(p[2], 0);
  }
}

TEST(PairRoot, LinearAndZero) {
  const auto rs = build_root_system("B3");
  Rng rng(3);
  const auto x = sample_configuration(rs, rng);
  for (const auto& a : rs.all_roots) EXPECT_LT((pair_root(x, -a) + pair_root(x, a)).norm(), 1e-15);
  const auto zero = Configuration::from_coords(rs, Mat::Zero(3, 3));
  for (const auto& a : rs.all_roots) EXPECT_EQ(pair_root(zero, a).norm(), 0.0);
}

TEST(Regularity, Margins) {
  const auto rs = build_root_system("A3");
  EXPECT_EQ(regularity_margin(rs, Configuration::from_coords(rs, Mat::Zero(3, 3))).margin, 0.0);

  const auto rep = regularity_margin(rs, canonical_collinear(rs));
  // (alpha, rho) over the six positive roots of A3 is {1,1,1,2,2,3}.
  EXPECT_NEAR(rep.margin, 1.0, 1e-14);
  EXPECT_TRUE(rep.regular());
  EXPECT_TRUE(rs.positive_roots[rep.argmin_root].dot(rs.rho()) < 1.0 + 1e-12);
}

TEST(Sampling, DeterministicAndRegular) {
  const auto rs = build_root_system("A3");
  Rng a(42), b(42), c(43);
  const auto xa = sample_configuration(rs, a);
  const auto xb = sample_configuration(rs, b);
  const auto xc = sample_configuration(rs, c);
  EXPECT_EQ(xa.coords(), xb.coords());
  EXPECT_NE(xa.coords().norm(), xc.coords().norm());
  EXPECT_GT(regularity_margin(rs, xa).margin, 1e-12);
  EXPECT_EQ(xa.coords().rows(), 3);
  EXPECT_EQ(xa.coords().cols(), 3);
}

TEST(Sampling, Rejections) {
  const auto rs = build_root_system("A2");
  Rng rng(1);
  EXPECT_THROW(sample_configuration(rs, rng, 0.0), InvalidInput);
  EXPECT_THROW(sample_configuration(rs, rng, 1.0, 1e300), InvalidInput);
}

TEST(Configuration, ShapeChecks) {
  const auto rs = build_root_system("A3");
  EXPECT_THROW(Configuration::from_coords(rs, Mat::Zero(2, 3)), InvalidInput);
  EXPECT_THROW(Configuration::from_coords(rs, Mat::Zero(3, 2)), InvalidInput);
  Mat bad = Mat::Zero(3, 3);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Configuration::from_coords(rs, bad), InvalidInput);
  // Ambient input is projected onto span(R): translation of all points is dropped.
  Mat pts = Mat::Random(4, 3);
  Mat shifted = pts.rowwise() + Eigen::RowVector3d(5, -1, 2);
  const auto x = Configuration::from_ambient(rs, pts);
  const auto y = Configuration::from_ambient(rs, shifted);
  EXPECT_LT((x.coords() - y.coords()).norm(), 1e-12);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(x.ambient().col(c).sum(), 0.0, 1e-12);
}

TEST(Collinear, Construction) {
  const auto rs = build_root_system("A3");
  Rng rng(5);
  const Vec3 u = random_unit_vector(rng);
  const auto x = collinear_configuration(rs, rs.rho(), u);
  for (const auto& a : rs.all_roots) {
    const Vec3 p = pair_root(x, a);
    EXPECT_LT(p.cross(u).norm(), 1e-13);
  }
  EXPECT_GT(regularity_margin(rs, x).margin, 0);

  Vec wall(4);
  wall << 1, 1, 0, -2;  // orthogonal to e1 - e2
  EXPECT_THROW(collinear_configuration(rs, wall, Vec3::UnitZ()), InvalidInput);
  EXPECT_THROW(collinear_configuration(rs, rs.rho(), Vec3(1, 1, 0)), InvalidInput);
}

TEST(GroupAction, RotationScalingWeyl) {
  const auto rs = build_root_system("A3");
  Rng rng(11);
  const auto x = sample_configuration(rs, rng);
  const double margin = regularity_margin(rs, x).margin;

  const Mat3 R = random_rotation(rng);
  const auto rx = group_action(rs, x, Rotation{R});
  EXPECT_NEAR(regularity_margin(rs, rx).margin, margin, 1e-12);
  for (const auto& a : rs.all_roots) EXPECT_LT((pair_root(rx, a) - R * pair_root(x, a)).norm(), 1e-12);

  const auto sx = group_action(rs, x, Scaling{2.0});
  EXPECT_NEAR(regularity_margin(rs, sx).margin, 2 * margin, 1e-12);

  for (const auto& s : rs.simple_roots) {
    const Mat w = reflection(s);
    const auto wx = group_action(rs, x, WeylElement{w});
    EXPECT_EQ(pairing_norms(rs, wx), pairing_norms(rs, x));
    // pair_root(w x, alpha) = pair_root(x, w^-1 alpha); w is an involution.
    for (const auto& a : rs.all_roots) EXPECT_LT((pair_root(wx, a) - pair_root(x, w * a)).norm(), 1e-12);
  }

  Mat3 reflect_z = Mat3::Identity();
  reflect_z(2, 2) = -1;
  EXPECT_THROW(group_action(rs, x, Rotation{reflect_z}), InvalidInput);
  EXPECT_THROW(group_action(rs, x, Rotation{2 * Mat3::Identity()}), InvalidInput);
  EXPECT_THROW(group_action(rs, x, Scaling{-1.0}), InvalidInput);
}

TEST(GroupAction, NonSimpleWeylElement) {
  const auto rs = build_root_system("G2");
  Rng rng(2);
  const auto x = sample_configuration(rs, rng);
  const Mat w = reflection(rs.simple_roots[0]) * reflection(rs.simple_roots[1]);
  const auto wx = group_action(rs, x, WeylElement{w});
  EXPECT_EQ(pairing_norms(rs, wx), pairing_norms(rs, x));
  for (const auto& a : rs.all_roots)
    EXPECT_LT((pair_root(wx, a) - pair_root(x, w.transpose() * a)).norm(), 1e-12);
}
