#pragma once

// Hopf lifts of root directions and the coefficient matrix of the n-tuple
// of polynomials p_k(t) = prod_{alpha > 0} p_{g_k alpha}(t)^{m_alpha}.

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lieconf/confgeom.hpp"
#include "lieconf/errors.hpp"
#include "lieconf/liealg.hpp"

namespace lieconf {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;

/// A point (u, v) of S^3 in C^2.
struct HopfLift {
  Complex u;
  Complex v;
};

/// h(u, v) = (2 u conj(v), |u|^2 - |v|^2), returned as a vector of R^3.
inline Vec3 hopf_map(const HopfLift& lift) {
  const Complex zeta = 2.0 * lift.u * std::conj(lift.v);
  return {zeta.real(), zeta.imag(), std::norm(lift.u) - std::norm(lift.v)};
}

/// Deterministic preimage of a unit vector under the Hopf map. The branch
/// switches at the equator so that both denominators stay >= sqrt(2).
inline HopfLift hopf_lift(const Vec3& w) {
  if (std::abs(w.norm() - 1.0) > 1e-9) throw InvalidInput("hopf_lift needs a unit vector");
  const Complex zeta(w[0], w[1]);
  const double z = w[2];
  if (z >= 0) {
    const double u = std::sqrt((1.0 + z) / 2.0);
    return {Complex(u, 0.0), std::conj(zeta) / std::sqrt(2.0 * (1.0 + z))};
  }
  const double v = std::sqrt((1.0 - z) / 2.0);
  return {zeta / std::sqrt(2.0 * (1.0 - z)), Complex(v, 0.0)};
}

/// One Hopf lift per root, indexed like RootSystem::all_roots.
struct LiftTable {
  std::vector<Vec3> directions;
  std::vector<HopfLift> lifts;

  int size() const { return static_cast<int>(lifts.size()); }
};

inline LiftTable build_lift_table(const RootSystem& rs, const Configuration& x) {
  const auto report = regularity_margin(rs, x);
  if (!(report.margin > 0)) {
    std::ostringstream os;
    os << "configuration is not regular: it annihilates positive root #" << report.argmin_root;
    throw InvalidInput(os.str());
  }
  LiftTable table;
  table.directions.reserve(rs.all_roots.size());
  table.lifts.reserve(rs.all_roots.size());
  for (const auto& alpha : rs.all_roots) {
    Vec3 d = pair_root(x, alpha);
    d /= d.norm();
    table.directions.push_back(d);
    table.lifts.push_back(hopf_lift(d));
  }
  return table;
}

/// (m+1) x n coefficient matrix; entry (i, k) is the coefficient of t^i in p_k.
struct ConfMatrix {
  CMat entries;
  int m = 0;
  int n = 0;
  std::string provenance;
};

namespace detail {

/// poly <- poly * (u t - v), in place. `degree` is the current degree.
inline void multiply_linear(std::vector<Complex>& poly, int degree, const HopfLift& lift) {
  poly[degree + 1] = lift.u * poly[degree];
  for (int i = degree; i >= 1; --i) poly[i] = lift.u * poly[i - 1] - lift.v * poly[i];
  poly[0] = -lift.v * poly[0];
}

}  // namespace detail

/// Expands each p_k by repeated convolution with the factors (-v, u).
/// The formal degree is always m, even when leading coefficients vanish.
inline ConfMatrix assemble_F(const RootSystem& rs, const WeightData& wd, const WeylOrbit& orbit,
                             const LiftTable& lifts) {
  if (lifts.size() != rs.num_roots()) throw InvalidInput("lift table does not match root system");
  ConfMatrix F;
  F.m = wd.m;
  F.n = orbit.size();
  F.entries = CMat::Zero(F.m + 1, F.n);
  std::vector<Complex> poly(static_cast<std::size_t>(F.m) + 1);
  for (int k = 0; k < F.n; ++k) {
    std::fill(poly.begin(), poly.end(), Complex{});
    poly[0] = 1.0;
    int degree = 0;
    for (int j = 0; j < rs.num_positive(); ++j) {
      const HopfLift& lift = lifts.lifts[orbit.root_image[k][j]];
      for (int e = 0; e < wd.m_alpha[j]; ++e) detail::multiply_linear(poly, degree++, lift);
    }
    for (int i = 0; i <= F.m; ++i) F.entries(i, k) = poly[i];
  }
  return F;
}

/// Convenience: lifts + assembly at configuration `x`.
inline ConfMatrix assemble_F(const RootSystem& rs, const WeightData& wd, const WeylOrbit& orbit,
                             const Configuration& x) {
  return assemble_F(rs, wd, orbit, build_lift_table(rs, x));
}

}  // namespace lieconf
