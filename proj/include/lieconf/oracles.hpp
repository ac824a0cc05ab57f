#pragma once

// Closed forms and classical constructions used to check the numerical
// pipeline. Nothing here calls assemble_F or the SVD path.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "lieconf/confgeom.hpp"
#include "lieconf/errors.hpp"
#include "lieconf/liealg.hpp"
#include "lieconf/spectral.hpp"

namespace lieconf::oracles {

struct ExponentMultiset {
  std::vector<int> exponents;         ///< c_k, one per coset
  std::map<int, int> multiplicities;  ///< c -> mu_c

  int support_size() const { return static_cast<int>(multiplicities.size()); }
};

inline ExponentMultiset exponent_multiset(const RootSystem& rs, const WeightData& wd,
                                          const WeylOrbit& orbit) {
  ExponentMultiset out;
  out.exponents = collinear_exponents(rs, wd, orbit);
  for (int c : out.exponents) ++out.multiplicities[c];
  return out;
}

/// Delta at a collinear configuration. There p_k = +-t^{c_k}, so sqrt(g) F has
/// orthogonal column groups and singular values sqrt(mu_c / binom(m, c)).
inline double collinear_delta_closed_form(const RootSystem& rs, const WeightData& wd,
                                          const WeylOrbit& orbit) {
  const auto mu = exponent_multiset(rs, wd, orbit);
  std::vector<double> sigma;
  for (const auto& [c, count] : mu.multiplicities)
    sigma.push_back(std::sqrt(count / binomial(wd.m, c)));
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  double product = 1.0;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    product *= std::sqrt(binomial(wd.m, static_cast<int>(i))) * sigma[i];
  return product;
}

/// Which difference vector feeds the lift of the pair (a, b).
enum class PairDirection { toward_other, away_from_other };

namespace detail {

/// Hopf lift from spherical angles: (cos(theta/2), sin(theta/2) e^{-i phi}).
inline std::pair<std::complex<double>, std::complex<double>> spherical_lift(const Vec3& d) {
  const Vec3 w = d.normalized();
  const double theta = std::acos(std::clamp(w[2], -1.0, 1.0));
  const double phi = std::atan2(w[1], w[0]);
  return {std::cos(theta / 2), std::sin(theta / 2) * std::polar(1.0, -phi)};
}

}  // namespace detail

/// Classical construction on n distinct points: column a holds the
/// coefficients of prod_{b != a} (u_ab t - v_ab). Returns the determinant of
/// the n x n coefficient matrix (defined up to a phase).
inline std::complex<double> atiyah_sutcliffe_determinant(
    const std::vector<Vec3>& points, PairDirection direction = PairDirection::toward_other) {
  const int n = static_cast<int>(points.size());
  if (n < 2) throw InvalidInput("need at least two points");
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if ((points[a] - points[b]).norm() == 0.0) throw InvalidInput("points must be distinct");

  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    std::vector<std::complex<double>> coeffs{1.0};
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      const Vec3 diff =
          direction == PairDirection::toward_other ? points[b] - points[a] : points[a] - points[b];
      const auto [u, v] = detail::spherical_lift(diff);
      std::vector<std::complex<double>> next(coeffs.size() + 1, 0.0);
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        next[i] -= v * coeffs[i];
        next[i + 1] += u * coeffs[i];
      }
      coeffs = std::move(next);
    }
    for (int i = 0; i < n; ++i) M(i, a) = coeffs[i];
  }
  return M.partialPivLu().determinant();
}

/// The sl(n) specialization: n points become the traceless n x 3 ambient
/// matrix of a configuration for A_{n-1}.
inline Configuration points_to_configuration(const RootSystem& rs, const std::vector<Vec3>& points) {
  if (rs.type != 'A' || static_cast<int>(points.size()) != rs.ambient_dim)
    throw InvalidInput("points_to_configuration needs A_{n-1} and n points");
  Mat ambient(rs.ambient_dim, 3);
  for (int a = 0; a < rs.ambient_dim; ++a) ambient.row(a) = points[a].transpose();
  return Configuration::from_ambient(rs, ambient);
}

/// Reads the r-tuple of points of an A_{n-1} configuration back out.
inline std::vector<Vec3> configuration_to_points(const RootSystem& rs, const Configuration& x) {
  if (rs.type != 'A') throw InvalidInput("configuration_to_points needs type A");
  std::vector<Vec3> points;
  for (int a = 0; a < rs.ambient_dim; ++a) points.push_back(x.ambient().row(a).transpose());
  return points;
}

}  // namespace lieconf::oracles
