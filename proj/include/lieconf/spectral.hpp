#pragma once

// Weighted singular values of sqrt(g) F, numerical rank, and the invariant
// Delta = e_{r_col}(d_1, ..., d_p) with d_i = sqrt(binom(m, i-1)) * sigma_i.

#include <algorithm>
#include <cmath>
#include <mutex>
#include <span>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "lieconf/errors.hpp"
#include "lieconf/hopfmap.hpp"
#include "lieconf/liealg.hpp"

namespace lieconf {

inline constexpr int kMaxDegree = 1020;
inline constexpr double kRankEpsilon = 2.3e-16;

/// binom(m, i) in double precision, from a cached Pascal triangle.
inline double binomial(int m, int i) {
  static std::vector<std::vector<double>> rows = {{1.0}};
  static std::mutex mutex;
  if (m < 0 || m > kMaxDegree) throw InvalidInput("degree m outside the supported range [0, 1020]");
  if (i < 0 || i > m) return 0.0;
  std::lock_guard lock(mutex);
  while (static_cast<int>(rows.size()) <= m) {
    const auto& prev = rows.back();
    std::vector<double> row(prev.size() + 1, 1.0);
    for (std::size_t j = 1; j < prev.size(); ++j) row[j] = prev[j - 1] + prev[j];
    rows.push_back(std::move(row));
  }
  return rows[m][i];
}

/// e_0 .. e_p of the values, by multiplying out prod (1 + d_i t).
inline std::vector<double> elementary_symmetric_all(std::span<const double> values) {
  std::vector<double> e(values.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t k = i + 1; k >= 1; --k) e[k] += values[i] * e[k - 1];
  return e;
}

inline double elementary_symmetric(std::span<const double> values, int degree) {
  if (degree < 0 || degree > static_cast<int>(values.size()))
    throw InvalidInput("elementary symmetric degree out of range");
  return elementary_symmetric_all(values)[degree];
}

/// Rows scaled by binom(m, i)^(-1/2); singular values in descending order.
inline std::vector<double> weighted_singular_values(const ConfMatrix& M) {
  CMat scaled = M.entries;
  for (int i = 0; i <= M.m; ++i) scaled.row(i) /= std::sqrt(binomial(M.m, i));
  Eigen::JacobiSVD<CMat> svd(scaled);
  if (svd.info() != Eigen::Success || !svd.singularValues().allFinite()) {
    std::ostringstream os;
    os << "SVD failed on the weighted " << M.entries.rows() << "x" << M.entries.cols()
       << " matrix:\n"
       << scaled;
    throw NumericalFailure(os.str());
  }
  const auto& s = svd.singularValues();
  std::vector<double> sigma(s.data(), s.data() + s.size());
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

/// Count of sigma_i > eps * sigma_1 * max(m+1, n).
inline int numerical_rank(std::span<const double> sigma, int m, int n) {
  if (sigma.empty() || sigma.front() <= 0) return 0;
  const double threshold = kRankEpsilon * sigma.front() * std::max(m + 1, n);
  return static_cast<int>(
      std::count_if(sigma.begin(), sigma.end(), [&](double s) { return s > threshold; }));
}

/// d_i = sqrt(binom(m, i-1)) * sigma_i.
inline std::vector<double> weighted_diagonal(std::span<const double> sigma, int m) {
  std::vector<double> d(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i)
    d[i] = std::sqrt(binomial(m, static_cast<int>(i))) * sigma[i];
  return d;
}

inline double delta_from_sigma(std::span<const double> sigma, int m, int r_col) {
  if (r_col < 0 || r_col > static_cast<int>(sigma.size())) {
    std::ostringstream os;
    os << "r_col = " << r_col << " outside [0, " << sigma.size() << "]";
    throw InvalidInput(os.str());
  }
  const auto d = weighted_diagonal(sigma, m);
  return elementary_symmetric(d, r_col);
}

inline double delta(const ConfMatrix& M, int r_col) {
  const auto sigma = weighted_singular_values(M);
  return delta_from_sigma(sigma, M.m, r_col);
}

struct SpectralReport {
  std::vector<double> singular_values;
  int numerical_rank = 0;
  int r_col = 0;
  double delta = 0;
  std::vector<double> weighted_diagonal;
  /// Successive singular values closer than 1e-12 relative.
  bool near_tie = false;
};

inline SpectralReport spectral_report(const ConfMatrix& M, int r_col) {
  SpectralReport rep;
  rep.singular_values = weighted_singular_values(M);
  rep.numerical_rank = numerical_rank(rep.singular_values, M.m, M.n);
  rep.r_col = r_col;
  rep.weighted_diagonal = weighted_diagonal(rep.singular_values, M.m);
  rep.delta = delta_from_sigma(rep.singular_values, M.m, r_col);
  const auto& s = rep.singular_values;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i - 1] != s[i] && s[i - 1] - s[i] < 1e-12 * s[0]) rep.near_tie = true;
  return rep;
}

/// c_k = sum over positive alpha of m_alpha [g_k alpha > 0]. At a collinear
/// configuration xi (x) e_3 with xi dominant regular, p_k is +-t^{c_k}.
inline std::vector<int> collinear_exponents(const RootSystem& rs, const WeightData& wd,
                                            const WeylOrbit& orbit) {
  std::vector<int> c(static_cast<std::size_t>(orbit.size()), 0);
  for (int k = 0; k < orbit.size(); ++k)
    for (int j = 0; j < rs.num_positive(); ++j)
      if (rs.is_positive(orbit.root_image[k][j])) c[k] += wd.m_alpha[j];
  return c;
}

/// Number of distinct collinear exponents: the common rank of F over
/// collinear configurations.
inline int collinear_rank(const RootSystem& rs, const WeightData& wd, const WeylOrbit& orbit) {
  auto c = collinear_exponents(rs, wd, orbit);
  std::sort(c.begin(), c.end());
  return static_cast<int>(std::unique(c.begin(), c.end()) - c.begin());
}

}  // namespace lieconf
