#pragma once

// Root systems in ambient Euclidean coordinates, dominant integral weights,
// and Weyl orbits with coset representatives.
//
// Conventions follow Bourbaki's planches. The ambient dot product stands in
// for the invariant form; everything downstream (m_alpha, reflections, unit
// directions of pairings) only depends on it up to a positive scalar.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lieconf/errors.hpp"

namespace lieconf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr std::uint64_t kDefaultMaxWeylOrder = 1'000'000;
inline constexpr double kRootMatchTol = 1e-9;

namespace detail {

// Roots and weights in these coordinates are rationals with small
// denominators, so a fine grid key identifies them exactly.
using GridKey = std::vector<long long>;

inline GridKey grid_key(const Vec& v, double scale) {
  GridKey key(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) key[i] = std::llround(v[i] * scale);
  return key;
}

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

inline std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i) f = saturating_mul(f, static_cast<std::uint64_t>(i));
  return f;
}

inline Vec unit(int dim, int i) { return Vec::Unit(dim, i); }

inline Mat reflection_matrix(const Vec& alpha) {
  const auto n = alpha.size();
  return Mat::Identity(n, n) - (2.0 / alpha.squaredNorm()) * alpha * alpha.transpose();
}

inline Vec reflect(const Vec& v, const Vec& alpha) {
  return v - (2.0 * v.dot(alpha) / alpha.squaredNorm()) * alpha;
}

}  // namespace detail

/// Root data of a simple Lie algebra. `all_roots` lists the positive roots
/// first, followed by their negatives in the same order, so root `j` and
/// root `j + |R+|` are opposite.
struct RootSystem {
  char type = 'A';
  int rank = 0;
  int ambient_dim = 0;
  std::vector<Vec> simple_roots;
  std::vector<Vec> positive_roots;
  std::vector<Vec> all_roots;
  /// Coefficients of each positive root in the simple-root basis.
  std::vector<Eigen::VectorXi> simple_coefficients;
  Eigen::MatrixXi cartan;  ///< cartan(i,j) = 2(a_i,a_j)/(a_j,a_j)
  Mat basis;               ///< ambient_dim x rank, orthonormal basis of span(R)
  std::uint64_t weyl_order = 1;

  std::string label() const { return std::string(1, type) + std::to_string(rank); }
  int num_positive() const { return static_cast<int>(positive_roots.size()); }
  int num_roots() const { return static_cast<int>(all_roots.size()); }
  bool is_positive(int root_index) const { return root_index < num_positive(); }
  int opposite(int root_index) const {
    const int p = num_positive();
    return root_index < p ? root_index + p : root_index - p;
  }
  double inner(const Vec& a, const Vec& b) const { return a.dot(b); }

  /// Half-sum of positive roots.
  Vec rho() const {
    Vec r = Vec::Zero(ambient_dim);
    for (const auto& a : positive_roots) r += a;
    return 0.5 * r;
  }

  /// Index of the root matching `v` within `tol`, or nullopt.
  std::optional<int> find_root(const Vec& v, double tol = kRootMatchTol) const {
    auto it = root_index_.find(detail::grid_key(v, kGrid));
    if (it == root_index_.end()) return std::nullopt;
    if ((all_roots[it->second] - v).norm() > tol) return std::nullopt;
    return it->second;
  }

  void index_roots() {
    root_index_.clear();
    for (int j = 0; j < num_roots(); ++j)
      root_index_.emplace(detail::grid_key(all_roots[j], kGrid), j);
  }

 private:
  // Ambient root coordinates are multiples of 1/2.
  static constexpr double kGrid = 2.0;
  std::map<detail::GridKey, int> root_index_;
};

namespace detail {

inline std::vector<Vec> simple_roots_for(char type, int rank, int& ambient_dim) {
  std::vector<Vec> s;
  auto e = [&](int i) { return unit(ambient_dim, i); };
  switch (type) {
    case 'A':
      ambient_dim = rank + 1;
      for (int i = 0; i < rank; ++i) s.push_back(e(i) - e(i + 1));
      break;
    case 'B':
      ambient_dim = rank;
      for (int i = 0; i + 1 < rank; ++i) s.push_back(e(i) - e(i + 1));
      s.push_back(e(rank - 1));
      break;
    case 'C':
      ambient_dim = rank;
      for (int i = 0; i + 1 < rank; ++i) s.push_back(e(i) - e(i + 1));
      s.push_back(2.0 * e(rank - 1));
      break;
    case 'D':
      ambient_dim = rank;
      for (int i = 0; i + 1 < rank; ++i) s.push_back(e(i) - e(i + 1));
      s.push_back(e(rank - 2) + e(rank - 1));
      break;
    case 'E': {
      ambient_dim = 8;
      Vec a1 = Vec::Constant(8, -0.5);
      a1[0] = 0.5;
      a1[7] = 0.5;
      s.push_back(a1);
      s.push_back(e(0) + e(1));
      for (int i = 1; i <= 6; ++i) s.push_back(e(i) - e(i - 1));
      s.resize(static_cast<std::size_t>(rank));
      break;
    }
    case 'F':
      ambient_dim = 4;
      s.push_back(e(1) - e(2));
      s.push_back(e(2) - e(3));
      s.push_back(e(3));
      s.push_back(0.5 * (e(0) - e(1) - e(2) - e(3)));
      break;
    case 'G':
      ambient_dim = 3;
      s.push_back(e(0) - e(1));
      s.push_back(-2.0 * e(0) + e(1) + e(2));
      break;
    default:
      break;
  }
  return s;
}

inline std::uint64_t weyl_order_for(char type, int rank) {
  switch (type) {
    case 'A': return factorial(rank + 1);
    case 'B':
    case 'C': return saturating_mul(std::uint64_t{1} << std::min(rank, 63), factorial(rank));
    case 'D': return saturating_mul(std::uint64_t{1} << std::min(rank - 1, 63), factorial(rank));
    case 'E': return rank == 6 ? 51840ULL : rank == 7 ? 2903040ULL : 696729600ULL;
    case 'F': return 1152;
    case 'G': return 12;
    default: return 0;
  }
}

inline bool valid_type(char type, int rank) {
  switch (type) {
    case 'A': return rank >= 1;
    case 'B':
    case 'C': return rank >= 2;
    case 'D': return rank >= 4;
    case 'E': return rank >= 6 && rank <= 8;
    case 'F': return rank == 4;
    case 'G': return rank == 2;
    default: return false;
  }
}

}  // namespace detail

/// Builds the root system of type `type_letter` and rank `rank`. Rejects
/// types whose Weyl group is larger than `max_weyl_order`.
inline RootSystem build_root_system(char type_letter, int rank,
                                    std::uint64_t max_weyl_order = kDefaultMaxWeylOrder) {
  if (!detail::valid_type(type_letter, rank)) {
    std::ostringstream os;
    os << "invalid simple type " << type_letter << rank
       << " (expected A(r>=1), B(r>=2), C(r>=2), D(r>=4), E6, E7, E8, F4 or G2)";
    throw InvalidInput(os.str());
  }
  RootSystem rs;
  rs.type = type_letter;
  rs.rank = rank;
  rs.weyl_order = detail::weyl_order_for(type_letter, rank);
  if (rs.weyl_order > max_weyl_order) {
    std::ostringstream os;
    os << "Weyl group of " << rs.label() << " has order " << rs.weyl_order
       << ", above the configured limit " << max_weyl_order << " (raise --max-weyl-order)";
    throw InvalidInput(os.str());
  }
  rs.simple_roots = detail::simple_roots_for(type_letter, rank, rs.ambient_dim);

  // Closure of the simple roots under simple reflections.
  std::map<detail::GridKey, Vec> seen;
  std::deque<Vec> queue;
  for (const auto& a : rs.simple_roots) {
    if (seen.emplace(detail::grid_key(a, 2.0), a).second) queue.push_back(a);
  }
  while (!queue.empty()) {
    Vec v = queue.front();
    queue.pop_front();
    for (const auto& a : rs.simple_roots) {
      Vec w = detail::reflect(v, a);
      if (seen.emplace(detail::grid_key(w, 2.0), w).second) queue.push_back(w);
    }
  }

  Mat simple(rs.ambient_dim, rank);
  for (int i = 0; i < rank; ++i) simple.col(i) = rs.simple_roots[i];
  const Mat gram = simple.transpose() * simple;
  const Eigen::LDLT<Mat> gram_solver(gram);

  struct Positive {
    Vec root;
    Eigen::VectorXi coeffs;
    int height;
  };
  std::vector<Positive> positives;
  for (const auto& [key, v] : seen) {
    Vec c = gram_solver.solve(simple.transpose() * v);
    Eigen::VectorXi ci(rank);
    for (int i = 0; i < rank; ++i) ci[i] = static_cast<int>(std::lround(c[i]));
    if ((c - ci.cast<double>()).norm() > 1e-9)
      throw InternalError("root is not an integral combination of simple roots");
    if (ci.minCoeff() >= 0) positives.push_back({v, ci, ci.sum()});
  }
  if (positives.size() * 2 != seen.size())
    throw InternalError("root closure is not split evenly into positive and negative roots");

  // Height first, then lexicographic (descending) on simple coefficients,
  // so the simple roots come first and in index order.
  std::sort(positives.begin(), positives.end(), [](const Positive& a, const Positive& b) {
    if (a.height != b.height) return a.height < b.height;
    return std::lexicographical_compare(b.coeffs.begin(), b.coeffs.end(), a.coeffs.begin(),
                                        a.coeffs.end());
  });
  for (const auto& p : positives) {
    rs.positive_roots.push_back(p.root);
    rs.simple_coefficients.push_back(p.coeffs);
  }
  rs.all_roots = rs.positive_roots;
  for (const auto& p : rs.positive_roots) rs.all_roots.push_back(-p);
  rs.index_roots();

  rs.cartan.resize(rank, rank);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j)
      rs.cartan(i, j) = static_cast<int>(std::lround(
          2.0 * rs.simple_roots[i].dot(rs.simple_roots[j]) / rs.simple_roots[j].squaredNorm()));

  // Modified Gram-Schmidt over the simple roots.
  rs.basis = Mat::Zero(rs.ambient_dim, rank);
  for (int i = 0; i < rank; ++i) {
    Vec v = rs.simple_roots[i];
    for (int j = 0; j < i; ++j) v -= v.dot(rs.basis.col(j)) * rs.basis.col(j);
    rs.basis.col(i) = v.normalized();
  }
  return rs;
}

/// Parses "A3", "g2", "E6" etc.
inline RootSystem build_root_system(const std::string& spec,
                                    std::uint64_t max_weyl_order = kDefaultMaxWeylOrder) {
  if (spec.size() < 2) throw InvalidInput("malformed algebra spec '" + spec + "'");
  const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(spec[0])));
  int rank = 0;
  std::size_t used = 0;
  try {
    rank = std::stoi(spec.substr(1), &used);
  } catch (const std::exception&) {
    throw InvalidInput("malformed algebra spec '" + spec + "'");
  }
  if (used != spec.size() - 1) throw InvalidInput("malformed algebra spec '" + spec + "'");
  return build_root_system(letter, rank, max_weyl_order);
}

// ---------------------------------------------------------------------------
// Weights

enum class WeightBasis { bracket, fundamental };

/// A weight as the user wrote it, before validation.
struct WeightSpec {
  WeightBasis basis = WeightBasis::bracket;
  std::vector<double> values;

  std::string to_string() const {
    std::ostringstream os;
    if (basis == WeightBasis::fundamental) os << "fund:";
    else os << '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) os << ',';
      os << values[i];
    }
    if (basis == WeightBasis::bracket) os << ']';
    return os.str();
  }
};

/// Accepts "[6,4,2,0]" (bracket) and "fund:1,0,2" (fundamental coefficients).
/// A bare comma list is read in `default_basis`.
inline WeightSpec parse_weight_spec(const std::string& text,
                                    std::optional<WeightBasis> default_basis = std::nullopt) {
  std::string body = text;
  WeightSpec spec;
  spec.basis = default_basis.value_or(WeightBasis::bracket);
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  body = trim(body);
  if (body.rfind("fund:", 0) == 0) {
    spec.basis = WeightBasis::fundamental;
    body = body.substr(5);
  } else if (!body.empty() && body.front() == '[') {
    if (body.back() != ']') throw InvalidInput("unterminated bracket weight '" + text + "'");
    spec.basis = WeightBasis::bracket;
    body = body.substr(1, body.size() - 2);
  }
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw InvalidInput("empty entry in weight '" + text + "'");
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidInput("non-numeric entry '" + item + "' in weight '" + text + "'");
    }
    if (used != item.size() || !std::isfinite(value))
      throw InvalidInput("non-numeric entry '" + item + "' in weight '" + text + "'");
    spec.values.push_back(value);
  }
  if (spec.values.empty()) throw InvalidInput("empty weight '" + text + "'");
  return spec;
}

struct WeightData {
  Vec lambda;                ///< ambient coordinates, inside span(R)
  std::vector<int> m_alpha;  ///< indexed like RootSystem::positive_roots
  int m = 0;
  int n = 0;
  std::string spec;  ///< normalized input text
};

/// Fundamental weights: omega_i with 2(omega_i, a_j)/(a_j, a_j) = delta_ij.
inline std::vector<Vec> fundamental_weights(const RootSystem& rs) {
  const Mat cartan = rs.cartan.cast<double>();
  const Mat inv = cartan.inverse();
  std::vector<Vec> omegas;
  for (int i = 0; i < rs.rank; ++i) {
    Vec w = Vec::Zero(rs.ambient_dim);
    for (int k = 0; k < rs.rank; ++k) w += inv(i, k) * rs.simple_roots[k];
    omegas.push_back(w);
  }
  return omegas;
}

/// m_alpha = 2(alpha, lambda)/(alpha, alpha) for every positive root.
/// Validates dominance and integrality.
inline std::vector<int> root_multiplicities(const RootSystem& rs, const Vec& lambda) {
  std::vector<int> out;
  out.reserve(rs.positive_roots.size());
  for (int j = 0; j < rs.num_positive(); ++j) {
    const Vec& a = rs.positive_roots[j];
    const double value = 2.0 * a.dot(lambda) / a.squaredNorm();
    const double rounded = std::round(value);
    if (std::abs(value - rounded) > 1e-9) {
      std::ostringstream os;
      os << "weight is not integral: 2(a,l)/(a,a) = " << value << " for positive root "
         << a.transpose().format(Eigen::IOFormat(Eigen::FullPrecision, 0, ",", ",", "", "", "(", ")"));
      throw InvalidInput(os.str());
    }
    out.push_back(static_cast<int>(rounded));
  }
  for (int i = 0; i < rs.rank; ++i) {
    if (out[i] < 0) {
      std::ostringstream os;
      os << "weight is not dominant: pairing with simple root a" << (i + 1) << " is " << out[i];
      throw InvalidInput(os.str());
    }
  }
  // Positive combinations of simple pairings; cannot fail once the simple ones pass.
  for (int j = 0; j < rs.num_positive(); ++j)
    if (out[j] < 0) throw InternalError("negative multiplicity on a non-simple positive root");
  return out;
}

struct WeylOrbit;
inline WeylOrbit weyl_orbit(const RootSystem& rs, const WeightData& wd,
                     std::uint64_t max_orbit = kDefaultMaxWeylOrder);

/// Validates a weight and computes m_alpha, m and the orbit size n.
inline WeightData parse_weight(const RootSystem& rs, const WeightSpec& spec,
                               std::uint64_t max_orbit = kDefaultMaxWeylOrder);

inline WeightData parse_weight(const RootSystem& rs, const std::string& text,
                               std::optional<WeightBasis> default_basis = std::nullopt,
                               std::uint64_t max_orbit = kDefaultMaxWeylOrder) {
  return parse_weight(rs, parse_weight_spec(text, default_basis), max_orbit);
}

// ---------------------------------------------------------------------------
// Weyl orbits

struct RootImage {
  int index = -1;
  bool positive = false;
};

/// Orbit W.lambda with one representative g_k per coset, g_k(lambda) = lambda_k.
/// `root_image[k][j]` is the index of g_k(alpha_j) in RootSystem::all_roots.
struct WeylOrbit {
  std::vector<Vec> elements;
  std::vector<Mat> representatives;  ///< ambient_dim x ambient_dim orthogonal maps
  std::vector<std::vector<int>> root_image;
  std::uint64_t group_order = 1;
  std::uint64_t stabilizer_order = 1;

  int size() const { return static_cast<int>(elements.size()); }
};

namespace detail {

inline std::vector<int> permutation_of_roots(const RootSystem& rs, const Mat& g) {
  std::vector<int> image(static_cast<std::size_t>(rs.num_roots()));
  for (int j = 0; j < rs.num_roots(); ++j) {
    const auto idx = rs.find_root(g * rs.all_roots[j]);
    if (!idx) throw InternalError("Weyl representative does not map a root onto a root");
    image[j] = *idx;
  }
  return image;
}

}  // namespace detail

/// Breadth-first closure of {lambda} under simple reflections, generators
/// visited in index order.
inline WeylOrbit weyl_orbit(const RootSystem& rs, const WeightData& wd, std::uint64_t max_orbit) {
  constexpr double kWeightGrid = 1e7;
  WeylOrbit orbit;
  orbit.group_order = rs.weyl_order;
  std::map<detail::GridKey, int> seen;
  const int dim = rs.ambient_dim;
  std::vector<Mat> reflections;
  for (const auto& a : rs.simple_roots) reflections.push_back(detail::reflection_matrix(a));

  orbit.elements.push_back(wd.lambda);
  orbit.representatives.push_back(Mat::Identity(dim, dim));
  seen.emplace(detail::grid_key(wd.lambda, kWeightGrid), 0);
  for (std::size_t head = 0; head < orbit.elements.size(); ++head) {
    for (int i = 0; i < rs.rank; ++i) {
      Vec next = detail::reflect(orbit.elements[head], rs.simple_roots[i]);
      if (!seen.emplace(detail::grid_key(next, kWeightGrid), static_cast<int>(orbit.elements.size()))
               .second)
        continue;
      if (orbit.elements.size() >= max_orbit) {
        std::ostringstream os;
        os << "Weyl orbit exceeds the configured limit " << max_orbit;
        throw InvalidInput(os.str());
      }
      Mat g = reflections[i] * orbit.representatives[head];
      orbit.elements.push_back(std::move(next));
      orbit.representatives.push_back(std::move(g));
    }
  }
  const auto n = static_cast<std::uint64_t>(orbit.elements.size());
  if (rs.weyl_order % n != 0)
    throw InternalError("orbit size does not divide the Weyl group order");
  orbit.stabilizer_order = rs.weyl_order / n;
  orbit.root_image.reserve(orbit.elements.size());
  for (const auto& g : orbit.representatives)
    orbit.root_image.push_back(detail::permutation_of_roots(rs, g));
  return orbit;
}

inline WeightData parse_weight(const RootSystem& rs, const WeightSpec& spec,
                               std::uint64_t max_orbit) {
  WeightData wd;
  wd.spec = spec.to_string();
  if (spec.basis == WeightBasis::bracket) {
    if (rs.type != 'A')
      throw InvalidInput("bracket weights are only defined for type A; use fund:... for " +
                         rs.label());
    if (static_cast<int>(spec.values.size()) != rs.ambient_dim) {
      std::ostringstream os;
      os << "bracket weight for " << rs.label() << " needs " << rs.ambient_dim << " entries, got "
         << spec.values.size();
      throw InvalidInput(os.str());
    }
    Vec v(rs.ambient_dim);
    for (int i = 0; i < rs.ambient_dim; ++i) {
      const double x = spec.values[i];
      if (std::abs(x - std::round(x)) > 1e-9)
        throw InvalidInput("bracket weight entries must be integers, got " + std::to_string(x));
      v[i] = std::round(x);
    }
    v.array() -= v.mean();
    wd.lambda = v;
  } else {
    if (static_cast<int>(spec.values.size()) != rs.rank) {
      std::ostringstream os;
      os << "fundamental weight for " << rs.label() << " needs " << rs.rank
         << " coefficients, got " << spec.values.size();
      throw InvalidInput(os.str());
    }
    const auto omegas = fundamental_weights(rs);
    Vec v = Vec::Zero(rs.ambient_dim);
    for (int i = 0; i < rs.rank; ++i) {
      const double c = spec.values[i];
      if (c < 0 || std::abs(c - std::round(c)) > 1e-9)
        throw InvalidInput("fundamental coefficients must be nonnegative integers, got " +
                           std::to_string(c));
      v += std::round(c) * omegas[i];
    }
    wd.lambda = v;
  }
  if (wd.lambda.norm() < 1e-12) throw InvalidInput("weight is zero; the construction is empty");
  wd.m_alpha = root_multiplicities(rs, wd.lambda);
  wd.m = std::accumulate(wd.m_alpha.begin(), wd.m_alpha.end(), 0);
  wd.n = weyl_orbit(rs, wd, max_orbit).size();
  return wd;
}

/// Image of root `root_index` under the k-th representative.
inline RootImage act_on_root(const RootSystem& rs, const WeylOrbit& orbit, int k, int root_index) {
  if (k < 0 || k >= orbit.size()) throw InvalidInput("orbit index out of range");
  if (root_index < 0 || root_index >= rs.num_roots()) throw InvalidInput("root index out of range");
  const int idx = orbit.root_image[k][root_index];
  return {idx, rs.is_positive(idx)};
}

/// Same, for a root given by coordinates; snaps to the nearest root.
inline RootImage act_on_root(const RootSystem& rs, const WeylOrbit& orbit, int k, const Vec& alpha) {
  const auto src = rs.find_root(alpha);
  if (!src) throw InvalidInput("vector is not a root");
  const auto image = rs.find_root(orbit.representatives.at(k) * alpha);
  if (!image) throw InternalError("image of a root under a Weyl representative is not a root");
  return {*image, rs.is_positive(*image)};
}

/// Replaces every representative g_k by g_k * w; w must fix lambda.
inline WeylOrbit reseat_representatives(const RootSystem& rs, const WeylOrbit& orbit, const Mat& w) {
  if ((w * orbit.elements.front() - orbit.elements.front()).norm() > 1e-9)
    throw InvalidInput("right factor does not stabilize the weight");
  WeylOrbit out = orbit;
  for (int k = 0; k < out.size(); ++k) {
    out.representatives[k] = orbit.representatives[k] * w;
    out.root_image[k] = detail::permutation_of_roots(rs, out.representatives[k]);
  }
  return out;
}

/// Simple reflections fixing lambda; they generate its stabilizer.
inline std::vector<Mat> stabilizer_generators(const RootSystem& rs, const WeightData& wd) {
  std::vector<Mat> gens;
  for (int i = 0; i < rs.rank; ++i)
    if (wd.m_alpha[i] == 0) gens.push_back(detail::reflection_matrix(rs.simple_roots[i]));
  return gens;
}

/// Orthogonal reflection in the hyperplane orthogonal to `alpha`.
inline Mat reflection(const Vec& alpha) { return detail::reflection_matrix(alpha); }

/// Index k with orbit.elements[k] == mu, or nullopt.
inline std::optional<int> orbit_index(const WeylOrbit& orbit, const Vec& mu, double tol = 1e-9) {
  for (int k = 0; k < orbit.size(); ++k)
    if ((orbit.elements[k] - mu).norm() <= tol) return k;
  return std::nullopt;
}

}  // namespace lieconf
