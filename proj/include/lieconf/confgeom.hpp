#pragma once

// Configurations x in h (x) R^3: an r-tuple of points of R^3, stored as
// coefficients against the orthonormal basis RootSystem::basis.

#include <cmath>
#include <random>
#include <sstream>
#include <variant>

#include <Eigen/Dense>

#include "lieconf/errors.hpp"
#include "lieconf/liealg.hpp"

namespace lieconf {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Rng = std::mt19937_64;

inline constexpr double kDefaultMarginMin = 1e-12;

class Configuration {
 public:
  Configuration() = default;

  /// `coords` is rank x 3.
  static Configuration from_coords(const RootSystem& rs, Mat coords) {
    if (coords.rows() != rs.rank || coords.cols() != 3) {
      std::ostringstream os;
      os << "configuration for " << rs.label() << " must be " << rs.rank << "x3, got "
         << coords.rows() << "x" << coords.cols();
      throw InvalidInput(os.str());
    }
    if (!coords.allFinite()) throw InvalidInput("configuration has non-finite entries");
    Configuration x;
    x.ambient_ = rs.basis * coords;
    x.coords_ = std::move(coords);
    return x;
  }

  /// Orthogonal projection of an ambient_dim x 3 matrix onto span(R) (x) R^3.
  static Configuration from_ambient(const RootSystem& rs, const Mat& ambient) {
    if (ambient.rows() != rs.ambient_dim || ambient.cols() != 3)
      throw InvalidInput("ambient configuration has the wrong shape");
    return from_coords(rs, rs.basis.transpose() * ambient);
  }

  const Mat& coords() const { return coords_; }
  const Mat& ambient() const { return ambient_; }
  int rank() const { return static_cast<int>(coords_.rows()); }

 private:
  Mat coords_;
  Mat ambient_;
};

/// (alpha (x) 1)(x).
inline Vec3 pair_root(const Configuration& x, const Vec& alpha) {
  return x.ambient().transpose() * alpha;
}

struct RegularityReport {
  double margin = 0;  ///< min over positive roots of |(alpha (x) 1)(x)|
  int argmin_root = -1;

  bool regular() const { return margin > 0; }
};

inline RegularityReport regularity_margin(const RootSystem& rs, const Configuration& x) {
  RegularityReport report{std::numeric_limits<double>::infinity(), -1};
  for (int j = 0; j < rs.num_positive(); ++j) {
    const double norm = pair_root(x, rs.positive_roots[j]).norm();
    if (norm < report.margin) report = {norm, j};
  }
  return report;
}

/// Gaussian configuration, entries i.i.d. N(0, scale^2) in basis coordinates.
/// Redraws (at most 100 times) until the regularity margin exceeds `margin_min`.
inline Configuration sample_configuration(const RootSystem& rs, Rng& rng, double scale = 1.0,
                                          double margin_min = kDefaultMarginMin) {
  if (!(scale > 0)) throw InvalidInput("sampling scale must be positive");
  std::normal_distribution<double> normal(0.0, scale);
  for (int attempt = 0; attempt < 100; ++attempt) {
    Mat coords(rs.rank, 3);
    for (int i = 0; i < rs.rank; ++i)
      for (int c = 0; c < 3; ++c) coords(i, c) = normal(rng);
    auto x = Configuration::from_coords(rs, std::move(coords));
    if (regularity_margin(rs, x).margin > margin_min) return x;
  }
  std::ostringstream os;
  os << "100 consecutive samples fell below the regularity margin " << margin_min;
  throw InvalidInput(os.str());
}

/// x = xi (x) direction; xi must be regular.
inline Configuration collinear_configuration(const RootSystem& rs, const Vec& xi,
                                             const Vec3& direction) {
  if (xi.size() != rs.ambient_dim) throw InvalidInput("xi has the wrong dimension");
  if (std::abs(direction.norm() - 1.0) > 1e-9) throw InvalidInput("direction must be a unit vector");
  for (int j = 0; j < rs.num_positive(); ++j) {
    if (std::abs(rs.positive_roots[j].dot(xi)) <= kDefaultMarginMin) {
      std::ostringstream os;
      os << "xi is not regular: it is orthogonal to positive root #" << j << " ("
         << rs.positive_roots[j].transpose() << ")";
      throw InvalidInput(os.str());
    }
  }
  return Configuration::from_ambient(rs, xi * direction.transpose());
}

/// rho (x) e_3.
inline Configuration canonical_collinear(const RootSystem& rs) {
  return collinear_configuration(rs, rs.rho(), Vec3::UnitZ());
}

// ---------------------------------------------------------------------------
// Group actions

struct Rotation {
  Mat3 matrix;
};
struct WeylElement {
  Mat matrix;  ///< ambient_dim x ambient_dim orthogonal, preserving R
};
struct Scaling {
  double factor;
};
using GroupAction = std::variant<Rotation, WeylElement, Scaling>;

inline Configuration group_action(const RootSystem& rs, const Configuration& x,
                                  const GroupAction& action) {
  struct Visitor {
    const RootSystem& rs;
    const Configuration& x;
    Configuration operator()(const Rotation& r) const {
      const Mat3& m = r.matrix;
      if ((m * m.transpose() - Mat3::Identity()).norm() > 1e-12 ||
          std::abs(m.determinant() - 1.0) > 1e-12)
        throw InvalidInput("rotation must be orthogonal with determinant 1");
      return Configuration::from_coords(rs, x.coords() * m.transpose());
    }
    Configuration operator()(const WeylElement& w) const {
      if (w.matrix.rows() != rs.ambient_dim || w.matrix.cols() != rs.ambient_dim)
        throw InvalidInput("Weyl element has the wrong dimension");
      return Configuration::from_coords(rs, rs.basis.transpose() * w.matrix * x.ambient());
    }
    Configuration operator()(const Scaling& s) const {
      if (!(s.factor > 0)) throw InvalidInput("scaling factor must be positive");
      return Configuration::from_coords(rs, s.factor * x.coords());
    }
  };
  return std::visit(Visitor{rs, x}, action);
}

/// Haar-random rotation from a normalized Gaussian quaternion.
inline Mat3 random_rotation(Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline Vec3 random_unit_vector(Rng& rng) {
  std::normal_distribution<double> normal;
  Vec3 v;
  do {
    v = Vec3(normal(rng), normal(rng), normal(rng));
  } while (v.norm() < 1e-8);
  return v.normalized();
}

}  // namespace lieconf
