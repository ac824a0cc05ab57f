#pragma once

// Cross-module property checks with measured worst-case deviations.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "lieconf/harness.hpp"

namespace lieconf::invariants {

using json = io::json;

struct PropertyResult {
  std::string name;
  double worst = 0;  ///< worst observed deviation
  double tolerance = 0;
  int cases = 0;
  bool passed = false;
  std::string detail;

  json to_json() const {
    return {{"name", name},     {"worst", worst},   {"tolerance", tolerance},
            {"cases", cases},   {"passed", passed}, {"detail", detail}};
  }
};

struct SuiteOptions {
  std::uint64_t seed = 7;
  int hopf_directions = 100'000;
  int rotations = 100;
  int configurations = 5;  ///< base configurations per weight
  int collinear_samples = 50;
  int as_samples = 100;
  int a1_samples = 1000;
  /// Weights exercised by the gauge / SU(2) / Weyl / scale suites.
  std::vector<std::string> test_weights = {"[2,1,0,0]", "[1,1,0,0]", "[3,1,1,0]"};
};

namespace detail {

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline PropertyResult finish(std::string name, double worst, double tol, int cases,
                             std::string detail = {}) {
  return {std::move(name), worst, tol, cases, worst < tol, std::move(detail)};
}

/// 1 - |<a,b>| / (|a||b|) for two columns.
inline double phase_mismatch(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return std::abs(1.0 - std::abs(a.dot(b)) / (a.norm() * b.norm()));
}

}  // namespace detail

inline PropertyResult hopf_roundtrip(const SuiteOptions& opt) {
  Rng rng(harness::stream_seed(opt.seed, 1));
  std::vector<Vec3> dirs = {Vec3::UnitZ(),  -Vec3::UnitZ(), Vec3::UnitX(),
                            -Vec3::UnitY(), Vec3(1, 1, 0).normalized()};
  for (int i = 0; i < opt.hopf_directions; ++i) dirs.push_back(random_unit_vector(rng));
  double worst = 0;
  for (const auto& w : dirs) {
    const auto lift = hopf_lift(w);
    worst = std::max(worst, (hopf_map(lift) - w).norm());
    worst = std::max(worst, std::abs(std::norm(lift.u) + std::norm(lift.v) - 1.0));
  }
  return detail::finish("hopf_roundtrip", worst, 1e-12, static_cast<int>(dirs.size()));
}

inline PropertyResult phase_gauge(const SuiteOptions& opt) {
  double worst = 0;
  int cases = 0;
  Rng rng(harness::stream_seed(opt.seed, 2));
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  for (const auto& w : opt.test_weights) {
    const auto p = harness::make_problem("A3", w);
    for (int c = 0; c < opt.configurations; ++c) {
      const auto x = sample_configuration(p.rs, rng);
      auto lifts = build_lift_table(p.rs, x);
      const double base = delta(assemble_F(p.rs, p.wd, p.orbit, lifts), p.r_col);
      for (auto& l : lifts.lifts) {
        const auto phase = std::polar(1.0, angle(rng));
        l.u *= phase;
        l.v *= phase;
      }
      worst = std::max(worst, detail::rel(delta(assemble_F(p.rs, p.wd, p.orbit, lifts), p.r_col), base));
      ++cases;
    }
  }
  return detail::finish("phase_gauge", worst, 1e-10, cases);
}

/// Replacing g_k by g_k w, w in the stabilizer, changes columns only by phases.
inline PropertyResult representative_choice(const SuiteOptions& opt) {
  double worst = 0;
  int cases = 0;
  Rng rng(harness::stream_seed(opt.seed, 3));
  for (const char* w : {"[1,0,0,0]", "[1,1,0,0]", "[2,2,0,0]", "[3,1,1,0]"}) {
    const auto p = harness::make_problem("A3", w);
    auto gens = stabilizer_generators(p.rs, p.wd);
    if (gens.size() >= 2) gens.push_back(gens[0] * gens[1]);
    for (const auto& g : gens) {
      const auto other = reseat_representatives(p.rs, p.orbit, g);
      for (int c = 0; c < opt.configurations; ++c) {
        const auto x = sample_configuration(p.rs, rng);
        const auto lifts = build_lift_table(p.rs, x);
        const auto A = assemble_F(p.rs, p.wd, p.orbit, lifts);
        const auto B = assemble_F(p.rs, p.wd, other, lifts);
        for (int k = 0; k < A.n; ++k)
          worst = std::max(worst, detail::phase_mismatch(A.entries.col(k), B.entries.col(k)));
        ++cases;
      }
    }
  }
  return detail::finish("representative_choice", worst, 1e-10, cases);
}

/// Delta and the per-column weighted norms under random rotations.
inline std::vector<PropertyResult> su2_invariance(const SuiteOptions& opt) {
  double worst_delta = 0;
  double worst_norm = 0;
  int cases = 0;
  Rng rng(harness::stream_seed(opt.seed, 4));
  for (const auto& w : opt.test_weights) {
    const auto p = harness::make_problem("A3", w);
    const auto x = sample_configuration(p.rs, rng);
    const auto F = assemble_F(p.rs, p.wd, p.orbit, x);
    const double base = delta(F, p.r_col);
    auto weighted_norms = [&](const ConfMatrix& M) {
      std::vector<double> out(static_cast<std::size_t>(M.n), 0.0);
      for (int k = 0; k < M.n; ++k)
        for (int i = 0; i <= M.m; ++i) out[k] += std::norm(M.entries(i, k)) / binomial(M.m, i);
      return out;
    };
    const auto base_norms = weighted_norms(F);
    for (int t = 0; t < opt.rotations; ++t) {
      const auto y = group_action(p.rs, x, Rotation{random_rotation(rng)});
      const auto G = assemble_F(p.rs, p.wd, p.orbit, y);
      worst_delta = std::max(worst_delta, detail::rel(delta(G, p.r_col), base));
      const auto norms = weighted_norms(G);
      for (int k = 0; k < G.n; ++k) worst_norm = std::max(worst_norm, detail::rel(norms[k], base_norms[k]));
      ++cases;
    }
  }
  return {detail::finish("su2_delta_invariance", worst_delta, 1e-8, cases),
          detail::finish("su2_column_weighted_norm", worst_norm, 1e-8, cases)};
}

/// Simple reflections: Delta invariant, columns permuted by k -> index(w^-1 lambda_k).
inline std::vector<PropertyResult> weyl_invariance(const SuiteOptions& opt) {
  double worst_delta = 0;
  double worst_column = 0;
  int cases = 0;
  Rng rng(harness::stream_seed(opt.seed, 5));
  for (const auto& w : opt.test_weights) {
    const auto p = harness::make_problem("A3", w);
    for (int c = 0; c < opt.configurations; ++c) {
      const auto x = sample_configuration(p.rs, rng);
      const auto F = assemble_F(p.rs, p.wd, p.orbit, x);
      const double base = delta(F, p.r_col);
      for (const auto& alpha : p.rs.simple_roots) {
        const Mat s = reflection(alpha);
        const auto y = group_action(p.rs, x, WeylElement{s});
        const auto G = assemble_F(p.rs, p.wd, p.orbit, y);
        worst_delta = std::max(worst_delta, detail::rel(delta(G, p.r_col), base));
        for (int k = 0; k < G.n; ++k) {
          // s is an involution, so s^-1 lambda_k = s lambda_k.
          const auto target = orbit_index(p.orbit, s * p.orbit.elements[k]);
          if (!target) throw InternalError("orbit not closed under a simple reflection");
          worst_column = std::max(worst_column,
                                  detail::phase_mismatch(G.entries.col(k), F.entries.col(*target)));
        }
        ++cases;
      }
    }
  }
  return {detail::finish("weyl_delta_invariance", worst_delta, 1e-8, cases),
          detail::finish("weyl_column_equivariance", worst_column, 1e-10, cases)};
}

inline PropertyResult scale_invariance(const SuiteOptions& opt) {
  double worst = 0;
  int cases = 0;
  Rng rng(harness::stream_seed(opt.seed, 6));
  for (const auto& w : opt.test_weights) {
    const auto p = harness::make_problem("A3", w);
    for (int c = 0; c < opt.configurations; ++c) {
      const auto x = sample_configuration(p.rs, rng);
      const double base = harness::evaluate(p, x).delta;
      for (double f : {0.5, 3.0, 100.0}) {
        worst = std::max(worst, detail::rel(harness::evaluate(p, group_action(p.rs, x, Scaling{f})).delta, base));
        ++cases;
      }
    }
  }
  return detail::finish("scale_invariance", worst, 1e-10, cases);
}

/// Delta over random collinear configurations (random regular xi, random
/// direction) against the canonical rho (x) e_3 value.
inline PropertyResult collinear_constancy(const SuiteOptions& opt) {
  double worst = 0;
  int cases = 0;
  Rng rng(harness::stream_seed(opt.seed, 7));
  std::normal_distribution<double> normal;
  for (const auto& w : opt.test_weights) {
    const auto p = harness::make_problem("A3", w);
    for (int c = 0; c < opt.collinear_samples; ++c) {
      Vec coeffs(p.rs.rank);
      for (int i = 0; i < p.rs.rank; ++i) coeffs[i] = normal(rng);
      const Vec xi = p.rs.basis * coeffs;
      const auto x = collinear_configuration(p.rs, xi, random_unit_vector(rng));
      worst = std::max(worst, detail::rel(harness::evaluate(p, x).delta, p.delta_col));
      ++cases;
    }
  }
  return detail::finish("collinear_constancy", worst, 1e-8, cases);
}

/// Closed-form collinear Delta and collinear rank against the pipeline, all
/// 26 sl(4) weights.
inline std::vector<PropertyResult> collinear_oracle_agreement() {
  double worst = 0;
  int rank_mismatches = 0;
  int cases = 0;
  for (const auto& w : harness::table1_weights()) {
    const auto p = harness::make_problem("A3", w);
    worst = std::max(worst, detail::rel(p.delta_col, p.delta_col_closed));
    if (p.rank_col != p.r_col) ++rank_mismatches;
    ++cases;
  }
  return {detail::finish("collinear_closed_form_vs_pipeline", worst, 1e-9, cases),
          detail::finish("collinear_rank_vs_numerical_rank", rank_mismatches, 0.5, cases)};
}

/// |D_AS(x)| against Delta for A_{n-1} with lambda = [1,...,1,0].
inline PropertyResult atiyah_sutcliffe_specialization(const SuiteOptions& opt) {
  double worst = 0;
  int cases = 0;
  Rng rng(harness::stream_seed(opt.seed, 8));
  for (const auto& [algebra, weight] : {std::pair{"A2", "[1,1,0]"}, std::pair{"A3", "[1,1,1,0]"}}) {
    const auto p = harness::make_problem(algebra, weight);
    for (int c = 0; c < opt.as_samples; ++c) {
      const auto x = sample_configuration(p.rs, rng);
      const auto points = oracles::configuration_to_points(p.rs, x);
      const double d = std::abs(oracles::atiyah_sutcliffe_determinant(points));
      worst = std::max(worst, detail::rel(harness::evaluate(p, x).delta, d));
      ++cases;
    }
  }
  return detail::finish("atiyah_sutcliffe_specialization", worst, 1e-8, cases);
}

/// A1 fundamental: Delta == 1 and rank == 2 everywhere on X.
inline PropertyResult a1_exactness(const SuiteOptions& opt) {
  double worst = 0;
  int bad_rank = 0;
  Rng rng(harness::stream_seed(opt.seed, 9));
  const auto p = harness::make_problem("A1", "fund:1");
  for (int c = 0; c < opt.a1_samples; ++c) {
    const auto rep = harness::evaluate(p, sample_configuration(p.rs, rng));
    worst = std::max(worst, std::abs(rep.delta - 1.0));
    if (rep.numerical_rank != 2) ++bad_rank;
  }
  std::string detail = bad_rank ? std::to_string(bad_rank) + " samples with rank != 2" : "";
  auto r = detail::finish("a1_exactness", worst, 1e-10, opt.a1_samples, detail);
  r.passed = r.passed && bad_rank == 0;
  return r;
}

/// sum_k c_k = n m / 2 (the longest element sends c to m - c).
inline PropertyResult exponent_sum_identity() {
  double worst = 0;
  int cases = 0;
  for (const auto& w : harness::table1_weights()) {
    const auto p = harness::make_problem("A3", w);
    const auto mu = oracles::exponent_multiset(p.rs, p.wd, p.orbit);
    long sum = 0;
    for (int c : mu.exponents) sum += c;
    worst = std::max(worst, std::abs(2.0 * sum - static_cast<double>(p.wd.n) * p.wd.m));
    ++cases;
  }
  return detail::finish("exponent_sum_identity", worst, 0.5, cases);
}

inline std::vector<PropertyResult> run_invariants(const SuiteOptions& opt = {}) {
  std::vector<PropertyResult> out;
  auto append = [&](auto&& r) {
    if constexpr (std::is_same_v<std::decay_t<decltype(r)>, PropertyResult>) out.push_back(r);
    else out.insert(out.end(), r.begin(), r.end());
  };
  append(hopf_roundtrip(opt));
  append(phase_gauge(opt));
  append(representative_choice(opt));
  append(su2_invariance(opt));
  append(weyl_invariance(opt));
  append(scale_invariance(opt));
  append(collinear_constancy(opt));
  append(collinear_oracle_agreement());
  append(atiyah_sutcliffe_specialization(opt));
  append(a1_exactness(opt));
  append(exponent_sum_identity());
  return out;
}

}  // namespace lieconf::invariants
