#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace lieconf {

struct NelderMeadOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double initial_step = 0.5;
  int max_iterations = 2000;
  /// Stop once (f_worst - f_best) <= f_tolerance * max(1, |f_best|).
  double f_tolerance = 1e-13;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Derivative-free simplex descent. The objective may return +inf to act as
/// a barrier; such points are never accepted over finite ones.
template <typename Objective>
NelderMeadResult nelder_mead(Objective&& f, const Eigen::VectorXd& start,
                             const NelderMeadOptions& opt = {}) {
  const auto dim = start.size();
  NelderMeadResult result;
  std::vector<Eigen::VectorXd> simplex;
  std::vector<double> values;
  auto eval = [&](const Eigen::VectorXd& p) {
    ++result.evaluations;
    const double v = f(p);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  simplex.push_back(start);
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::VectorXd p = start;
    p[i] += opt.initial_step;
    simplex.push_back(std::move(p));
  }
  for (const auto& p : simplex) values.push_back(eval(p));

  std::vector<std::size_t> order(simplex.size());
  for (; result.iterations < opt.max_iterations; ++result.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];
    const double fb = values[best];
    const double fw = values[worst];
    if (std::isfinite(fw) && fw - fb <= opt.f_tolerance * std::max(1.0, std::abs(fb))) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += simplex[order[i]];
    centroid /= static_cast<double>(dim);

    const Eigen::VectorXd reflected = centroid + opt.reflection * (centroid - simplex[worst]);
    const double fr = eval(reflected);
    if (fr < fb) {
      const Eigen::VectorXd expanded = centroid + opt.expansion * (reflected - centroid);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    if (fr < fw) {
      const Eigen::VectorXd outside = centroid + opt.contraction * (reflected - centroid);
      const double fo = eval(outside);
      if (fo <= fr) {
        simplex[worst] = outside;
        values[worst] = fo;
        continue;
      }
    } else {
      const Eigen::VectorXd inside = centroid + opt.contraction * (simplex[worst] - centroid);
      const double fi = eval(inside);
      if (fi < fw) {
        simplex[worst] = inside;
        values[worst] = fi;
        continue;
      }
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + opt.shrink * (simplex[i] - simplex[best]);
      values[i] = eval(simplex[i]);
    }
  }
  const auto it = std::min_element(values.begin(), values.end());
  result.x = simplex[static_cast<std::size_t>(it - values.begin())];
  result.value = *it;
  return result;
}

}  // namespace lieconf
