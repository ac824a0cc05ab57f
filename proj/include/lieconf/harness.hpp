#pragma once

// Experiment orchestration: Monte-Carlo sampling of Delta, the sl(4) weight
// table, simplex-descent counterexample hunting, seeded RNG streams.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lieconf/confgeom.hpp"
#include "lieconf/errors.hpp"
#include "lieconf/hopfmap.hpp"
#include "lieconf/io.hpp"
#include "lieconf/liealg.hpp"
#include "lieconf/nelder_mead.hpp"
#include "lieconf/oracles.hpp"
#include "lieconf/spectral.hpp"

namespace lieconf::harness {

using json = io::json;

// ---------------------------------------------------------------------------
// Seeds

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of stream `index` under `master`: mix64(mix64(master) ^ index).
/// Streams are counter-addressed, so a trial's draws do not depend on which
/// worker runs it or in what order.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(mix64(master) ^ index);
}

/// Stream index for trial `trial` of the `group`-th weight of a run.
inline std::uint64_t trial_stream(std::uint64_t group, std::uint64_t trial) {
  return (group << 32) | trial;
}

inline std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---------------------------------------------------------------------------
// Problem setup

/// Everything fixed by (algebra, weight): root data, orbit, collinear baseline.
struct Problem {
  RootSystem rs;
  WeightData wd;
  WeylOrbit orbit;
  int r_col = 0;
  double delta_col = 0;         ///< numerical pipeline at rho (x) e_3
  double delta_col_closed = 0;  ///< closed form from the exponent multiset
  int rank_col = 0;             ///< numerical rank at rho (x) e_3
};

inline Problem make_problem(RootSystem rs, const WeightSpec& spec,
                            std::uint64_t max_weyl_order = kDefaultMaxWeylOrder) {
  Problem p;
  p.wd = parse_weight(rs, spec, max_weyl_order);
  p.orbit = weyl_orbit(rs, p.wd, max_weyl_order);
  p.r_col = collinear_rank(rs, p.wd, p.orbit);
  const auto F = assemble_F(rs, p.wd, p.orbit, canonical_collinear(rs));
  const auto sigma = weighted_singular_values(F);
  p.rank_col = numerical_rank(sigma, F.m, F.n);
  p.delta_col = delta_from_sigma(sigma, F.m, p.r_col);
  p.delta_col_closed = oracles::collinear_delta_closed_form(rs, p.wd, p.orbit);
  p.rs = std::move(rs);
  return p;
}

inline Problem make_problem(const std::string& algebra, const std::string& weight,
                            std::optional<WeightBasis> basis = std::nullopt,
                            std::uint64_t max_weyl_order = kDefaultMaxWeylOrder) {
  return make_problem(build_root_system(algebra, max_weyl_order), parse_weight_spec(weight, basis),
                      max_weyl_order);
}

inline SpectralReport evaluate(const Problem& p, const Configuration& x) {
  return spectral_report(assemble_F(p.rs, p.wd, p.orbit, x), p.r_col);
}

// ---------------------------------------------------------------------------
// Configuration

struct ExperimentConfig {
  std::string algebra = "A3";
  std::vector<std::string> weights;
  std::optional<WeightBasis> weight_basis;
  int trials = 1000;
  std::uint64_t seed = 20190101;
  double scale = 1.0;
  double margin_min = kDefaultMarginMin;
  /// Relative slack below Delta(x_col) before a sample counts as a violation.
  double violation_rel_tol = 1e-9;
  std::string out;
  int threads = 1;
  int restarts = 20;
  int max_iterations = 2000;
  double simplex_scale = 0.5;
  std::uint64_t max_weyl_order = kDefaultMaxWeylOrder;
  /// Adds wall_time to trial records (breaks byte-identical reruns).
  bool record_timing = false;

  void validate() const {
    if (trials < 1) throw InvalidInput("trials must be >= 1");
    if (restarts < 1) throw InvalidInput("restarts must be >= 1");
    if (max_iterations < 1) throw InvalidInput("max iterations must be >= 1");
    if (!(scale > 0)) throw InvalidInput("scale must be positive");
    if (!(simplex_scale > 0)) throw InvalidInput("simplex scale must be positive");
    if (margin_min < 0) throw InvalidInput("margin_min must be nonnegative");
    if (threads < 1) throw InvalidInput("threads must be >= 1");
  }

  /// Everything that influences numerical results (not output path, threads).
  json to_json() const {
    json j;
    j["algebra"] = algebra;
    j["weights"] = weights;
    j["weight_basis"] = !weight_basis ? "auto"
                        : *weight_basis == WeightBasis::bracket ? "bracket"
                                                                : "fundamental";
    j["trials"] = trials;
    j["seed"] = seed;
    j["scale"] = scale;
    j["margin_min"] = margin_min;
    j["violation_rel_tol"] = violation_rel_tol;
    j["restarts"] = restarts;
    j["max_iterations"] = max_iterations;
    j["simplex_scale"] = simplex_scale;
    j["max_weyl_order"] = max_weyl_order;
    return j;
  }

  std::string hash() const {
    std::ostringstream os;
    os << std::hex << fnv1a(to_json().dump());
    return os.str();
  }
};

/// Runs `body(i)` for i in [0, count) on `threads` workers.
template <typename Body>
void parallel_for(int count, int threads, Body&& body) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) body(i);
    });
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// info

struct InfoSummary {
  std::string algebra;
  std::string weight;
  int m = 0;
  int n = 0;
  int num_positive = 0;
  std::uint64_t weyl_order = 0;
  std::uint64_t stabilizer_order = 0;
  int r_col = 0;
  double delta_col_closed = 0;
  double delta_col_numerical = 0;

  json to_json() const {
    json j;
    j["algebra"] = algebra;
    j["weight"] = weight;
    j["m"] = m;
    j["n"] = n;
    j["num_positive_roots"] = num_positive;
    j["weyl_order"] = weyl_order;
    j["stabilizer_order"] = stabilizer_order;
    j["r_col"] = r_col;
    j["delta_col_closed"] = delta_col_closed;
    j["delta_col_numerical"] = delta_col_numerical;
    j["delta_col_difference"] = delta_col_numerical - delta_col_closed;
    return j;
  }
};

inline InfoSummary run_info(const ExperimentConfig& cfg) {
  if (cfg.weights.size() != 1) throw InvalidInput("info needs exactly one weight");
  const auto p = make_problem(cfg.algebra, cfg.weights.front(), cfg.weight_basis, cfg.max_weyl_order);
  InfoSummary s;
  s.algebra = p.rs.label();
  s.weight = p.wd.spec;
  s.m = p.wd.m;
  s.n = p.wd.n;
  s.num_positive = p.rs.num_positive();
  s.weyl_order = p.orbit.group_order;
  s.stabilizer_order = p.orbit.stabilizer_order;
  s.r_col = p.r_col;
  s.delta_col_closed = p.delta_col_closed;
  s.delta_col_numerical = p.delta_col;
  return s;
}

// ---------------------------------------------------------------------------
// sample

struct TrialRecord {
  std::string weight;
  int trial = 0;
  std::uint64_t seed = 0;
  double delta = 0;
  int rank = 0;
  int r_col = 0;
  double margin = 0;
  double wall_time = 0;  ///< seconds
  std::string error;     ///< non-empty for a numerical failure

  json to_json(bool with_timing) const {
    json j;
    j["weight"] = weight;
    j["trial"] = trial;
    j["seed"] = seed;
    if (error.empty()) {
      j["delta"] = delta;
      j["rank"] = rank;
    } else {
      j["delta"] = nullptr;
      j["rank"] = nullptr;
      j["error"] = error;
    }
    j["r_col"] = r_col;
    j["margin"] = margin;
    if (with_timing) j["wall_time"] = wall_time;
    return j;
  }
};

struct Violation {
  std::string weight;
  std::string kind;  ///< "delta" or "rank"
  int trial = 0;
  std::uint64_t seed = 0;
  double value = 0;
  double baseline = 0;
};

struct WeightSummary {
  std::string weight;
  int m = 0;
  int n = 0;
  int r_col = 0;
  double delta_col = 0;
  double sample_min_delta = std::numeric_limits<double>::infinity();
  std::uint64_t argmin_seed = 0;
  int min_rank = std::numeric_limits<int>::max();
  int failures = 0;
};

struct SampleResult {
  std::vector<TrialRecord> records;
  std::vector<WeightSummary> weights;
  std::vector<Violation> violations;
  std::uint64_t master_seed = 0;
  std::string config_hash;

  int failures() const {
    int f = 0;
    for (const auto& w : weights) f += w.failures;
    return f;
  }

  json summary_json() const {
    json j;
    j["master_seed"] = master_seed;
    j["config_hash"] = config_hash;
    json ws = json::array();
    for (const auto& w : weights) {
      json e;
      e["weight"] = w.weight;
      e["m"] = w.m;
      e["n"] = w.n;
      e["r_col"] = w.r_col;
      e["collinear_delta"] = w.delta_col;
      e["sample_min_delta"] = w.sample_min_delta;
      e["argmin_seed"] = w.argmin_seed;
      e["min_rank"] = w.min_rank;
      e["numerical_failures"] = w.failures;
      ws.push_back(std::move(e));
    }
    j["weights"] = std::move(ws);
    json vs = json::array();
    for (const auto& v : violations)
      vs.push_back({{"weight", v.weight},
                    {"kind", v.kind},
                    {"trial", v.trial},
                    {"seed", v.seed},
                    {"value", v.value},
                    {"baseline", v.baseline}});
    j["violations"] = std::move(vs);
    return j;
  }
};

/// One trial: sample -> F -> Delta and rank, on its own RNG stream.
inline TrialRecord run_trial(const Problem& p, const ExperimentConfig& cfg, std::uint64_t seed,
                             int trial) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.weight = p.wd.spec;
  rec.trial = trial;
  rec.seed = seed;
  rec.r_col = p.r_col;
  Rng rng(seed);
  const auto x = sample_configuration(p.rs, rng, cfg.scale, cfg.margin_min);
  rec.margin = regularity_margin(p.rs, x).margin;
  try {
    const auto rep = evaluate(p, x);
    rec.delta = rep.delta;
    rec.rank = rep.numerical_rank;
  } catch (const NumericalFailure& e) {
    rec.error = e.what();
  }
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

inline bool violates_delta(double delta, double delta_col, double rel_tol) {
  return delta < delta_col * (1.0 - rel_tol);
}

/// Monte-Carlo sampling over every weight in cfg.weights. Records are
/// ordered by (weight, trial) regardless of thread count. If `jsonl` is
/// given, one record per line is written there.
inline SampleResult run_sample(const ExperimentConfig& cfg, std::ostream* jsonl = nullptr) {
  cfg.validate();
  if (cfg.weights.empty()) throw InvalidInput("sample needs at least one weight");
  SampleResult result;
  result.master_seed = cfg.seed;
  result.config_hash = cfg.hash();
  const auto rs = build_root_system(cfg.algebra, cfg.max_weyl_order);
  for (std::size_t w = 0; w < cfg.weights.size(); ++w) {
    const auto p =
        make_problem(rs, parse_weight_spec(cfg.weights[w], cfg.weight_basis), cfg.max_weyl_order);
    std::vector<TrialRecord> records(static_cast<std::size_t>(cfg.trials));
    parallel_for(cfg.trials, cfg.threads, [&](int t) {
      const auto seed = stream_seed(cfg.seed, trial_stream(w, static_cast<std::uint64_t>(t)));
      records[t] = run_trial(p, cfg, seed, t);
    });

    WeightSummary s;
    s.weight = p.wd.spec;
    s.m = p.wd.m;
    s.n = p.wd.n;
    s.r_col = p.r_col;
    s.delta_col = p.delta_col;
    for (const auto& r : records) {
      if (!r.error.empty()) {
        ++s.failures;
        continue;
      }
      if (r.delta < s.sample_min_delta) {
        s.sample_min_delta = r.delta;
        s.argmin_seed = r.seed;
      }
      s.min_rank = std::min(s.min_rank, r.rank);
      if (violates_delta(r.delta, p.delta_col, cfg.violation_rel_tol))
        result.violations.push_back({s.weight, "delta", r.trial, r.seed, r.delta, p.delta_col});
      if (r.rank < p.r_col)
        result.violations.push_back({s.weight, "rank", r.trial, r.seed,
                                     static_cast<double>(r.rank), static_cast<double>(p.r_col)});
    }
    if (jsonl) {
      for (const auto& r : records) *jsonl << r.to_json(cfg.record_timing).dump() << '\n';
      jsonl->flush();
      if (!*jsonl) throw std::runtime_error("failed writing trial records");
    }
    result.weights.push_back(s);
    result.records.insert(result.records.end(), records.begin(), records.end());
  }
  return result;
}

// ---------------------------------------------------------------------------
// table1

struct TableEntry {
  const char* weight;
  double sample_min_delta;  ///< reported; not reproducible bit-for-bit
  double collinear_delta;
};

/// The 26 sl(4) weights with the published sample minima and collinear values.
inline const std::vector<TableEntry>& table1_reference() {
  static const std::vector<TableEntry> rows = {
      {"[6,4,2,0]", 13697132122.474367, 1086.1160159029314},
      {"[5,3,1,0]", 519458.6316778218, 56601.99402847759},
      {"[4,2,0,0]", 61189.2491373496, 45.25483399593905},
      {"[5,3,2,0]", 2340879.6536430004, 34796.689497708816},
      {"[4,2,1,0]", 202.89393151348898, 23.99999999999951},
      {"[3,1,0,0]", 1050.3074380238, 107.33126291998899},
      {"[4,2,2,0]", 12577.200441098057, 48.00000000000035},
      {"[3,1,1,0]", 5.1901705590915075, 1.9999999999999858},
      {"[2,0,0,0]", 4.1732831617086825, 2.828427124746185},
      {"[5,4,2,0]", 1292354.6342256288, 56601.99402847781},
      {"[4,3,1,0]", 1003499.9746244224, 28676.856731517517},
      {"[3,2,0,0]", 654.9546591874636, 99.49874371066126},
      {"[4,3,2,0]", 109.5863462909002, 23.999999999999552},
      {"[3,2,1,0]", 63.03506766070143, 33.94112549695389},
      {"[2,1,0,0]", 4.184180177236805, 3.9999999999999756},
      {"[3,2,2,0]", 3.246186555208909, 1.9999999999999867},
      {"[2,1,1,0]", 34.135503300239776, 26.83281572999739},
      {"[1,0,0,0]", 1.0308769367806199, 0.999999999999999},
      {"[4,4,2,0]", 16337.905038101348, 45.25483399593978},
      {"[3,3,1,0]", 535.2649778926265, 99.49874371066095},
      {"[2,2,0,0]", 23.755650809146687, 5.656854249492361},
      {"[3,3,2,0]", 414.7813428343056, 107.33126291998886},
      {"[2,2,1,0]", 5.212788207618033, 3.999999999999977},
      {"[1,1,0,0]", 1.445559164471774, 1.4142135623730918},
      {"[2,2,2,0]", 3.7560678226481286, 2.8284271247461827},
      {"[1,1,1,0]", 1.0414407239858756, 0.999999999999999},
  };
  return rows;
}

inline std::vector<std::string> table1_weights() {
  std::vector<std::string> w;
  for (const auto& row : table1_reference()) w.emplace_back(row.weight);
  return w;
}

/// Reduced profile for continuous integration: 50 trials over these weights.
inline std::vector<std::string> ci_profile_weights() {
  return {"[1,0,0,0]", "[2,1,0,0]", "[3,1,1,0]", "[4,2,1,0]", "[6,4,2,0]"};
}
inline constexpr int kCiProfileTrials = 50;

inline constexpr const char* kTable1Header = "weight,sample_min_delta,collinear_delta,r_col,m,n";

struct Table1Row {
  std::string weight;
  double sample_min_delta = 0;
  double collinear_delta = 0;
  double reference_collinear = 0;
  int r_col = 0;
  int m = 0;
  int n = 0;
  bool violation = false;

  double collinear_rel_error() const {
    return std::abs(collinear_delta - reference_collinear) / reference_collinear;
  }
};

struct Table1Result {
  std::vector<Table1Row> rows;
  SampleResult samples;

  int violations() const {
    return static_cast<int>(std::count_if(rows.begin(), rows.end(),
                                          [](const Table1Row& r) { return r.violation; }));
  }

  std::string to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << kTable1Header << '\n';
    for (const auto& r : rows)
      os << '"' << r.weight << "\"," << r.sample_min_delta << ',' << r.collinear_delta << ','
         << r.r_col << ',' << r.m << ',' << r.n << '\n';
    return os.str();
  }
};

/// Sample-minimum and collinear Delta for the 26 sl(4) weights. cfg.algebra
/// and cfg.weights are overridden.
inline Table1Result run_table1(ExperimentConfig cfg, std::ostream* jsonl = nullptr) {
  cfg.algebra = "A3";
  cfg.weights = table1_weights();
  cfg.weight_basis = WeightBasis::bracket;
  Table1Result result;
  result.samples = run_sample(cfg, jsonl);
  const auto& ref = table1_reference();
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const auto& s = result.samples.weights[i];
    Table1Row row;
    row.weight = ref[i].weight;
    row.sample_min_delta = s.sample_min_delta;
    row.collinear_delta = s.delta_col;
    row.reference_collinear = ref[i].collinear_delta;
    row.r_col = s.r_col;
    row.m = s.m;
    row.n = s.n;
    row.violation = violates_delta(s.sample_min_delta, s.delta_col, cfg.violation_rel_tol) ||
                    s.min_rank < s.r_col;
    result.rows.push_back(row);
  }
  return result;
}

// ---------------------------------------------------------------------------
// hunt

struct RestartOutcome {
  std::uint64_t seed = 0;
  double best_delta = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  Mat coords;
};

struct HuntReport {
  std::string algebra;
  std::string weight;
  std::uint64_t master_seed = 0;
  std::string config_hash;
  double delta_col = 0;
  double best_delta = std::numeric_limits<double>::infinity();
  int best_restart = -1;
  Mat best_coords;
  std::vector<RestartOutcome> restarts;
  bool inconclusive = true;
  bool violation = false;

  double gap() const { return best_delta - delta_col; }

  json to_json() const {
    json j;
    j["algebra"] = algebra;
    j["weight"] = weight;
    j["master_seed"] = master_seed;
    j["config_hash"] = config_hash;
    j["collinear_delta"] = delta_col;
    j["inconclusive"] = inconclusive;
    j["violation"] = violation;
    if (!inconclusive) {
      j["best_delta"] = best_delta;
      j["gap"] = gap();
      j["best_restart"] = best_restart;
      json rows = json::array();
      for (int i = 0; i < best_coords.rows(); ++i)
        rows.push_back({best_coords(i, 0), best_coords(i, 1), best_coords(i, 2)});
      j["best_configuration"] = std::move(rows);
    }
    json rs = json::array();
    for (const auto& r : restarts) {
      json e;
      e["seed"] = r.seed;
      e["best_delta"] = std::isfinite(r.best_delta) ? json(r.best_delta) : json(nullptr);
      e["iterations"] = r.iterations;
      e["evaluations"] = r.evaluations;
      e["converged"] = r.converged;
      rs.push_back(std::move(e));
    }
    j["restarts"] = std::move(rs);
    return j;
  }
};

/// Minimizes Delta over the r x 3 coordinates by Nelder-Mead from seeded
/// Gaussian starts. Configurations below margin_min score +inf.
inline HuntReport run_hunt(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.weights.size() != 1) throw InvalidInput("hunt needs exactly one weight");
  const auto p = make_problem(cfg.algebra, cfg.weights.front(), cfg.weight_basis, cfg.max_weyl_order);
  HuntReport report;
  report.algebra = p.rs.label();
  report.weight = p.wd.spec;
  report.master_seed = cfg.seed;
  report.config_hash = cfg.hash();
  report.delta_col = p.delta_col;
  report.restarts.resize(static_cast<std::size_t>(cfg.restarts));

  const int r = p.rs.rank;
  auto objective = [&](const Eigen::VectorXd& flat) {
    Mat coords(r, 3);
    for (int i = 0; i < r; ++i)
      for (int c = 0; c < 3; ++c) coords(i, c) = flat[3 * i + c];
    if (!coords.allFinite()) return std::numeric_limits<double>::infinity();
    const auto x = Configuration::from_coords(p.rs, std::move(coords));
    if (regularity_margin(p.rs, x).margin < cfg.margin_min)
      return std::numeric_limits<double>::infinity();
    try {
      return evaluate(p, x).delta;
    } catch (const NumericalFailure&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  NelderMeadOptions opt;
  opt.initial_step = cfg.simplex_scale;
  opt.max_iterations = cfg.max_iterations;
  parallel_for(cfg.restarts, cfg.threads, [&](int k) {
    auto& out = report.restarts[k];
    out.seed = stream_seed(cfg.seed, static_cast<std::uint64_t>(k));
    Rng rng(out.seed);
    const auto start = sample_configuration(p.rs, rng, cfg.scale, cfg.margin_min);
    Eigen::VectorXd flat(3 * r);
    for (int i = 0; i < r; ++i)
      for (int c = 0; c < 3; ++c) flat[3 * i + c] = start.coords()(i, c);
    const auto res = nelder_mead(objective, flat, opt);
    out.best_delta = res.value;
    out.iterations = res.iterations;
    out.evaluations = res.evaluations;
    out.converged = res.converged;
    out.coords = Mat(r, 3);
    for (int i = 0; i < r; ++i)
      for (int c = 0; c < 3; ++c) out.coords(i, c) = res.x[3 * i + c];
  });

  for (int k = 0; k < cfg.restarts; ++k) {
    const auto& o = report.restarts[k];
    if (std::isfinite(o.best_delta) && o.best_delta < report.best_delta) {
      report.best_delta = o.best_delta;
      report.best_restart = k;
      report.best_coords = o.coords;
    }
  }
  report.inconclusive = report.best_restart < 0;
  report.violation = !report.inconclusive &&
                     violates_delta(report.best_delta, report.delta_col, cfg.violation_rel_tol);
  return report;
}

}  // namespace lieconf::harness
