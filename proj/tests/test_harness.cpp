#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "lieconf/harness.hpp"
#include "lieconf/invariants.hpp"

using namespace lieconf;
using namespace lieconf::harness;

namespace {

ExperimentConfig small_config(std::vector<std::string> weights, int trials = 20) {
  ExperimentConfig cfg;
  cfg.algebra = "A3";
  cfg.weights = std::move(weights);
  cfg.trials = trials;
  cfg.seed = 12345;
  cfg.threads = 1;
  return cfg;
}

std::string jsonl_of(const ExperimentConfig& cfg) {
  std::ostringstream os;
  run_sample(cfg, &os);
  return os.str();
}

}  // namespace

TEST(Seeds, StreamsAreDistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t g = 0; g < 4; ++g)
    for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(stream_seed(99, trial_stream(g, t)));
  EXPECT_EQ(seen.size(), 4000u);
  EXPECT_EQ(stream_seed(99, 5), stream_seed(99, 5));
  EXPECT_NE(stream_seed(99, 5), stream_seed(100, 5));
}

TEST(ConfigHash, IgnoresOutputAndThreads) {
  auto a = small_config({"[1,0,0,0]"});
  auto b = a;
  b.out = "elsewhere.jsonl";
  b.threads = 8;
  EXPECT_EQ(a.hash(), b.hash());
  b.seed += 1;
  EXPECT_NE(a.hash(), b.hash());
}

TEST(RunInfo, Examples) {
  {
    const auto s = run_info(small_config({"[1,0,0,0]"}));
    EXPECT_EQ(s.m, 3);
    EXPECT_EQ(s.n, 4);
    EXPECT_EQ(s.r_col, 4);
    EXPECT_EQ(s.num_positive, 6);
    EXPECT_EQ(s.weyl_order, 24u);
    EXPECT_EQ(s.stabilizer_order, 6u);
    EXPECT_NEAR(s.delta_col_numerical, 1.0, 1e-12);
    EXPECT_NEAR(s.delta_col_closed, 1.0, 1e-12);
  }
  {
    const auto s = run_info(small_config({"[6,4,2,0]"}));
    EXPECT_EQ(s.m, 20);
    EXPECT_EQ(s.n, 24);
  }
  EXPECT_NEAR(run_info(small_config({"[4,2,1,0]"})).delta_col_numerical, 24.0, 1e-9);
  EXPECT_THROW(run_info(small_config({})), InvalidInput);
  EXPECT_THROW(run_info(small_config({"[0,1,0,0]"})), InvalidInput);
}

TEST(RunSample, SingleTrial) {
  const auto r = run_sample(small_config({"[1,1,0,0]"}, 1));
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].trial, 0);
  EXPECT_EQ(r.records[0].r_col, 5);
  EXPECT_GT(r.records[0].margin, 0);
}

TEST(RunSample, DeterministicAndThreadIndependent) {
  auto cfg = small_config({"[1,1,1,0]", "[2,1,0,0]"}, 30);
  const auto first = jsonl_of(cfg);
  EXPECT_EQ(first, jsonl_of(cfg));
  cfg.threads = 4;
  EXPECT_EQ(first, jsonl_of(cfg));
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 60);
  // Keys in record order; no wall_time unless requested.
  const auto line = first.substr(0, first.find('\n'));
  const auto j = json::parse(line);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"weight", "trial", "seed", "delta", "rank", "r_col", "margin"}));
  cfg.record_timing = true;
  EXPECT_NE(jsonl_of(cfg).find("\"wall_time\""), std::string::npos);
}

TEST(RunSample, SupportsConjectureOnSmallWeights) {
  const auto r = run_sample(small_config({"[1,1,1,0]", "[1,0,0,0]", "[2,0,0,0]"}, 200));
  EXPECT_TRUE(r.violations.empty());
  for (const auto& w : r.weights) {
    EXPECT_GE(w.sample_min_delta, w.delta_col);
    EXPECT_GE(w.min_rank, w.r_col);
    EXPECT_EQ(w.failures, 0);
  }
  const auto summary = r.summary_json();
  EXPECT_EQ(summary["master_seed"], 12345u);
  EXPECT_EQ(summary["weights"].size(), 3u);
}

TEST(RunSample, Validation) {
  auto cfg = small_config({"[1,0,0,0]"}, 0);
  EXPECT_THROW(run_sample(cfg), InvalidInput);
  cfg = small_config({}, 5);
  EXPECT_THROW(run_sample(cfg), InvalidInput);
  cfg = small_config({"[1,0,0,0]"}, 5);
  cfg.scale = -1;
  EXPECT_THROW(run_sample(cfg), InvalidInput);
}

TEST(RunTable1, ShapeAndCollinearColumn) {
  auto cfg = small_config({}, 5);
  cfg.threads = 2;
  const auto t = run_table1(cfg);
  ASSERT_EQ(t.rows.size(), 26u);
  for (const auto& row : t.rows) EXPECT_LT(row.collinear_rel_error(), 1e-6) << row.weight;
  const auto by_weight = [&](const std::string& w) {
    return *std::find_if(t.rows.begin(), t.rows.end(), [&](const Table1Row& r) { return r.weight == w; });
  };
  EXPECT_NEAR(by_weight("[2,0,0,0]").collinear_delta, 2.828427124746185, 1e-12);
  EXPECT_NEAR(by_weight("[3,1,1,0]").collinear_delta, 2.0, 1e-12);
  const auto csv = t.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "weight,sample_min_delta,collinear_delta,r_col,m,n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 27);
  EXPECT_NE(csv.find("\"[6,4,2,0]\","), std::string::npos);
}

TEST(NelderMead, Rosenbrock) {
  auto f = [](const Eigen::VectorXd& p) {
    return 100 * std::pow(p[1] - p[0] * p[0], 2) + std::pow(1 - p[0], 2);
  };
  NelderMeadOptions opt;
  opt.max_iterations = 5000;
  opt.f_tolerance = 1e-20;
  const auto r = nelder_mead(f, Eigen::Vector2d(-1.2, 1.0), opt);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_NEAR(r.x[1], 1.0, 1e-4);
}

TEST(NelderMead, BarrierIsNeverCrossed) {
  // Minimum of (x-2)^2 subject to x <= 1 via +inf barrier.
  auto f = [](const Eigen::VectorXd& p) {
    return p[0] > 1 ? std::numeric_limits<double>::infinity() : (p[0] - 2) * (p[0] - 2);
  };
  const auto r = nelder_mead(f, Eigen::VectorXd::Constant(1, -3.0));
  EXPECT_LE(r.x[0], 1.0);
  EXPECT_NEAR(r.x[0], 1.0, 1e-4);
  EXPECT_TRUE(std::isfinite(r.value));
}

TEST(RunHunt, A1IsConstant) {
  ExperimentConfig cfg;
  cfg.algebra = "A1";
  cfg.weights = {"fund:1"};
  cfg.restarts = 3;
  cfg.max_iterations = 200;
  const auto rep = run_hunt(cfg);
  EXPECT_FALSE(rep.inconclusive);
  EXPECT_NEAR(rep.best_delta, 1.0, 1e-10);
  EXPECT_NEAR(rep.gap(), 0.0, 1e-10);
  EXPECT_FALSE(rep.violation);
}

TEST(RunHunt, A3FirstFundamentalAndDeterminism) {
  auto cfg = small_config({"[1,0,0,0]"});
  cfg.restarts = 4;
  cfg.max_iterations = 400;
  const auto a = run_hunt(cfg);
  EXPECT_GE(a.best_delta, 1.0 - 1e-6);
  EXPECT_FALSE(a.violation);
  cfg.threads = 3;
  const auto b = run_hunt(cfg);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_EQ(a.to_json()["best_configuration"].size(), 3u);
  EXPECT_THROW(run_hunt(small_config({"[1,0,0,0]", "[2,0,0,0]"})), InvalidInput);
}

TEST(Io, ConfigurationAndMatrixRoundTrip) {
  const auto p = make_problem("A3", "[2,1,0,0]");
  Rng rng(77);
  const auto x = sample_configuration(p.rs, rng);
  const auto j = io::configuration_to_json(x);
  ASSERT_EQ(j.size(), 3u);
  const auto y = io::configuration_from_json(p.rs, json::parse(j.dump()));
  EXPECT_EQ(x.coords(), y.coords());

  auto F = assemble_F(p.rs, p.wd, p.orbit, x);
  F.provenance = "seed=77";
  const auto G = io::conf_matrix_from_json(json::parse(io::conf_matrix_to_json(F).dump()));
  EXPECT_EQ(G.m, F.m);
  EXPECT_EQ(G.n, F.n);
  EXPECT_EQ(G.provenance, "seed=77");
  EXPECT_EQ(G.entries, F.entries);

  EXPECT_THROW(io::configuration_from_json(p.rs, json::parse("[[1,2],[3,4],[5,6]]")), InvalidInput);
  EXPECT_THROW(io::configuration_from_json(p.rs, json::parse("{\"a\":1}")), InvalidInput);
  const auto rep = io::spectral_report_to_json(evaluate(p, x));
  for (const char* key : {"singular_values", "numerical_rank", "r_col", "delta", "weighted_diagonal"})
    EXPECT_TRUE(rep.contains(key)) << key;
}

TEST(Invariants, QuickSuitePasses) {
  invariants::SuiteOptions opt;
  opt.hopf_directions = 2000;
  opt.rotations = 10;
  opt.configurations = 2;
  opt.collinear_samples = 10;
  opt.as_samples = 10;
  opt.a1_samples = 50;
  for (const auto& r : invariants::run_invariants(opt))
    EXPECT_TRUE(r.passed) << r.name << " worst=" << r.worst << " tol=" << r.tolerance;
}
