// lieconf: command-line front end for the configuration-space experiments.
//
//   lieconf info       --algebra A3 --weight "[4,2,1,0]"
//   lieconf sample     --algebra A3 --weight "[1,1,1,0]" --trials 1000 --out trials.jsonl
//   lieconf table1     --trials 1000 --out table1.csv
//   lieconf hunt       --algebra A3 --weight "[1,0,0,0]" --restarts 20
//   lieconf invariants
//
// Exit codes: 0 success, 2 invalid input, 3 conjecture violation found,
// 4 numerical failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include "CLI11.hpp"
#include "lieconf/harness.hpp"
#include "lieconf/invariants.hpp"

namespace {

using namespace lieconf;
using harness::ExperimentConfig;
using json = io::json;

enum ExitCode : int { kOk = 0, kInvalid = 2, kViolation = 3, kNumerical = 4 };

/// Opens `path` for writing, or returns nullptr for stdout use.
std::unique_ptr<std::ofstream> open_out(const std::string& path) {
  if (path.empty() || path == "-") return nullptr;
  auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*f) throw InvalidInput("cannot open output file '" + path + "'");
  return f;
}

int cmd_info(const ExperimentConfig& cfg, const std::string& config_path) {
  const auto summary = harness::run_info(cfg);
  json out = summary.to_json();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw InvalidInput("cannot read configuration file '" + config_path + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw InvalidInput(std::string("malformed configuration JSON: ") + e.what());
    }
    const auto p = harness::make_problem(cfg.algebra, cfg.weights.front(), cfg.weight_basis,
                                         cfg.max_weyl_order);
    const auto x = io::configuration_from_json(p.rs, j.contains("coords") ? j["coords"] : j);
    const auto rep = harness::evaluate(p, x);
    out["configuration"] = io::spectral_report_to_json(rep);
    out["configuration"]["margin"] = regularity_margin(p.rs, x).margin;
  }
  std::cout << out.dump(2) << '\n';
  return kOk;
}

int cmd_sample(const ExperimentConfig& cfg) {
  auto file = open_out(cfg.out);
  std::ostream& records = file ? *file : std::cout;
  std::ostream& summary_stream = file ? std::cout : std::cerr;
  const auto result = harness::run_sample(cfg, &records);
  summary_stream << result.summary_json().dump(2) << '\n';
  if (!result.violations.empty()) {
    std::cerr << "CONJECTURE VIOLATION: " << result.violations.size()
              << " trial(s) below the collinear baseline; seeds in summary\n";
    return kViolation;
  }
  return result.failures() ? kNumerical : kOk;
}

int cmd_table1(const ExperimentConfig& cfg, const std::string& records_path) {
  auto records = open_out(records_path);
  const auto result = harness::run_table1(cfg, records.get());
  auto file = open_out(cfg.out);
  (file ? *file : std::cout) << result.to_csv();
  std::cerr << "master_seed=" << cfg.seed << " config_hash=" << cfg.hash() << '\n';
  int code = kOk;
  for (const auto& row : result.rows) {
    if (row.violation) {
      std::cerr << "VIOLATION " << row.weight << ": sample min " << row.sample_min_delta
                << " < collinear " << row.collinear_delta << '\n';
      code = kViolation;
    }
    if (row.collinear_rel_error() > 1e-6) {
      std::cerr << "MISMATCH " << row.weight << ": collinear " << row.collinear_delta
                << " vs reference " << row.reference_collinear << '\n';
      if (code == kOk) code = kNumerical;
    }
  }
  if (code == kOk && result.samples.failures()) code = kNumerical;
  return code;
}

int cmd_hunt(const ExperimentConfig& cfg) {
  const auto report = harness::run_hunt(cfg);
  auto file = open_out(cfg.out);
  (file ? *file : std::cout) << report.to_json().dump(2) << '\n';
  if (report.inconclusive) std::cerr << "hunt inconclusive: every restart hit the barrier\n";
  if (report.violation) {
    std::cerr << "CONJECTURE VIOLATION: Delta " << report.best_delta << " < collinear "
              << report.delta_col << '\n';
    return kViolation;
  }
  return kOk;
}

int cmd_invariants(const ExperimentConfig& cfg, bool quick) {
  invariants::SuiteOptions opt;
  opt.seed = cfg.seed;
  if (quick) {
    opt.hopf_directions = 10'000;
    opt.rotations = 20;
    opt.configurations = 2;
    opt.collinear_samples = 10;
    opt.as_samples = 20;
    opt.a1_samples = 100;
  }
  const auto results = invariants::run_invariants(opt);
  json report = json::array();
  bool ok = true;
  for (const auto& r : results) {
    report.push_back(r.to_json());
    ok = ok && r.passed;
  }
  auto file = open_out(cfg.out);
  (file ? *file : std::cout) << json{{"seed", cfg.seed}, {"passed", ok}, {"properties", report}}.dump(2)
                             << '\n';
  for (const auto& r : results)
    std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << " worst=" << r.worst
              << " tol=" << r.tolerance << '\n';
  return ok ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weyl-equivariant configuration maps: spectral invariants and conjecture tests"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  cfg.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::string> weights;
  std::string basis;
  std::string config_path;
  std::string records_path;
  bool quick = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--max-weyl-order", cfg.max_weyl_order, "largest Weyl group / orbit accepted")
        ->capture_default_str();
  };
  auto add_problem = [&](CLI::App* sub, bool weight_required) {
    sub->add_option("--algebra", cfg.algebra, "simple type, e.g. A3, B2, G2")->capture_default_str();
    auto* w = sub->add_option("--weight", weights, "weight: [a1,...,aN] or fund:c1,...,cr (repeatable)")
                  ->allow_extra_args(false);
    if (weight_required) w->required();
    sub->add_option("--weight-basis", basis, "how to read bare weight lists")
        ->check(CLI::IsMember({"bracket", "fundamental"}));
  };
  auto add_sampling = [&](CLI::App* sub) {
    sub->add_option("--trials", cfg.trials, "configurations per weight")->capture_default_str();
    sub->add_option("--scale", cfg.scale, "standard deviation of the Gaussian entries")
        ->capture_default_str();
    sub->add_option("--margin-min", cfg.margin_min, "minimum regularity margin of samples")
        ->capture_default_str();
    sub->add_option("--violation-tol", cfg.violation_rel_tol,
                    "relative slack below the collinear value before flagging")
        ->capture_default_str();
  };

  auto* info = app.add_subcommand("info", "weight data, orbit sizes and collinear baseline");
  add_problem(info, true);
  add_common(info);
  info->add_option("--config", config_path, "also evaluate Delta at a saved configuration (JSON)");

  auto* sample = app.add_subcommand("sample", "Monte-Carlo sampling of Delta and rank");
  add_problem(sample, true);
  add_common(sample);
  add_sampling(sample);
  sample->add_flag("--record-timing", cfg.record_timing, "add wall_time to each record");

  auto* table1 = app.add_subcommand("table1", "sample-minimum vs collinear Delta for 26 sl(4) weights");
  add_common(table1);
  add_sampling(table1);
  table1->add_option("--records", records_path, "also write every trial as JSONL");

  auto* hunt = app.add_subcommand("hunt", "Nelder-Mead search for small Delta");
  add_problem(hunt, true);
  add_common(hunt);
  hunt->add_option("--restarts", cfg.restarts, "independent seeded restarts")->capture_default_str();
  hunt->add_option("--max-iterations", cfg.max_iterations)->capture_default_str();
  hunt->add_option("--simplex-scale", cfg.simplex_scale)->capture_default_str();
  hunt->add_option("--scale", cfg.scale, "standard deviation of the starting point")
      ->capture_default_str();
  hunt->add_option("--margin-min", cfg.margin_min, "barrier: smaller margins score +inf")
      ->capture_default_str();
  hunt->add_option("--violation-tol", cfg.violation_rel_tol)->capture_default_str();

  auto* inv = app.add_subcommand("invariants", "run the cross-module property suites");
  add_common(inv);
  inv->add_flag("--quick", quick, "reduced sample counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  cfg.weights = weights;
  if (basis == "bracket") cfg.weight_basis = WeightBasis::bracket;
  if (basis == "fundamental") cfg.weight_basis = WeightBasis::fundamental;

  try {
    cfg.validate();
    if (*info) return cmd_info(cfg, config_path);
    if (*sample) return cmd_sample(cfg);
    if (*table1) return cmd_table1(cfg, records_path);
    if (*hunt) return cmd_hunt(cfg);
    if (*inv) return cmd_invariants(cfg, quick);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
