// chowliu: sampling, learning, testing and experiment front end.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "chowliu/chowliu.hpp"
#include "chowliu/citest.hpp"
#include "chowliu/estimation.hpp"
#include "chowliu/hardinstances.hpp"
#include "chowliu/harness.hpp"
#include "chowliu/serialize.hpp"

using namespace chowliu;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

SampleSet load(const std::string& path, std::optional<std::size_t> k) {
  try {
    return load_samples(path, k);
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

int cmd_sample(const std::string& model_path, std::size_t count, std::uint64_t seed, const std::string& out,
               bool binary) {
  const auto j = read_json_file(model_path);
  SampleSet s = j.contains("parents") ? sample(tree_model_from_json(j), count, seed)
                                      : sample(dense_joint_from_json(j), count, seed);
  if (binary) {
    if (out.empty() || out == "-") throw UsageError("--binary needs --out");
    save_samples(out, s, true);
  } else {
    std::ostringstream os;
    write_samples_csv(os, s);
    emit(out, os.str());
  }
  return 0;
}

struct LearnArgs {
  std::string samples;
  std::string mode = "full";
  std::string tree;
  Node root = 0;
  std::optional<std::size_t> k;
  std::string out;
  int threads = 0;
};

int cmd_learn(const LearnArgs& a) {
  const auto start = std::chrono::steady_clock::now();
  const auto s = load(a.samples, a.k);
  if (a.root >= s.n()) throw UsageError("--root out of range");
  Json result;
  if (a.mode == "structure") {
    result = to_json(chow_liu_structure(s, a.threads));
  } else if (a.mode == "params") {
    if (a.tree.empty()) throw UsageError("params mode needs --tree");
    const auto tj = read_json_file(a.tree);
    // Either an UndirectedTree document or a TreeModel whose structure is reused.
    const auto rooted = tj.contains("parents") ? tree_model_from_json(tj).tree
                                               : RootedTree::orient(undirected_tree_from_json(tj), a.root);
    if (rooted.n() != s.n()) throw std::runtime_error("tree has " + std::to_string(rooted.n()) +
                                                      " nodes but samples have " + std::to_string(s.n()) + " columns");
    result = to_json(learn_parameters(s, rooted));
  } else if (a.mode == "full") {
    const auto t = chow_liu_structure(s, a.threads);
    result = to_json(learn_parameters(s, RootedTree::orient(t, a.root)));
  } else {
    throw UsageError("--mode must be structure, params or full");
  }
  emit(a.out, dump(result));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::fprintf(stderr, "N=%zu n=%zu k=%zu elapsed=%.3fs\n", s.size(), s.n(), s.k(), secs);
  return 0;
}

struct CitestArgs {
  std::string samples;
  std::string config;
  std::optional<double> epsilon, delta, c_sample, c_decision;
  std::optional<std::size_t> k;
};

int cmd_citest(const CitestArgs& a) {
  TesterConfig cfg;
  if (!a.config.empty()) cfg = tester_config_from_json(read_json_file(a.config));
  if (a.epsilon) cfg.epsilon = *a.epsilon;
  if (a.delta) cfg.delta = *a.delta;
  if (a.k) cfg.k = *a.k;
  if (a.c_sample) cfg.c_sample = *a.c_sample;
  if (a.c_decision) cfg.c_decision = *a.c_decision;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto s = load(a.samples, cfg.k);
  if (s.empty()) throw std::runtime_error(a.samples + ": no samples");
  TestVerdict v;
  if (s.n() == 3) {
    v = test_conditional_independence(s, cfg);
  } else if (s.n() == 2) {
    v = test_independence(s, cfg);
  } else {
    throw std::runtime_error(a.samples + ": expected 2 or 3 columns, got " + std::to_string(s.n()));
  }
  Json j = to_json(v);
  j["test"] = s.n() == 3 ? "conditional" : "unconditional";
  j["config"] = to_json(cfg);
  std::cout << dump(j);
  return 0;
}

int cmd_experiment(const std::string& config, const std::string& out, const std::string& summary,
                   std::optional<int> threads) {
  auto cfg = experiment_config_from_json(read_json_file(config));
  if (!out.empty()) cfg.output = out == "-" ? "" : out;
  if (threads) cfg.threads = *threads;
  const auto rows = run_experiment(cfg);
  if (cfg.output.empty()) write_csv(std::cout, rows);
  if (!summary.empty()) {
    Json j;
    j["kind"] = to_string(cfg.kind);
    j["seed"] = cfg.seed;
    if (cfg.kind == ExperimentKind::SeparationCurve) {
      const auto pts = separation_points(rows, cfg.target_success);
      Json arr = Json::array();
      for (const auto& p : pts) {
        arr.push_back({{"n", p.n}, {"k", p.k}, {"epsilon", p.epsilon}, {"grid_N_star", p.grid_n_star},
                       {"interpolated_N_star", p.interpolated_n_star}});
      }
      j["regime"] = to_string(cfg.regime);
      j["points"] = std::move(arr);
      try {
        j["slope_interpolated"] = separation_slope(pts, true);
        j["slope_grid"] = separation_slope(pts, false);
      } catch (const std::invalid_argument&) {
        j["slope_interpolated"] = nullptr;
        j["slope_grid"] = nullptr;
      }
    }
    j["rows"] = rows.size();
    emit(summary, dump(j));
  }
  return 0;
}

int cmd_verify(const std::string& regime_name, double eps) {
  Regime regime;
  try {
    regime = parse_regime(regime_name);
    TripleFamily{regime, 1, eps}.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Json j;
  j["regime"] = to_string(regime);
  j["epsilon"] = eps;
  bool pass = true;
  std::string failing;
  if (regime == Regime::Realizable) {
    const auto f = verify_realizable_facts(eps);
    j["hellinger_sq"] = f.hellinger_sq;
    j["hellinger_sq_expected"] = eps / 2.0;
    j["mi_gap"] = f.mi_gap;
    if (std::abs(f.hellinger_sq - eps / 2.0) > 1e-12) {
      pass = false;
      failing = "hellinger_sq";
    } else if (!(f.mi_gap > 0.0)) {
      pass = false;
      failing = "mi_gap";
    }
  } else {
    const auto f = verify_nonrealizable_facts(eps);
    j["kl_r1_r2"] = f.kl_r1_r2;
    j["mi_gap"] = f.mi_gap;
    j["mi_gap_threshold"] = 0.4 * eps;
    if (!(f.mi_gap >= 0.4 * eps)) {
      pass = false;
      failing = "mi_gap";
    } else if (!(f.kl_r1_r2 > 0.0)) {
      pass = false;
      failing = "kl_r1_r2";
    }
  }
  j["pass"] = pass;
  if (!pass) j["failing"] = failing;
  std::cout << dump(j);
  if (!pass) std::fprintf(stderr, "threshold failed: %s\n", failing.c_str());
  return pass ? 0 : kExitFail;
}

struct CalibrateArgs {
  std::string what = "citest";
  double epsilon = 0.1;
  double delta = 0.1;
  std::size_t k = 2;
  std::size_t n = 8;
  std::uint64_t samples = 100;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  double c_decision = 0.5;
  double floor = -1.0;
  std::string out;
};

int cmd_calibrate(const CalibrateArgs& a) {
  Json j;
  if (a.what == "citest") {
    if (a.trials < 100) throw UsageError("calibration needs --trials >= 100");
    TesterConfig cfg{a.epsilon, a.delta, a.k, 1.0, a.c_decision};
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const auto r = calibrate(cfg, a.trials, a.seed);
    j = to_json(r.config);
    j["samples"] = r.samples;
    Json rates = Json::array();
    for (const auto& c : r.rates) {
      rates.push_back({{"case", c.name}, {"dependent", c.dependent}, {"success_rate", c.success_rate}});
    }
    j["rates"] = std::move(rates);
  } else if (a.what == "add1") {
    const double fl = a.floor < 0 ? 0.0 : a.floor;
    j["add1_constant"] = calibrate_add1_constant(a.k, a.samples, a.delta, a.trials, a.seed, fl);
    j["k"] = a.k;
    j["N"] = a.samples;
    j["delta"] = a.delta;
    j["floor"] = fl;
  } else if (a.what == "fixed-structure") {
    const double fl = a.floor < 0 ? 0.05 : a.floor;
    const double c = calibrate_fixed_structure_constant(a.n, a.k, a.epsilon, a.delta, a.trials, a.seed, fl);
    j["fixed_structure_constant"] = c;
    j["N"] = required_samples_fixed_structure(c, a.n, a.k, a.epsilon, a.delta);
    j["n"] = a.n;
    j["k"] = a.k;
    j["epsilon"] = a.epsilon;
    j["delta"] = a.delta;
    j["floor"] = fl;
  } else {
    throw UsageError("--what must be citest, add1 or fixed-structure");
  }
  j["seed"] = a.seed;
  j["trials"] = a.trials;
  emit(a.out, dump(j));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chow-Liu tree learning, conditional independence testing and sample-complexity experiments"};
  app.require_subcommand(1);

  std::string model_path, out;
  std::size_t count = 0;
  std::uint64_t seed = 1;
  bool binary = false;
  auto* sample_cmd = app.add_subcommand("sample", "Draw samples from a TreeModel or DenseJoint JSON");
  sample_cmd->add_option("--model", model_path, "model JSON")->required();
  sample_cmd->add_option("--count,-N", count, "number of samples")->required();
  sample_cmd->add_option("--seed", seed, "RNG seed");
  sample_cmd->add_option("--out,-o", out, "output path (default stdout)");
  sample_cmd->add_flag("--binary", binary, "write the CLS1 binary format");

  LearnArgs la;
  std::size_t learn_k = 0;
  auto* learn_cmd = app.add_subcommand("learn", "Learn a tree structure and/or parameters from samples");
  learn_cmd->add_option("--samples,-s", la.samples, "CSV or CLS1 sample file")->required();
  learn_cmd->add_option("--mode", la.mode, "structure | params | full")
      ->check(CLI::IsMember({"structure", "params", "full"}));
  learn_cmd->add_option("--tree", la.tree, "tree JSON for params mode");
  learn_cmd->add_option("--root", la.root, "root node for the learned model");
  learn_cmd->add_option("--k", learn_k, "alphabet size (default: inferred)");
  learn_cmd->add_option("--out,-o", la.out, "output path (default stdout)");
  learn_cmd->add_option("--threads", la.threads, "OpenMP threads (0 = default)");

  CitestArgs ca;
  auto* citest_cmd = app.add_subcommand("citest", "Conditional (3 columns) or unconditional (2 columns) independence test");
  citest_cmd->add_option("--samples,-s", ca.samples, "CSV or CLS1 sample file")->required();
  citest_cmd->add_option("--config", ca.config, "TesterConfig JSON");
  citest_cmd->add_option("--epsilon", ca.epsilon);
  citest_cmd->add_option("--delta", ca.delta);
  citest_cmd->add_option("--k", ca.k);
  citest_cmd->add_option("--c-sample", ca.c_sample);
  citest_cmd->add_option("--c-decision", ca.c_decision);

  std::string exp_config, exp_out, exp_summary;
  std::optional<int> exp_threads;
  auto* exp_cmd = app.add_subcommand("experiment", "Run an experiment config and write CSV rows");
  exp_cmd->add_option("--config,-c", exp_config, "experiment JSON")->required();
  exp_cmd->add_option("--out,-o", exp_out, "CSV path; overrides the config ('-' for stdout)");
  exp_cmd->add_option("--summary", exp_summary, "write a JSON summary (N* and slopes for separation curves)");
  exp_cmd->add_option("--threads", exp_threads, "OpenMP threads (0 = default)");

  std::string regime;
  double verify_eps = 0.0;
  auto* verify_cmd = app.add_subcommand("verify-facts", "Check the hard-instance facts for one epsilon");
  verify_cmd->add_option("--regime", regime, "realizable | nonrealizable")->required();
  verify_cmd->add_option("--epsilon", verify_eps)->required();

  CalibrateArgs cal;
  auto* cal_cmd = app.add_subcommand("calibrate", "Fit a sample-size constant by simulation");
  cal_cmd->add_option("--what", cal.what, "citest | add1 | fixed-structure");
  cal_cmd->add_option("--epsilon", cal.epsilon);
  cal_cmd->add_option("--delta", cal.delta);
  cal_cmd->add_option("--k", cal.k);
  cal_cmd->add_option("--n", cal.n, "variables (fixed-structure)");
  cal_cmd->add_option("--N", cal.samples, "sample size (add1)");
  cal_cmd->add_option("--trials", cal.trials);
  cal_cmd->add_option("--seed", cal.seed);
  cal_cmd->add_option("--c-decision", cal.c_decision);
  cal_cmd->add_option("--floor", cal.floor, "Dirichlet floor for random models");
  cal_cmd->add_option("--out,-o", cal.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sample_cmd) return cmd_sample(model_path, count, seed, out, binary);
    if (*learn_cmd) {
      if (learn_k != 0) la.k = learn_k;
      return cmd_learn(la);
    }
    if (*citest_cmd) return cmd_citest(ca);
    if (*exp_cmd) return cmd_experiment(exp_config, exp_out, exp_summary, exp_threads);
    if (*verify_cmd) return cmd_verify(regime, verify_eps);
    if (*cal_cmd) return cmd_calibrate(cal);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
  return kExitUsage;
}
