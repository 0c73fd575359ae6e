// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "chowliu/chowliu.hpp"
#include "chowliu/citest.hpp"
#include "chowliu/estimation.hpp"
#include "chowliu/hardinstances.hpp"
#include "chowliu/harness.hpp"
#include "chowliu/info.hpp"
#include "chowliu/random.hpp"
#include "chowliu/serialize.hpp"

using namespace chowliu;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double entropy_of(const DenseJoint& p, std::vector<std::size_t> vars) {
  return entropy(p.marginal(vars));
}

double pair_mi(const DenseJoint& p, std::size_t u, std::size_t v) {
  const std::vector<std::size_t> vars{u, v};
  return mutual_information(PairTable(p.k(), p.marginal(vars)));
}

// 1. D(P || P_T) = J_P - wt_P(T)
Outcome weight_identity() {
  Rng rng(derive_seed(1001, 1));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 3 + rng.below(3), k = 2 + rng.below(2);
    const auto p = random_dense_joint(n, k, 0.0, rng);
    double j = -entropy(p.probs());
    for (std::size_t v = 0; v < n; ++v) j += entropy_of(p, {v});
    for (int t = 0; t < 5; ++t) {
      const auto tree = random_tree(n, rng);
      double wt = 0.0;
      for (const auto& e : tree.edges()) wt += pair_mi(p, e.u, e.v);
      const auto proj = project_onto_tree(p, tree, rng.below(n));
      const double kl = kl_divergence(p, to_dense(proj.model));
      worst = std::max(worst, std::abs(kl - (j - wt)));
    }
  }
  return {worst <= 1e-9, fmt("max |D - (J - wt)| = %.3g over 500 cases", worst)};
}

// 2. KL decomposition against brute force
Outcome decomposition() {
  Rng rng(derive_seed(1001, 2));
  double worst = 0.0, min_cond = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 3 + rng.below(3), k = 2 + rng.below(2);
    const auto p = random_dense_joint(n, k, 0.0, rng);
    const auto m = random_tree_model(n, k, 0.02, rng);
    const auto d = kl_decomposition(p, m);
    worst = std::max(worst, std::abs(d.total - kl_divergence(p, to_dense(m))));
    min_cond = std::min(min_cond, d.conditional_term);
  }
  return {worst <= 1e-9 && min_cond >= -1e-12,
          fmt("max |total - KL| = %.3g, min conditional term = %.3g", worst, min_cond)};
}

// 3. f identity, sandwich and f <= 1
Outcome f_identity() {
  Rng rng(derive_seed(1001, 3));
  double worst = 0.0, fmax = 0.0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t k = 2 + rng.below(5);
    const auto p = random_dense_joint(2, k, 0.0, rng);
    const PairTable t(k, std::vector<double>(p.probs().begin(), p.probs().end()));
    worst = std::max(worst, std::abs(mi_via_f(t) - mutual_information(t)));
    for (std::size_t x = 0; x < k; ++x)
      for (std::size_t y = 0; y < k; ++y) fmax = std::max(fmax, f_kl(t.delta(x, y), t.px()[x] * t.py()[y]));
  }
  std::size_t violations = 0;
  for (int bi = 0; bi < 200; ++bi) {
    const double b = (bi + 1) / 200.0;
    for (int ai = 0; ai < 200; ++ai) {
      const double a = -b + ai / 199.0;
      if (a > 1.0 - b) continue;
      const double f = f_kl(a, b);
      const auto g = f_bounds(a, b);
      const double slack = 1e-12 * std::max(1.0, g.g);
      if (f < g.g / 3.0 - slack || f > g.g + slack) ++violations;
    }
  }
  return {worst <= 1e-10 && violations == 0 && fmax <= 1.0,
          fmt("max |MI_f - MI_H| = %.3g, sandwich violations = %zu, max f = %.4f", worst, violations, fmax)};
}

// 4. I(X;Y) - I(X;Z) = I(X;Y|Z) - I(X;Z|Y)
Outcome chain_rule() {
  Rng rng(derive_seed(1001, 4));
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = i % 2 == 0 ? 2 : 3;
    const auto p = random_dense_joint(3, k, 0.0, rng);
    const auto g = chain_rule_gap(TripleTable(k, std::vector<double>(p.probs().begin(), p.probs().end())));
    worst = std::max(worst, std::abs(g.lhs - g.rhs));
  }
  return {worst <= 1e-10, fmt("max |lhs - rhs| = %.3g over 1000 triples", worst)};
}

std::vector<Node> tree_path(const UndirectedTree& t, Node from, Node to) {
  const auto adj = t.adjacency();
  std::vector<Node> prev(t.n(), kNoParent);
  std::vector<Node> stack{from};
  prev[from] = from;
  while (!stack.empty()) {
    const Node u = stack.back();
    stack.pop_back();
    for (Node v : adj[u])
      if (prev[v] == kNoParent) {
        prev[v] = u;
        stack.push_back(v);
      }
  }
  std::vector<Node> path{to};
  while (path.back() != from) path.push_back(prev[path.back()]);
  return path;
}

// 5. CMI zero for every w strictly inside the u-v path
Outcome verma_pearl() {
  Rng rng(derive_seed(1001, 5));
  double worst = 0.0;
  std::size_t triples = 0;
  for (int i = 0; i < 50; ++i) {
    const auto m = random_tree_model(8, 2, 0.0, rng);
    const auto p = to_dense(m);
    const auto skel = m.tree.skeleton();
    for (Node u = 0; u < 8; ++u)
      for (Node v = u + 1; v < 8; ++v) {
        const auto path = tree_path(skel, u, v);
        for (std::size_t j = 1; j + 1 < path.size(); ++j) {
          const std::vector<std::size_t> vars{u, v, path[j]};
          worst = std::max(worst, conditional_mi(TripleTable(2, p.marginal(vars))));
          ++triples;
        }
      }
  }
  return {worst <= 1e-10, fmt("max CMI = %.3g over %zu path triples", worst, triples)};
}

// Labeled tree from a Pruefer sequence.
std::vector<Edge> pruefer_tree(const std::vector<Node>& seq, std::size_t n) {
  std::vector<std::size_t> degree(n, 1);
  for (Node s : seq) ++degree[s];
  std::vector<Edge> edges;
  for (Node s : seq) {
    Node leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    edges.push_back(make_edge(leaf, s));
    --degree[leaf];
    --degree[s];
  }
  Node a = n, b = n;
  for (Node v = 0; v < n; ++v)
    if (degree[v] == 1) (a == n ? a : b) = v;
  edges.push_back(make_edge(a, b));
  return edges;
}

// 6. Kruskal against all n^(n-2) labeled trees
Outcome mst_oracle() {
  Rng rng(derive_seed(1001, 6));
  std::size_t mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 2 + rng.below(5);
    MIMatrix w(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) w.set(a, b, rng.uniform() < 0.2 ? 0.5 : rng.uniform());
    const double kruskal = tree_weight(w, max_weight_spanning_tree(w));
    double best = -1.0;
    std::vector<Node> seq(n - 2, 0);
    while (true) {
      double sum = 0.0;
      for (const auto& e : pruefer_tree(seq, n)) sum += w(e.u, e.v);
      best = std::max(best, sum);
      std::size_t pos = 0;
      while (pos < seq.size() && ++seq[pos] == n) seq[pos++] = 0;
      if (pos == seq.size()) break;
    }
    // Kruskal and enumeration add the same n-1 doubles in possibly different orders.
    if (std::abs(kruskal - best) > 1e-12) ++mismatches;
  }
  return {mismatches == 0, fmt("%zu of 200 weight matrices disagree", mismatches)};
}

// 7. exchange pairing
Outcome exchange() {
  Rng rng(derive_seed(1001, 7));
  std::size_t bad = 0, swaps = 0;
  for (int i = 0; i < 100; ++i) {
    const auto t1 = random_tree(8, rng), t2 = random_tree(8, rng);
    std::set<Edge> only1, only2;
    for (const auto& e : t1.edges())
      if (!t2.contains(e)) only1.insert(e);
    for (const auto& e : t2.edges())
      if (!t1.contains(e)) only2.insert(e);
    const auto pairs = exchange_pairing(t1, t2);
    std::set<Edge> seen1, seen2;
    bool ok = pairs.size() == only1.size();
    for (const auto& [e, f] : pairs) {
      ++swaps;
      ok = ok && only1.count(e) && only2.count(f) && seen1.insert(e).second && seen2.insert(f).second;
      std::vector<Edge> swapped;
      for (const auto& g : t1.edges())
        if (g != e) swapped.push_back(g);
      swapped.push_back(f);
      ok = ok && is_spanning_tree(8, swapped);
    }
    ok = ok && seen1 == only1 && seen2 == only2;
    if (!ok) ++bad;
  }
  return {bad == 0, fmt("%zu of 100 pairs invalid, %zu swaps checked", bad, swaps)};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 8. realizable recovery
Outcome realizable_recovery() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::RealizableRecovery;
  cfg.grid = {{10, 2, 0.05, 5000}};
  cfg.trials = 100;
  cfg.seed = derive_seed(1001, 8);
  cfg.floor = 0.05;
  const auto rows = run_experiment(cfg);
  const double secs = seconds_since(t0);
  return {rows[0].success_rate >= 0.9 && secs < 300,
          fmt("success rate %.2f, %.1f s", rows[0].success_rate, secs)};
}

// 9. separation slopes
Outcome separation() {
  const auto t0 = std::chrono::steady_clock::now();
  double slopes[2], grid_slopes[2];
  for (int r = 0; r < 2; ++r) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::SeparationCurve;
    cfg.regime = r == 0 ? Regime::Realizable : Regime::NonRealizable;
    cfg.tolerance_factor = r == 0 ? 1.0 : 0.4;
    for (double e : {0.05, 0.1, 0.2}) cfg.grid.push_back({60, 2, e, 0});
    cfg.trials = 200;
    cfg.seed = derive_seed(1001, 9, static_cast<std::uint64_t>(r));
    const auto pts = separation_points(run_experiment(cfg), cfg.target_success);
    slopes[r] = separation_slope(pts, true);
    grid_slopes[r] = separation_slope(pts, false);
  }
  const double secs = seconds_since(t0);
  return {slopes[0] <= 1.4 && slopes[1] >= 1.6 && secs < 900,
          fmt("slope realizable %.2f (grid %.2f), non-realizable %.2f (grid %.2f), %.1f s", slopes[0],
              grid_slopes[0], slopes[1], grid_slopes[1], secs)};
}

// 10. CI tester with calibrated c_sample, checked on fresh trials
Outcome ci_tester() {
  std::string detail;
  bool pass = true;
  for (std::size_t k : {2, 3}) {
    TesterConfig cfg{0.1, 0.1, k, 1.0, 0.5};
    const auto cal = calibrate(cfg, 200, derive_seed(1001, 10, k));
    const auto family = calibration_family(k, cfg.epsilon);
    const auto n = required_samples_cmi(cal.config);
    double completeness = 0.0, soundness = 0.0;
    for (std::size_t c = 0; c < family.size(); ++c) {
      const bool dependent = family[c].true_cmi > 1e-12;
      std::size_t failures = 0;
      for (std::size_t t = 0; t < 200; ++t) {
        const auto s = sample(family[c].joint, n, derive_seed(2002, 10 * k + c, t));
        const bool said_dependent = test_conditional_independence(s, cal.config).verdict == Verdict::Dependent;
        if (said_dependent != dependent) ++failures;
      }
      const double rate = failures / 200.0;
      (dependent ? soundness : completeness) = std::max(dependent ? soundness : completeness, rate);
    }
    pass = pass && completeness <= 0.15 && soundness <= 0.15;
    detail += fmt("k=%zu c_sample=%g N=%llu completeness fail %.3f soundness fail %.3f; ", k, cal.config.c_sample,
                  static_cast<unsigned long long>(n), completeness, soundness);
  }
  return {pass, detail};
}

// 11. add-1 bound with a calibrated constant
Outcome add1() {
  const double delta = 0.05;
  const double c = calibrate_add1_constant(4, 100, delta, 1000, derive_seed(1001, 11), 0.0);
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Add1Risk;
  for (std::uint64_t n : {100, 1000, 10000}) cfg.grid.push_back({1, 4, 0.1, n});
  cfg.trials = 200;
  cfg.seed = derive_seed(2002, 11);
  cfg.floor = 0.0;
  cfg.delta = delta;
  cfg.add1_constant = c;
  bool pass = true;
  std::string detail = fmt("C = %.4f; violation rates", c);
  for (const auto& row : run_experiment(cfg)) {
    pass = pass && 1.0 - row.success_rate <= 0.10;
    detail += fmt(" N=%llu:%.3f", static_cast<unsigned long long>(row.cell.samples), 1.0 - row.success_rate);
  }
  return {pass, detail};
}

// 12. hard-instance facts
Outcome hard_facts() {
  const auto t0 = std::chrono::steady_clock::now();
  double h_err = 0.0;
  for (double e : {0.05, 0.1, 0.2}) h_err = std::max(h_err, std::abs(verify_realizable_facts(e).hellinger_sq - e / 2));
  double min_gap_ratio = std::numeric_limits<double>::infinity();
  std::vector<double> ratios;
  for (double e : {0.1, 0.05, 0.025}) {
    const auto f = verify_nonrealizable_facts(e);
    min_gap_ratio = std::min(min_gap_ratio, f.mi_gap / e);
    ratios.push_back(f.kl_r1_r2 / (e * e));
  }
  double worst_step = 1.0;
  for (std::size_t i = 1; i < ratios.size(); ++i)
    worst_step = std::max(worst_step, std::max(ratios[i] / ratios[i - 1], ratios[i - 1] / ratios[i]));
  const double secs = seconds_since(t0);
  return {h_err <= 1e-12 && min_gap_ratio >= 0.4 && worst_step <= 1.5 && secs < 5,
          fmt("max |H^2 - eps/2| = %.3g, min gap/eps = %.3f, KL/eps^2 = %.3f %.3f %.3f (worst step x%.3f)", h_err,
              min_gap_ratio, ratios[0], ratios[1], ratios[2], worst_step)};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string tmp(const std::string& name) {
  std::filesystem::create_directories(CHOWLIU_TEST_TMP);
  return std::string(CHOWLIU_TEST_TMP) + "/" + name;
}

// 13. byte-identical CLI outputs across runs
Outcome determinism() {
  Rng rng(derive_seed(1001, 13));
  write_json_file(tmp("model.json"), to_json(random_tree_model(6, 3, 0.05, rng)));
  write_json_file(tmp("triple.json"), to_json(nonrealizable_triple(1, 0.1)));
  write_json_file(tmp("tree.json"), to_json(random_tree(6, rng)));
  {
    std::ofstream(tmp("exp.json")) << R"({"kind": "RealizableRecovery", "trials": 20, "seed": 3,
      "grid": {"n": [5], "k": [2, 3], "epsilon": [0.1], "N": [300]}})";
    std::ofstream(tmp("sep.json")) << R"({"kind": "SeparationCurve", "regime": "nonrealizable", "trials": 20,
      "seed": 4, "N_max": 4096, "grid": {"n": [6], "epsilon": [0.1, 0.2]}})";
  }
  // Each command writes OUT (a file it names) and its stdout.
  const std::string cli = CHOWLIU_CLI_PATH;
  const std::vector<std::string> commands{
      "sample --model " + tmp("model.json") + " -N 500 --seed 7 --out OUT",
      "sample --model " + tmp("model.json") + " -N 500 --seed 7 --binary --out OUT",
      "sample --model " + tmp("triple.json") + " -N 800 --seed 7 --out OUT",
      "learn --samples " + tmp("in.csv") + " --mode full --out OUT",
      "learn --samples " + tmp("in.csv") + " --mode structure --out OUT",
      "learn --samples " + tmp("in.csv") + " --mode params --tree " + tmp("tree.json") + " --root 2 --out OUT",
      "citest --samples " + tmp("ci.csv") + " --epsilon 0.1 --k 2 --c-sample 0.5 >OUT",
      "experiment --config " + tmp("exp.json") + " --out OUT",
      "experiment --config " + tmp("sep.json") + " --out OUT --summary OUT.summary",
      "verify-facts --regime nonrealizable --epsilon 0.05 >OUT",
      "verify-facts --regime realizable --epsilon 0.1 >OUT",
      "calibrate --what citest --k 2 --epsilon 0.1 --trials 100 --seed 3 --out OUT",
      "calibrate --what add1 --k 4 --N 100 --delta 0.05 --trials 200 --seed 3 --out OUT",
  };
  auto run = [&](std::string cmd, const std::string& out) {
    for (std::size_t pos; (pos = cmd.find("OUT")) != std::string::npos;) cmd.replace(pos, 3, out);
    if (cmd.find('>') == std::string::npos) cmd += " >" + out + ".stdout";
    return std::system((cli + " " + cmd + " 2>/dev/null").c_str());
  };
  if (run("sample --model " + tmp("model.json") + " -N 400 --seed 1 --out OUT", tmp("in.csv")) != 0 ||
      run("sample --model " + tmp("triple.json") + " -N 2000 --seed 2 --out OUT", tmp("ci.csv")) != 0)
    return {false, "could not create inputs"};
  std::size_t differing = 0, failed = 0;
  std::string which;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string outputs[2];
    for (int r = 0; r < 2; ++r) {
      const auto out = tmp("run" + std::to_string(r) + "_" + std::to_string(i));
      const int raw = run(commands[i], out);
      if (!WIFEXITED(raw) || WEXITSTATUS(raw) != 0) ++failed;
      outputs[r] = slurp(out) + "\x1f" + slurp(out + ".stdout") + "\x1f" + slurp(out + ".summary");
    }
    if (outputs[0] != outputs[1] || outputs[0].size() < 4) {
      ++differing;
      which += " " + std::to_string(i);
    }
  }
  return {differing == 0 && failed == 0,
          fmt("%zu commands x 2 runs, %zu differ%s, %zu nonzero exits", commands.size(), differing, which.c_str(),
              failed)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 weight identity", weight_identity},
      {"2 KL decomposition", decomposition},
      {"3 f identity and sandwich", f_identity},
      {"4 chain rule", chain_rule},
      {"5 Verma-Pearl zeros", verma_pearl},
      {"6 MST oracle", mst_oracle},
      {"7 exchange pairing", exchange},
      {"8 realizable recovery", realizable_recovery},
      {"9 separation slopes", separation},
      {"10 CI tester rates", ci_tester},
      {"11 add-1 KL bound", add1},
      {"12 hard-instance facts", hard_facts},
      {"13 CLI determinism", determinism},
  };
  std::size_t failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s [%s] %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
