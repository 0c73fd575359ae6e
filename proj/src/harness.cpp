#include "chowliu/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "chowliu/chowliu.hpp"
#include "chowliu/citest.hpp"
#include "chowliu/estimation.hpp"

namespace chowliu {

UndirectedTree random_tree(std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("random_tree: n must be >= 1");
  if (n == 1) return UndirectedTree(1, {});
  if (n == 2) return UndirectedTree(2, {{0, 1}});
  std::vector<Node> code(n - 2);
  for (auto& c : code) c = rng.below(n);
  std::vector<std::size_t> degree(n, 1);
  for (Node c : code) ++degree[c];
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  // O(n^2) decode; n is small wherever exact scoring is possible.
  for (Node c : code) {
    Node leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    edges.push_back(make_edge(leaf, c));
    --degree[leaf];
    --degree[c];
  }
  Node a = n, b = n;
  for (Node i = 0; i < n; ++i) {
    if (degree[i] == 1) (a == n ? a : b) = i;
  }
  edges.push_back(make_edge(a, b));
  return UndirectedTree(n, std::move(edges));
}

TreeModel random_tree_model(std::size_t n, std::size_t k, double floor, Rng& rng) {
  auto tree = RootedTree::orient(random_tree(n, rng), 0);
  std::vector<std::vector<double>> cpt(n);
  auto root_marginal = rng.floored_simplex(k, floor);
  for (Node i : tree.topological_order()) {
    if (i == tree.root()) continue;
    cpt[i].reserve(k * k);
    for (std::size_t x = 0; x < k; ++x) {
      auto row = rng.floored_simplex(k, floor);
      cpt[i].insert(cpt[i].end(), row.begin(), row.end());
    }
  }
  TreeModel m{std::move(tree), Alphabet(k), std::move(root_marginal), std::move(cpt)};
  validate_tree_model(m);
  return m;
}

DenseJoint random_dense_joint(std::size_t n, std::size_t k, double floor, Rng& rng) {
  const std::size_t size = dense_size(n, k);
  const double f = std::min(floor, 0.5 / static_cast<double>(size));
  return DenseJoint(n, Alphabet(k), rng.floored_simplex(size, f));
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::RealizableRecovery: return "RealizableRecovery";
    case ExperimentKind::NonRealizableRecovery: return "NonRealizableRecovery";
    case ExperimentKind::SeparationCurve: return "SeparationCurve";
    case ExperimentKind::Add1Risk: return "Add1Risk";
    case ExperimentKind::CITesterRates: return "CITesterRates";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(const std::string& s) {
  for (auto k : {ExperimentKind::RealizableRecovery, ExperimentKind::NonRealizableRecovery,
                 ExperimentKind::SeparationCurve, ExperimentKind::Add1Risk, ExperimentKind::CITesterRates}) {
    if (s == to_string(k)) return k;
  }
  throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (grid.empty()) throw std::invalid_argument("grid must be non-empty");
  if (!(floor >= 0.0)) throw std::invalid_argument("floor must be >= 0");
  if (!(tolerance_factor >= 0.0)) throw std::invalid_argument("tolerance_factor must be >= 0");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0, 1)");
  for (const auto& c : grid) {
    if (c.n < 1) throw std::invalid_argument("grid: n must be >= 1");
    (void)Alphabet(c.k);
    if (!(c.epsilon > 0.0)) throw std::invalid_argument("grid: epsilon must be > 0");
    if (static_cast<double>(c.k) * floor >= 1.0) throw std::invalid_argument("floor * k must be < 1");
    switch (kind) {
      case ExperimentKind::RealizableRecovery:
      case ExperimentKind::NonRealizableRecovery:
        if (c.n < 2) throw std::invalid_argument("grid: recovery needs n >= 2");
        if (c.samples < 1) throw std::invalid_argument("grid: N must be >= 1");
        break;
      case ExperimentKind::Add1Risk:
        if (c.samples < 1) throw std::invalid_argument("grid: N must be >= 1");
        if (add1_constant && c.samples < 2) throw std::invalid_argument("grid: the add-1 bound needs N >= 2");
        break;
      case ExperimentKind::SeparationCurve:
        if (c.n % 3 != 0 || c.k != 2) throw std::invalid_argument("grid: separation curves need k = 2 and n a multiple of 3");
        TripleFamily{regime, 1, c.epsilon}.validate();
        break;
      case ExperimentKind::CITesterRates:
        if (c.n != 3) throw std::invalid_argument("grid: tester rates need n = 3");
        TesterConfig{c.epsilon, delta, c.k, c_sample, c_decision}.validate();
        break;
    }
  }
  if (kind == ExperimentKind::SeparationCurve) {
    if (n_start < 1 || n_max < n_start) throw std::invalid_argument("need 1 <= N_start <= N_max");
    if (!(target_success > 0.0 && target_success <= 1.0)) throw std::invalid_argument("target_success must be in (0, 1]");
  }
}

namespace {

template <typename T>
std::vector<T> axis(const Json& g, const char* key, std::vector<T> fallback) {
  if (!g.contains(key)) return fallback;
  const auto& v = g.at(key);
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace

ExperimentConfig experiment_config_from_json(const Json& j) {
  ExperimentConfig cfg;
  try {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    if (!j.contains("kind")) throw std::invalid_argument("missing field 'kind'");
    cfg.kind = parse_experiment_kind(j.at("kind").get<std::string>());
    if (j.contains("trials")) cfg.trials = j.at("trials").get<std::size_t>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
    if (j.contains("floor")) cfg.floor = j.at("floor").get<double>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("record_time")) cfg.record_time = j.at("record_time").get<bool>();
    if (j.contains("regime")) cfg.regime = parse_regime(j.at("regime").get<std::string>());
    if (j.contains("N_start")) cfg.n_start = j.at("N_start").get<std::uint64_t>();
    if (j.contains("N_max")) cfg.n_max = j.at("N_max").get<std::uint64_t>();
    if (j.contains("target_success")) cfg.target_success = j.at("target_success").get<double>();
    if (j.contains("per_block")) cfg.per_block = j.at("per_block").get<bool>();
    if (j.contains("add1_constant")) cfg.add1_constant = j.at("add1_constant").get<double>();
    if (j.contains("delta")) cfg.delta = j.at("delta").get<double>();
    if (j.contains("c_sample")) cfg.c_sample = j.at("c_sample").get<double>();
    if (j.contains("c_decision")) cfg.c_decision = j.at("c_decision").get<double>();
    if (j.contains("tolerance_factor")) {
      cfg.tolerance_factor = j.at("tolerance_factor").get<double>();
    } else if (cfg.kind == ExperimentKind::SeparationCurve && cfg.regime == Regime::NonRealizable) {
      // A wrong tree on a non-realizable triple costs about 0.95 eps, so a
      // tolerance of eps would count it as a success.
      cfg.tolerance_factor = 0.4;
    }

    if (!j.contains("grid")) throw std::invalid_argument("missing field 'grid'");
    const auto& g = j.at("grid");
    if (g.is_array()) {
      for (const auto& c : g) {
        cfg.grid.push_back({c.at("n").get<std::size_t>(), c.value("k", std::size_t{2}), c.at("epsilon").get<double>(),
                            c.value("N", std::uint64_t{0})});
      }
    } else if (g.is_object()) {
      const auto ns = axis<std::size_t>(g, "n", {});
      const auto ks = axis<std::size_t>(g, "k", {2});
      const auto es = axis<double>(g, "epsilon", {});
      const auto Ns = axis<std::uint64_t>(g, "N", {0});
      for (auto n : ns)
        for (auto k : ks)
          for (auto e : es)
            for (auto N : Ns) cfg.grid.push_back({n, k, e, N});
    } else {
      throw std::invalid_argument("'grid' must be an array or an object");
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (const char* env = std::getenv("CHOWLIU_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end == nullptr || *end != '\0') throw std::invalid_argument(std::string("CHOWLIU_SEED is not an integer: ") + env);
    cfg.seed = v;
  }
  cfg.validate();
  return cfg;
}

namespace {

struct TrialOutcome {
  bool success = false;
  double excess = 0.0;
};

int thread_count(int requested) { return requested > 0 ? requested : omp_get_max_threads(); }

/// Runs body(trial) for every trial, in parallel, and returns outcomes in trial order.
template <typename Body>
std::vector<TrialOutcome> run_trials(std::size_t trials, int threads, Body body) {
  std::vector<TrialOutcome> out(trials);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(threads))
  for (std::size_t t = 0; t < trials; ++t) {
    try {
      out[t] = body(t);
    } catch (...) {
#pragma omp critical(chowliu_trial_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

ExperimentRow summarize(const Cell& cell, const std::vector<TrialOutcome>& outs, double seconds) {
  ExperimentRow row{cell, outs.size(), 0.0, 0.0, 0.0, seconds};
  std::vector<double> ex;
  ex.reserve(outs.size());
  std::size_t wins = 0;
  for (const auto& o : outs) {
    wins += o.success ? 1 : 0;
    ex.push_back(o.excess);
  }
  row.success_rate = static_cast<double>(wins) / static_cast<double>(outs.size());
  row.mean_excess = std::accumulate(ex.begin(), ex.end(), 0.0) / static_cast<double>(ex.size());
  std::sort(ex.begin(), ex.end());
  // Nearest-rank quantile.
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(ex.size())));
  row.p95_excess = ex[std::max<std::size_t>(rank, 1) - 1];
  return row;
}

TrialOutcome score_structure(const MIMatrix& exact, const UndirectedTree& learned, double tolerance) {
  const double best = tree_weight(exact, max_weight_spanning_tree(exact));
  const double excess = std::max(0.0, best - tree_weight(exact, learned));
  return {excess <= tolerance, excess};
}

UndirectedTree per_block_chow_liu(const SampleSet& s, std::size_t width) {
  std::vector<Edge> edges;
  std::vector<std::size_t> cols(width);
  for (std::size_t start = 0; start < s.n(); start += width) {
    std::iota(cols.begin(), cols.end(), start);
    const auto local = chow_liu_structure(s.select_columns(cols), 1);
    for (const auto& e : local.edges()) {
      edges.push_back({start + e.u, start + e.v});
    }
    if (start > 0) edges.push_back({start - width, start});
  }
  return UndirectedTree(s.n(), std::move(edges));
}

class Stopwatch {
 public:
  explicit Stopwatch(bool on) : on_(on), start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    if (!on_) return 0.0;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  bool on_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<TrialOutcome> cell_trials(const ExperimentConfig& cfg, std::size_t cell_index, const Cell& cell,
                                      const std::vector<CalibrationCase>& family) {
  const double tol = cfg.tolerance_factor * cell.epsilon;
  auto seed_of = [&](std::size_t t) { return derive_seed(cfg.seed, cell_index, t); };
  switch (cfg.kind) {
    case ExperimentKind::RealizableRecovery:
      return run_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
        Rng rng(seed_of(t));
        const auto model = random_tree_model(cell.n, cell.k, cfg.floor, rng);
        const auto s = sample(model, cell.samples, derive_seed(seed_of(t), 1));
        return score_structure(exact_mi_matrix(model), chow_liu_structure(s, 1), tol);
      });
    case ExperimentKind::NonRealizableRecovery:
      return run_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
        Rng rng(seed_of(t));
        const auto p = random_dense_joint(cell.n, cell.k, cfg.floor, rng);
        const auto s = sample(p, cell.samples, derive_seed(seed_of(t), 1));
        return score_structure(exact_mi_matrix(p), chow_liu_structure(s, 1), tol);
      });
    case ExperimentKind::SeparationCurve:
      // Seeds ignore N, so consecutive grid points reuse the same instances and
      // the smaller sample is a prefix of the larger one.
      return run_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
        Rng rng(seed_of(t));
        std::vector<DenseJoint> blocks;
        for (std::size_t b = 0; b < cell.n / 3; ++b) {
          const int index = static_cast<int>(rng.below(3)) + 1;
          blocks.push_back(make_triple({cfg.regime, index, cell.epsilon}));
        }
        const auto s = sample_block_product(blocks, cell.samples, derive_seed(seed_of(t), 1));
        const auto learned = cfg.per_block ? per_block_chow_liu(s, 3) : chow_liu_structure(s, 1);
        return score_structure(block_product_mi(blocks), learned, tol);
      });
    case ExperimentKind::Add1Risk: {
      double bound = cell.epsilon;
      if (cfg.add1_constant) bound = add_one_kl_bound(*cfg.add1_constant, cell.k, cfg.delta, cell.samples);
      return run_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
        Rng rng(seed_of(t));
        const auto model = random_tree_model(cell.n, cell.k, cfg.floor, rng);
        const auto s = sample(model, cell.samples, derive_seed(seed_of(t), 1));
        const auto learned = learn_parameters(s, model.tree);
        const double kl = kl_divergence(to_dense(model), to_dense(learned));
        return TrialOutcome{kl <= bound, kl};
      });
    }
    case ExperimentKind::CITesterRates: {
      const TesterConfig tc{cell.epsilon, cfg.delta, cell.k, cfg.c_sample, cfg.c_decision};
      return run_trials(cfg.trials, cfg.threads, [&](std::size_t t) {
        const auto& c = family[t % family.size()];
        const auto s = sample(c.joint, cell.samples, seed_of(t));
        const auto v = test_conditional_independence(s, tc);
        const bool dependent = c.true_cmi > 1e-12;
        const bool ok = dependent ? v.statistic > tc.c_decision * c.true_cmi : v.verdict == Verdict::Independent;
        return TrialOutcome{ok, std::abs(v.statistic - c.true_cmi)};
      });
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ExperimentRow> rows;
  for (std::size_t ci = 0; ci < cfg.grid.size(); ++ci) {
    Cell cell = cfg.grid[ci];
    std::vector<CalibrationCase> family;
    if (cfg.kind == ExperimentKind::CITesterRates) {
      family = calibration_family(cell.k, cell.epsilon);
      if (cell.samples == 0) {
        cell.samples = required_samples_cmi({cell.epsilon, cfg.delta, cell.k, cfg.c_sample, cfg.c_decision});
      }
    }
    if (cfg.kind == ExperimentKind::SeparationCurve) {
      for (std::uint64_t N = cfg.n_start; N <= cfg.n_max; N *= 2) {
        cell.samples = N;
        Stopwatch watch(cfg.record_time);
        const auto outs = cell_trials(cfg, ci, cell, family);
        rows.push_back(summarize(cell, outs, watch.seconds()));
        if (rows.back().success_rate >= cfg.target_success) break;
      }
      continue;
    }
    Stopwatch watch(cfg.record_time);
    const auto outs = cell_trials(cfg, ci, cell, family);
    rows.push_back(summarize(cell, outs, watch.seconds()));
  }
  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + cfg.output);
    write_csv(out, rows);
    if (!out) throw std::runtime_error("write failed: " + cfg.output);
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kCsvHeader << '\n';
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.10g,%llu,%zu,%.6f,%.10g,%.10g,%.3f\n", r.cell.n, r.cell.k,
                  r.cell.epsilon, static_cast<unsigned long long>(r.cell.samples), r.trials, r.success_rate,
                  r.mean_excess, r.p95_excess, r.seconds);
    out << buf;
  }
}

std::vector<SeparationPoint> separation_points(const std::vector<ExperimentRow>& rows, double target) {
  std::vector<SeparationPoint> pts;
  std::vector<std::vector<const ExperimentRow*>> groups;
  for (const auto& r : rows) {
    auto it = std::find_if(pts.begin(), pts.end(), [&](const SeparationPoint& p) {
      return p.n == r.cell.n && p.k == r.cell.k && p.epsilon == r.cell.epsilon;
    });
    if (it == pts.end()) {
      pts.push_back({r.cell.n, r.cell.k, r.cell.epsilon, 0, 0.0});
      groups.emplace_back();
      it = pts.end() - 1;
    }
    groups[static_cast<std::size_t>(it - pts.begin())].push_back(&r);
  }
  for (std::size_t g = 0; g < pts.size(); ++g) {
    auto& grp = groups[g];
    std::sort(grp.begin(), grp.end(), [](auto* a, auto* b) { return a->cell.samples < b->cell.samples; });
    for (std::size_t i = 0; i < grp.size(); ++i) {
      if (grp[i]->success_rate < target) continue;
      pts[g].grid_n_star = grp[i]->cell.samples;
      if (i == 0) {
        pts[g].interpolated_n_star = static_cast<double>(grp[i]->cell.samples);
      } else {
        const double r0 = grp[i - 1]->success_rate, r1 = grp[i]->success_rate;
        const double l0 = std::log(static_cast<double>(grp[i - 1]->cell.samples));
        const double l1 = std::log(static_cast<double>(grp[i]->cell.samples));
        pts[g].interpolated_n_star = std::exp(l0 + (target - r0) / (r1 - r0) * (l1 - l0));
      }
      break;
    }
  }
  return pts;
}

double separation_slope(const std::vector<SeparationPoint>& pts, bool interpolated) {
  std::vector<double> xs, ys;
  for (const auto& p : pts) {
    const double v = interpolated ? p.interpolated_n_star : static_cast<double>(p.grid_n_star);
    if (v <= 0.0) continue;
    xs.push_back(std::log(1.0 / p.epsilon));
    ys.push_back(std::log(v));
  }
  if (xs.size() < 2) throw std::invalid_argument("separation_slope: need two points with N* > 0");
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("separation_slope: epsilons must differ");
  return sxy / sxx;
}

double calibrate_add1_constant(std::size_t k, std::uint64_t samples, double delta, std::size_t trials,
                               std::uint64_t seed, double floor) {
  if (samples < 2) throw std::invalid_argument("calibrate_add1_constant: N must be >= 2");
  if (trials < 1) throw std::invalid_argument("calibrate_add1_constant: trials must be >= 1");
  const double unit = add_one_kl_bound(1.0, k, delta, samples);
  const auto outs = run_trials(trials, 0, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    const auto model = random_tree_model(1, k, floor, rng);
    const auto s = sample(model, samples, derive_seed(seed, t, 1));
    const auto learned = learn_parameters(s, model.tree);
    return TrialOutcome{true, kl_divergence(to_dense(model), to_dense(learned)) / unit};
  });
  std::vector<double> ratios;
  for (const auto& o : outs) ratios.push_back(o.excess);
  std::sort(ratios.begin(), ratios.end());
  const auto need = static_cast<std::size_t>(std::ceil((1.0 - delta) * static_cast<double>(trials)));
  return ratios[std::max<std::size_t>(need, 1) - 1];
}

double calibrate_fixed_structure_constant(std::size_t n, std::size_t k, double eps, double delta,
                                          std::size_t trials, std::uint64_t seed, double floor) {
  for (double c : default_sample_grid()) {
    const auto N = required_samples_fixed_structure(c, n, k, eps, delta);
    const auto outs = run_trials(trials, 0, [&](std::size_t t) {
      Rng rng(derive_seed(seed, t));
      const auto model = random_tree_model(n, k, floor, rng);
      const auto s = sample(model, N, derive_seed(seed, t, 1));
      const double kl = kl_divergence(to_dense(model), to_dense(learn_parameters(s, model.tree)));
      return TrialOutcome{kl <= eps, kl};
    });
    const auto wins = std::count_if(outs.begin(), outs.end(), [](const TrialOutcome& o) { return o.success; });
    if (static_cast<double>(wins) >= (1.0 - delta) * static_cast<double>(trials)) return c;
  }
  throw std::runtime_error("calibrate_fixed_structure_constant: no constant on the grid suffices");
}

}  // namespace chowliu
