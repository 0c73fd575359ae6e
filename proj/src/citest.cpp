#include "chowliu/citest.hpp"

#include <cmath>
#include <sstream>

#include "chowliu/hardinstances.hpp"
#include "chowliu/info.hpp"
#include "chowliu/kernels.hpp"
#include "chowliu/random.hpp"

namespace chowliu {

void TesterConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("TesterConfig: epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("TesterConfig: delta must be in (0, 1)");
  if (k < 2) throw std::invalid_argument("TesterConfig: k must be at least 2");
  if (!(c_sample > 0.0)) throw std::invalid_argument("TesterConfig: c_sample must be positive");
  if (!(c_decision > 0.0 && c_decision < 1.0)) throw std::invalid_argument("TesterConfig: c_decision must be in (0, 1)");
}

std::string to_string(Verdict v) { return v == Verdict::Dependent ? "Dependent" : "Independent"; }

namespace {

std::uint64_t sample_formula(const TesterConfig& cfg, double k_power) {
  cfg.validate();
  const double k = static_cast<double>(cfg.k);
  const double value = cfg.c_sample * (std::pow(k, k_power) / cfg.epsilon) * std::log(k / cfg.delta) *
                       std::log(k * std::log(1.0 / cfg.delta) / cfg.epsilon);
  if (!(value > 1.0)) return 1;
  return static_cast<std::uint64_t>(std::ceil(value));
}

TestVerdict decide(double statistic, const TesterConfig& cfg, std::uint64_t samples) {
  const double threshold = cfg.c_decision * cfg.epsilon;
  return {statistic >= threshold ? Verdict::Dependent : Verdict::Independent, statistic, threshold, samples};
}

}  // namespace

std::uint64_t required_samples_cmi(const TesterConfig& cfg) { return sample_formula(cfg, 3.0); }

std::uint64_t required_samples_mi(const TesterConfig& cfg) { return sample_formula(cfg, 2.0); }

TestVerdict test_conditional_independence(const SampleSet& s, const TesterConfig& cfg) {
  cfg.validate();
  if (s.n() != 3) throw std::invalid_argument("test_conditional_independence: expected 3 columns (X, Y, Z)");
  if (s.empty()) throw std::invalid_argument("test_conditional_independence: no samples");
  const std::size_t cols[] = {0, 1, 2};
  const auto counts = count_columns(s, cols);
  return decide(plugin_conditional_mi(counts, s.k()), cfg, s.size());
}

TestVerdict test_independence(const SampleSet& s, const TesterConfig& cfg) {
  cfg.validate();
  if (s.n() != 2) throw std::invalid_argument("test_independence: expected 2 columns (X, Y)");
  if (s.empty()) throw std::invalid_argument("test_independence: no samples");
  const std::size_t cols[] = {0, 1};
  const auto counts = count_columns(s, cols);
  return decide(plugin_mutual_information(counts, s.k()), cfg, s.size());
}

namespace {

double exact_cmi(const DenseJoint& p) {
  const std::size_t vars[] = {0, 1, 2};
  return conditional_mi(TripleTable(p.k(), p.marginal(vars)));
}

// Z uniform on k symbols; X and Y independently copy Z with probability `copy`.
DenseJoint noisy_copies(std::size_t k, double copy_x, double copy_y) {
  const double kd = static_cast<double>(k);
  std::vector<double> probs(k * k * k);
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y)
      for (std::size_t z = 0; z < k; ++z) {
        const double px = (x == z ? copy_x : 0.0) + (1.0 - copy_x) / kd;
        const double py = (y == z ? copy_y : 0.0) + (1.0 - copy_y) / kd;
        probs[(x * k + y) * k + z] = px * py / kd;
      }
  return DenseJoint(3, Alphabet(k), std::move(probs));
}

// Z constant 0; X = Y uniform.
DenseJoint copied_pair(std::size_t k) {
  std::vector<double> probs(k * k * k, 0.0);
  for (std::size_t x = 0; x < k; ++x) probs[(x * k + x) * k + 0] = 1.0 / static_cast<double>(k);
  return DenseJoint(3, Alphabet(k), std::move(probs));
}

// Realizable hard triple R1 reordered to (Y, Z, X): I(Y;Z|X) > 0.
DenseJoint realizable_dependent_pair(std::size_t k, double eps) {
  const auto r1 = realizable_triple(1, eps);
  std::vector<double> probs(k * k * k, 0.0);
  for (std::size_t idx = 0; idx < 8; ++idx) {
    const auto v = r1.decode(idx);  // (X, Y, Z)
    probs[(v[1] * k + v[2]) * k + v[0]] = r1[idx];
  }
  return DenseJoint(3, Alphabet(k), std::move(probs));
}

}  // namespace

std::vector<CalibrationCase> calibration_family(std::size_t k, double epsilon) {
  std::vector<CalibrationCase> family;
  auto add = [&](std::string name, DenseJoint p) {
    const double cmi = exact_cmi(p);
    family.push_back({std::move(name), std::move(p), cmi});
  };
  add("noisy-copies", noisy_copies(k, 0.6, 0.6));
  add("product", noisy_copies(k, 0.0, 0.0));
  add("copied-pair", copied_pair(k));
  add("realizable-r1", realizable_dependent_pair(k, 0.2));
  for (const auto& c : family) {
    const bool dependent = c.true_cmi > 1e-12;
    if (dependent && c.true_cmi < epsilon) {
      throw std::invalid_argument("calibration_family: case " + c.name + " has CMI below epsilon");
    }
  }
  return family;
}

std::vector<CaseRate> tester_rates(const TesterConfig& cfg, const std::vector<CalibrationCase>& family,
                                   std::size_t trials, std::uint64_t seed) {
  cfg.validate();
  const auto samples = required_samples_cmi(cfg);
  std::vector<CaseRate> rates;
  for (std::size_t c = 0; c < family.size(); ++c) {
    const auto& kase = family[c];
    const bool dependent = kase.true_cmi > 1e-12;
    std::vector<char> ok(trials, 0);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t t = 0; t < trials; ++t) {
      const auto s = sample(kase.joint, samples, derive_seed(seed, c, t));
      const auto v = test_conditional_independence(s, cfg);
      ok[t] = dependent ? (v.statistic > cfg.c_decision * kase.true_cmi) : (v.verdict == Verdict::Independent);
    }
    std::size_t passed = 0;
    for (char o : ok) passed += static_cast<std::size_t>(o);
    rates.push_back({kase.name, dependent, static_cast<double>(passed) / static_cast<double>(trials)});
  }
  return rates;
}

std::vector<double> default_sample_grid() {
  std::vector<double> grid;
  for (int j = -12; j <= 12; ++j) {
    grid.push_back(std::ldexp(1.0, j));
    grid.push_back(1.5 * std::ldexp(1.0, j));
  }
  return grid;
}

CalibrationResult calibrate(const TesterConfig& cfg0, std::size_t trials, std::uint64_t seed,
                            const std::vector<double>& grid) {
  cfg0.validate();
  if (trials < 100) throw std::invalid_argument("calibrate: need at least 100 trials");
  if (grid.empty()) throw std::invalid_argument("calibrate: empty grid");
  const auto family = calibration_family(cfg0.k, cfg0.epsilon);
  std::ostringstream diagnostics;
  for (double c : grid) {
    TesterConfig cfg = cfg0;
    cfg.c_sample = c;
    auto rates = tester_rates(cfg, family, trials, seed);
    bool all_pass = true;
    for (const auto& r : rates) all_pass = all_pass && r.success_rate >= 1.0 - cfg.delta;
    if (all_pass) return {cfg, required_samples_cmi(cfg), std::move(rates)};
    diagnostics << "c_sample=" << c << " N=" << required_samples_cmi(cfg) << ":";
    for (const auto& r : rates) diagnostics << ' ' << r.name << '=' << r.success_rate;
    diagnostics << '\n';
  }
  throw CalibrationError("no c_sample on the grid reaches success rate " + std::to_string(1.0 - cfg0.delta) +
                         "\n" + diagnostics.str());
}

}  // namespace chowliu
