#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "chowliu/model.hpp"
#include "chowliu/samples.hpp"

namespace chowliu {

struct TesterConfig {
  double epsilon = 0.1;  // gap parameter, nats
  double delta = 0.1;    // failure probability
  std::size_t k = 2;
  double c_sample = 1.0;    // multiplier on the sample-size formulas
  double c_decision = 0.5;  // Dependent iff statistic >= c_decision * epsilon

  void validate() const;
};

enum class Verdict { Independent, Dependent };

std::string to_string(Verdict v);

struct TestVerdict {
  Verdict verdict;
  double statistic;  // empirical (conditional) MI, nats
  double threshold;
  std::uint64_t samples;
};

/// ceil(c * (k^3/eps) * ln(k/delta) * ln(k ln(1/delta) / eps)), at least 1.
std::uint64_t required_samples_cmi(const TesterConfig& cfg);
/// Same formula with k^2 in place of k^3.
std::uint64_t required_samples_mi(const TesterConfig& cfg);

/// Columns are (X, Y, Z); tests X _||_ Y | Z.
TestVerdict test_conditional_independence(const SampleSet& s, const TesterConfig& cfg);
/// Columns are (X, Y).
TestVerdict test_independence(const SampleSet& s, const TesterConfig& cfg);

/// Exact ground-truth triple for calibration and rate experiments.
struct CalibrationCase {
  std::string name;
  DenseJoint joint;  // over (X, Y, Z)
  double true_cmi;   // I(X;Y|Z)
};

/// Conditionally independent noisy-copy triples and dependent triples with
/// I(X;Y|Z) >= epsilon (including the realizable hard pair I(Y;Z|X)).
std::vector<CalibrationCase> calibration_family(std::size_t k, double epsilon);

struct CaseRate {
  std::string name;
  bool dependent;
  double success_rate;
};

struct CalibrationResult {
  TesterConfig config;
  std::uint64_t samples;  // required_samples_cmi(config)
  std::vector<CaseRate> rates;
};

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Success rates of the tester at N = required_samples_cmi(cfg) on every case.
/// Independent cases succeed on an Independent verdict; dependent cases succeed
/// when the statistic exceeds c_decision * true CMI.
std::vector<CaseRate> tester_rates(const TesterConfig& cfg, const std::vector<CalibrationCase>& family,
                                   std::size_t trials, std::uint64_t seed);

/// Default c_sample grid: 2^j * {1, 1.5} for j = -12..12, ascending.
std::vector<double> default_sample_grid();

/// Smallest c_sample on the grid whose rates are all >= 1 - delta. Trials use
/// seeds derived from (seed, case, trial), shared across candidates.
CalibrationResult calibrate(const TesterConfig& cfg0, std::size_t trials, std::uint64_t seed,
                            const std::vector<double>& grid = default_sample_grid());

}  // namespace chowliu
