#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chowliu/hardinstances.hpp"
#include "chowliu/model.hpp"
#include "chowliu/random.hpp"
#include "chowliu/serialize.hpp"

namespace chowliu {

/// Uniform labeled tree on n nodes (Pruefer decoding).
UndirectedTree random_tree(std::size_t n, Rng& rng);

/// Random tree rooted at 0; every cpt row and the root marginal is a floored
/// Dirichlet(1) draw.
TreeModel random_tree_model(std::size_t n, std::size_t k, double floor, Rng& rng);

/// Every entry of the k^n table drawn as one floored Dirichlet(1) vector.
DenseJoint random_dense_joint(std::size_t n, std::size_t k, double floor, Rng& rng);

enum class ExperimentKind { RealizableRecovery, NonRealizableRecovery, SeparationCurve, Add1Risk, CITesterRates };

std::string to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& s);

struct Cell {
  std::size_t n;
  std::size_t k;
  double epsilon;
  std::uint64_t samples;  // 0 means "derive from the formula" for CITesterRates
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::RealizableRecovery;
  std::vector<Cell> grid;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::string output;  // CSV path; empty means no file

  double floor = 0.05;             // cpt floor for random ground truth
  double tolerance_factor = 1.0;   // success iff excess <= tolerance_factor * epsilon
  int threads = 0;                 // 0 = OpenMP default
  bool record_time = false;        // seconds column stays 0 unless set

  // SeparationCurve
  Regime regime = Regime::Realizable;
  std::uint64_t n_start = 1;
  std::uint64_t n_max = std::uint64_t{1} << 22;
  double target_success = 0.8;
  /// Learn each 3-variable block on its own columns and chain the block trees
  /// (cross-block pairs are independent, so chaining edges carry zero weight).
  /// When false, Chow-Liu runs on all columns at once.
  bool per_block = true;

  // Add1Risk: bound C*k*ln(k/delta)*ln(N)/N replaces epsilon when set
  std::optional<double> add1_constant;
  double delta = 0.1;

  // CITesterRates
  double c_sample = 1.0;
  double c_decision = 0.5;

  void validate() const;
};

/// Reads the JSON document. "grid" is either a list of {n, k, epsilon, N}
/// objects or an object of axis lists expanded as a cartesian product in
/// n, k, epsilon, N order. CHOWLIU_SEED, when set, overrides "seed".
ExperimentConfig experiment_config_from_json(const Json& j);

struct ExperimentRow {
  Cell cell;
  std::size_t trials;
  double success_rate;
  double mean_excess;
  double p95_excess;
  double seconds;
};

/// Rows ordered by cell, and for SeparationCurve by increasing N within a cell.
/// Writes the CSV when cfg.output is set.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg);

inline constexpr const char* kCsvHeader = "n,k,epsilon,N,trials,success_rate,mean_excess,p95_excess,seconds";

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);

struct SeparationPoint {
  std::size_t n;
  std::size_t k;
  double epsilon;
  std::uint64_t grid_n_star;    // first grid N reaching the target; 0 if never
  double interpolated_n_star;   // log-linear between the bracketing grid points
};

/// N* per (n, k, epsilon), in first-appearance order.
std::vector<SeparationPoint> separation_points(const std::vector<ExperimentRow>& rows, double target);

/// Least-squares slope of ln N* against ln(1/epsilon) over points with N* > 0.
double separation_slope(const std::vector<SeparationPoint>& pts, bool interpolated = true);

/// Smallest C such that KL(P || add-1) <= C*k*ln(k/delta)*ln(N)/N in at least
/// 1 - delta of the trials; P is a floored Dirichlet(1) vector over k symbols.
double calibrate_add1_constant(std::size_t k, std::uint64_t samples, double delta, std::size_t trials,
                               std::uint64_t seed, double floor = 0.0);

/// Smallest C' on the c_sample grid such that a random TreeModel learned on its
/// true skeleton at N = required_samples_fixed_structure(C', ...) is within eps
/// in KL in at least 1 - delta of the trials.
double calibrate_fixed_structure_constant(std::size_t n, std::size_t k, double eps, double delta,
                                          std::size_t trials, std::uint64_t seed, double floor = 0.05);

}  // namespace chowliu
