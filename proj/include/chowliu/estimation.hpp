#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "chowliu/model.hpp"
#include "chowliu/samples.hpp"

namespace chowliu {

/// Joint counts over 1 to 3 columns, mixed-radix with the first column most significant.
struct CountTable {
  std::vector<std::size_t> vars;
  std::size_t k;
  std::vector<std::uint64_t> counts;
  std::uint64_t total;

  /// counts / total; all zeros when total == 0.
  std::vector<double> empirical() const;
};

CountTable empirical_counts(const SampleSet& s, std::span<const std::size_t> vars);

/// (count_i + 1) / (N + k) with k = counts.size().
std::vector<double> add_one_estimate(std::span<const std::uint64_t> counts);
/// Single-variable table only.
std::vector<double> add_one_estimate(const CountTable& c);

/// Fixed-structure learning: every conditional row (and the root marginal) is
/// the add-1 estimate of the matching counts. Rows with no parent observations
/// come out uniform.
TreeModel learn_parameters(const SampleSet& s, const RootedTree& t);

/// C * k * ln(k / delta) * ln(N) / N: the high-probability KL bound shape for add-1.
double add_one_kl_bound(double c, std::size_t k, double delta, std::uint64_t n);

/// ceil(c * (n k^2 / eps) * ln(n k / delta) * ln((n k / eps) * ln(1 / delta))), at least 1.
std::uint64_t required_samples_fixed_structure(double c, std::size_t n, std::size_t k, double eps, double delta);

}  // namespace chowliu
