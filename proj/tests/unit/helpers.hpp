#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "chowliu/harness.hpp"
#include "chowliu/model.hpp"

namespace testing {

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Strictly positive random table (no floor collapse), for identities that need full support.
inline chowliu::DenseJoint positive_joint(std::size_t n, std::size_t k, chowliu::Rng& rng) {
  return chowliu::random_dense_joint(n, k, 1e-3 / std::pow(static_cast<double>(k), static_cast<double>(n)), rng);
}

/// Brute-force entropy of a marginal of p.
inline double marginal_entropy(const chowliu::DenseJoint& p, std::vector<std::size_t> vars) {
  double h = 0.0;
  for (double q : p.marginal(vars)) {
    if (q > 0) h -= q * std::log(q);
  }
  return h;
}

inline std::string tmp_path(const std::string& name) {
  std::filesystem::create_directories(CHOWLIU_TEST_TMP);
  return std::string(CHOWLIU_TEST_TMP) + "/" + name;
}

}  // namespace testing
