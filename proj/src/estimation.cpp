#include "chowliu/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "chowliu/kernels.hpp"

namespace chowliu {

std::vector<double> CountTable::empirical() const {
  std::vector<double> p(counts.size(), 0.0);
  if (total == 0) return p;
  for (std::size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return p;
}

CountTable empirical_counts(const SampleSet& s, std::span<const std::size_t> vars) {
  if (vars.empty() || vars.size() > 3) throw std::invalid_argument("empirical_counts: need 1 to 3 variables");
  auto counts = count_columns(s, vars);
  return CountTable{std::vector<std::size_t>(vars.begin(), vars.end()), s.k(), std::move(counts),
                    static_cast<std::uint64_t>(s.size())};
}

std::vector<double> add_one_estimate(std::span<const std::uint64_t> counts) {
  if (counts.empty()) throw std::invalid_argument("add_one_estimate: empty table");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  const double denom = static_cast<double>(total) + static_cast<double>(counts.size());
  std::vector<double> q(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) q[i] = (static_cast<double>(counts[i]) + 1.0) / denom;
  return q;
}

std::vector<double> add_one_estimate(const CountTable& c) {
  if (c.vars.size() != 1) throw std::invalid_argument("add_one_estimate: expected a single-variable table");
  return add_one_estimate(c.counts);
}

TreeModel learn_parameters(const SampleSet& s, const RootedTree& t) {
  if (s.n() != t.n()) throw std::invalid_argument("learn_parameters: sample width does not match tree size");
  const auto k = s.k();
  const std::size_t root_var[] = {t.root()};
  auto root_marginal = add_one_estimate(count_columns(s, root_var));
  std::vector<std::vector<double>> cpt(t.n());
  for (Node i = 0; i < t.n(); ++i) {
    if (i == t.root()) continue;
    const std::size_t vars[] = {t.parent(i), i};
    const auto counts = count_columns(s, vars);
    cpt[i].resize(k * k);
    for (std::size_t x = 0; x < k; ++x) {
      const auto row = add_one_estimate(std::span<const std::uint64_t>(counts).subspan(x * k, k));
      std::copy(row.begin(), row.end(), cpt[i].begin() + static_cast<std::ptrdiff_t>(x * k));
    }
  }
  TreeModel m{t, s.alphabet(), std::move(root_marginal), std::move(cpt)};
  validate_tree_model(m);
  return m;
}

double add_one_kl_bound(double c, std::size_t k, double delta, std::uint64_t n) {
  if (n == 0) return std::log(static_cast<double>(k));
  const double nn = static_cast<double>(n);
  return c * static_cast<double>(k) * std::log(static_cast<double>(k) / delta) * std::log(nn) / nn;
}

std::uint64_t required_samples_fixed_structure(double c, std::size_t n, std::size_t k, double eps, double delta) {
  if (!(eps > 0.0) || !(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("required_samples_fixed_structure: bad eps/delta");
  const double nk = static_cast<double>(n * k);
  const double lead = nk * static_cast<double>(k) / eps;
  const double value = c * lead * std::log(nk / delta) * std::log(nk / eps * std::log(1.0 / delta));
  if (!(value > 1.0)) return 1;
  return static_cast<std::uint64_t>(std::ceil(value));
}

}  // namespace chowliu
