#include "chowliu/info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace chowliu {

namespace {

constexpr double kSumTol = 1e-9;
constexpr double kDomainTol = 1e-9;

void check_distribution(std::span<const double> p, std::size_t expected, const char* what) {
  if (p.size() != expected) {
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(expected) + " entries");
  }
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string(what) + ": negative or NaN entry");
    total += v;
  }
  if (std::abs(total - 1.0) > kSumTol) throw std::invalid_argument(std::string(what) + ": entries do not sum to 1");
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

PairTable::PairTable(std::size_t k, std::vector<double> joint) : k_(k), joint_(std::move(joint)), px_(k), py_(k) {
  if (k_ == 0) throw std::invalid_argument("PairTable: k must be positive");
  check_distribution(joint_, k_ * k_, "PairTable");
  for (std::size_t x = 0; x < k_; ++x) {
    for (std::size_t y = 0; y < k_; ++y) {
      px_[x] += joint_[x * k_ + y];
      py_[y] += joint_[x * k_ + y];
    }
  }
}

TripleTable::TripleTable(std::size_t k, std::vector<double> joint) : k_(k), joint_(std::move(joint)) {
  if (k_ == 0) throw std::invalid_argument("TripleTable: k must be positive");
  check_distribution(joint_, k_ * k_ * k_, "TripleTable");
}

PairTable TripleTable::xy() const {
  std::vector<double> out(k_ * k_, 0.0);
  for (std::size_t x = 0; x < k_; ++x)
    for (std::size_t y = 0; y < k_; ++y)
      for (std::size_t z = 0; z < k_; ++z) out[x * k_ + y] += (*this)(x, y, z);
  return PairTable(k_, std::move(out));
}

PairTable TripleTable::xz() const {
  std::vector<double> out(k_ * k_, 0.0);
  for (std::size_t x = 0; x < k_; ++x)
    for (std::size_t y = 0; y < k_; ++y)
      for (std::size_t z = 0; z < k_; ++z) out[x * k_ + z] += (*this)(x, y, z);
  return PairTable(k_, std::move(out));
}

PairTable TripleTable::yz() const {
  std::vector<double> out(k_ * k_, 0.0);
  for (std::size_t x = 0; x < k_; ++x)
    for (std::size_t y = 0; y < k_; ++y)
      for (std::size_t z = 0; z < k_; ++z) out[y * k_ + z] += (*this)(x, y, z);
  return PairTable(k_, std::move(out));
}

std::vector<double> TripleTable::pz() const {
  std::vector<double> out(k_, 0.0);
  for (std::size_t i = 0; i < joint_.size(); ++i) out[i % k_] += joint_[i];
  return out;
}

double f_kl(double a, double b) {
  if (!(b >= -kDomainTol && b <= 1.0 + kDomainTol) || !(a >= -b - kDomainTol && a <= 1.0 - b + kDomainTol)) {
    throw std::domain_error("f_kl: (a, b) = (" + std::to_string(a) + ", " + std::to_string(b) + ") outside domain");
  }
  b = std::max(b, 0.0);
  if (b == 0.0) return a > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  if (a + b <= 0.0) return b;
  const double z = a / b;
  if (std::abs(z) < 1e-4) {
    // b * ((1+z) log(1+z) - z) expanded: z^2/2 - z^3/6 + z^4/12 - z^5/20 + z^6/30
    const double z2 = z * z;
    return b * z2 * (0.5 + z * (-1.0 / 6 + z * (1.0 / 12 + z * (-1.0 / 20 + z * (1.0 / 30)))));
  }
  return std::max(0.0, (a + b) * std::log1p(z) - a);
}

FBounds f_bounds(double a, double b) {
  f_kl(a, b);  // domain check
  if (a == 0.0) return {0.0, 0.0, 0.0};
  const double abs_a = std::abs(a);
  double g = 0.0;
  if (b <= 0.0) {
    g = std::numeric_limits<double>::infinity();
  } else {
    g = std::min(a * a / b, abs_a * std::log(2.0 + abs_a / b));
  }
  return {g, g / 3.0, g};
}

double entropy(std::span<const double> dist) {
  double h = 0.0;
  for (double p : dist) h -= xlogx(p);
  return std::max(0.0, h);
}

double mutual_information(const PairTable& t) {
  const double mi = entropy(t.px()) + entropy(t.py()) - entropy(t.joint());
  return std::max(0.0, mi);
}

double mi_via_f(const PairTable& t) {
  double total = 0.0;
  for (std::size_t x = 0; x < t.k(); ++x) {
    for (std::size_t y = 0; y < t.k(); ++y) total += f_kl(t.delta(x, y), t.px()[x] * t.py()[y]);
  }
  return total;
}

double conditional_mi(const TripleTable& t) {
  const std::size_t k = t.k();
  double total = 0.0;
  std::vector<double> slice(k * k), sx(k), sy(k);
  for (std::size_t z = 0; z < k; ++z) {
    double pz = 0.0;
    for (std::size_t x = 0; x < k; ++x)
      for (std::size_t y = 0; y < k; ++y) pz += t(x, y, z);
    if (pz <= 0.0) continue;
    std::fill(sx.begin(), sx.end(), 0.0);
    std::fill(sy.begin(), sy.end(), 0.0);
    for (std::size_t x = 0; x < k; ++x) {
      for (std::size_t y = 0; y < k; ++y) {
        const double v = t(x, y, z) / pz;
        slice[x * k + y] = v;
        sx[x] += v;
        sy[y] += v;
      }
    }
    total += pz * (entropy(sx) + entropy(sy) - entropy(slice));
  }
  return std::max(0.0, total);
}

namespace {

TripleTable swap_yz(const TripleTable& t) {
  const std::size_t k = t.k();
  std::vector<double> out(k * k * k);
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y)
      for (std::size_t z = 0; z < k; ++z) out[(x * k + z) * k + y] = t(x, y, z);
  return TripleTable(k, std::move(out));
}

}  // namespace

ChainRuleGap chain_rule_gap(const TripleTable& t) {
  const double lhs = mutual_information(t.xy()) - mutual_information(t.xz());
  const double rhs = conditional_mi(t) - conditional_mi(swap_yz(t));
  return {lhs, rhs};
}

double plugin_mutual_information(std::span<const std::uint64_t> counts, std::size_t k) {
  if (counts.size() != k * k) throw std::invalid_argument("plugin_mutual_information: table is not k*k");
  std::vector<std::uint64_t> rows(k, 0), cols(k, 0);
  std::uint64_t total = 0;
  double joint_term = 0.0;
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t y = 0; y < k; ++y) {
      const auto c = counts[x * k + y];
      rows[x] += c;
      cols[y] += c;
      total += c;
      joint_term += xlogx(static_cast<double>(c));
    }
  }
  if (total == 0) return 0.0;
  double margin_term = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    margin_term += xlogx(static_cast<double>(rows[i])) + xlogx(static_cast<double>(cols[i]));
  }
  const double n = static_cast<double>(total);
  // H(X) + H(Y) - H(X,Y) with H = log N - (1/N) sum c log c.
  return std::max(0.0, std::log(n) + (joint_term - margin_term) / n);
}

double plugin_conditional_mi(std::span<const std::uint64_t> counts, std::size_t k) {
  if (counts.size() != k * k * k) throw std::invalid_argument("plugin_conditional_mi: table is not k^3");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) return 0.0;
  std::vector<std::uint64_t> slice(k * k);
  double cmi = 0.0;
  for (std::size_t z = 0; z < k; ++z) {
    std::uint64_t nz = 0;
    for (std::size_t x = 0; x < k; ++x) {
      for (std::size_t y = 0; y < k; ++y) {
        slice[x * k + y] = counts[(x * k + y) * k + z];
        nz += slice[x * k + y];
      }
    }
    if (nz == 0) continue;
    cmi += static_cast<double>(nz) / static_cast<double>(total) * plugin_mutual_information(slice, k);
  }
  return std::max(0.0, cmi);
}

}  // namespace chowliu
