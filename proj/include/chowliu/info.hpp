#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace chowliu {

/// Joint table of (X, Y) over a k x k grid, row-major with rows indexed by X.
class PairTable {
 public:
  PairTable(std::size_t k, std::vector<double> joint);

  std::size_t k() const noexcept { return k_; }
  double operator()(std::size_t x, std::size_t y) const { return joint_[x * k_ + y]; }
  std::span<const double> joint() const noexcept { return joint_; }
  const std::vector<double>& px() const noexcept { return px_; }
  const std::vector<double>& py() const noexcept { return py_; }
  /// P_xy - P_x P_y
  double delta(std::size_t x, std::size_t y) const { return (*this)(x, y) - px_[x] * py_[y]; }

 private:
  std::size_t k_;
  std::vector<double> joint_;
  std::vector<double> px_;
  std::vector<double> py_;
};

/// Joint table of (X, Y, Z) over k^3, index (x*k + y)*k + z.
class TripleTable {
 public:
  TripleTable(std::size_t k, std::vector<double> joint);

  std::size_t k() const noexcept { return k_; }
  double operator()(std::size_t x, std::size_t y, std::size_t z) const { return joint_[(x * k_ + y) * k_ + z]; }
  std::span<const double> joint() const noexcept { return joint_; }

  PairTable xy() const;
  PairTable xz() const;
  PairTable yz() const;
  std::vector<double> pz() const;

 private:
  std::size_t k_;
  std::vector<double> joint_;
};

/// f(a, b) = (a + b) log(1 + a/b) - a on b in [0, 1], a in [-b, 1 - b].
/// f(-b, b) = b; f(a, 0) = +inf for a > 0. Throws std::domain_error outside the domain.
double f_kl(double a, double b);

struct FBounds {
  double g;  // min(a^2/b, |a| log(2 + |a|/b))
  double lower;
  double upper;
};

FBounds f_bounds(double a, double b);

/// Shannon entropy in nats with 0 log 0 = 0. Entries need not be normalized
/// beyond what the caller guarantees.
double entropy(std::span<const double> dist);

/// H(X) + H(Y) - H(X, Y), clamped at 0.
double mutual_information(const PairTable& t);

/// sum_{x,y} f(Delta_xy, P_x P_y). Independent second route to mutual_information.
double mi_via_f(const PairTable& t);

/// sum_z P(z) I(X; Y | Z = z); slices with P(z) = 0 contribute 0.
double conditional_mi(const TripleTable& t);

struct ChainRuleGap {
  double lhs;  // I(X;Y) - I(X;Z)
  double rhs;  // I(X;Y|Z) - I(X;Z|Y)
};

ChainRuleGap chain_rule_gap(const TripleTable& t);

/// Plug-in MI from a k*k count table with total N >= 1 (entropy route).
double plugin_mutual_information(std::span<const std::uint64_t> counts, std::size_t k);

/// Plug-in CMI from a k^3 count table indexed (x*k + y)*k + z.
double plugin_conditional_mi(std::span<const std::uint64_t> counts, std::size_t k);

}  // namespace chowliu
