#include "chowliu/hardinstances.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "chowliu/info.hpp"
#include "chowliu/random.hpp"

namespace chowliu {

std::string to_string(Regime r) { return r == Regime::Realizable ? "realizable" : "nonrealizable"; }

Regime parse_regime(const std::string& s) {
  if (s == "realizable") return Regime::Realizable;
  if (s == "nonrealizable" || s == "non-realizable") return Regime::NonRealizable;
  throw std::invalid_argument("unknown regime '" + s + "'");
}

void TripleFamily::validate() const {
  if (index < 1 || index > 3) throw std::invalid_argument("triple index must be 1, 2 or 3");
  const double upper = regime == Regime::NonRealizable ? 0.25 : 1.0;
  if (!(epsilon > 0.0 && epsilon < upper)) {
    throw std::invalid_argument("epsilon must lie in (0, " + std::to_string(upper) + ") for the " +
                                to_string(regime) + " family");
  }
}

namespace {

const Alphabet kBinary{2};

void check_index(int index) {
  if (index < 1 || index > 3) throw std::invalid_argument("triple index must be 1, 2 or 3");
}

}  // namespace

DenseJoint nonrealizable_triple(int index, double eps) {
  check_index(index);
  if (!(eps >= 0.0 && eps < 0.25)) throw std::invalid_argument("nonrealizable_triple: eps must be in [0, 1/4)");
  std::array<double, 3> copy{0.75 + eps, 0.75 + eps, 0.75 + eps};
  copy[static_cast<std::size_t>(3 - index)] = 0.75 - eps;
  std::vector<double> probs(8, 0.0);
  for (int b = 0; b < 2; ++b) {
    for (std::size_t idx = 0; idx < 8; ++idx) {
      double p = 0.5;
      for (std::size_t v = 0; v < 3; ++v) {
        const int bit = static_cast<int>((idx >> (2 - v)) & 1U);
        // P(var = B) = copy + (1 - copy) / 2
        const double agree = copy[v] + 0.5 * (1.0 - copy[v]);
        p *= bit == b ? agree : 1.0 - agree;
      }
      probs[idx] += p;
    }
  }
  return DenseJoint(3, kBinary, std::move(probs));
}

DenseJoint realizable_triple(int index, double eps) {
  check_index(index);
  if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("realizable_triple: eps must be in [0, 1]");
  // Position of the noisy variable: X for i=1, Y for i=2, Z for i=3.
  const std::size_t noisy = static_cast<std::size_t>(index - 1);
  std::vector<double> probs(8, 0.0);
  for (std::size_t idx = 0; idx < 8; ++idx) {
    std::array<int, 3> x{static_cast<int>((idx >> 2) & 1U), static_cast<int>((idx >> 1) & 1U),
                         static_cast<int>(idx & 1U)};
    std::array<int, 2> pair{};
    std::size_t j = 0;
    for (std::size_t v = 0; v < 3; ++v) {
      if (v != noisy) pair[j++] = x[v];
    }
    if (pair[0] != pair[1]) continue;
    const double noisy_given = x[noisy] == pair[0] ? (1.0 - eps) + 0.5 * eps : 0.5 * eps;
    probs[idx] = 0.5 * noisy_given;
  }
  return DenseJoint(3, kBinary, std::move(probs));
}

DenseJoint make_triple(const TripleFamily& f) {
  f.validate();
  return f.regime == Regime::Realizable ? realizable_triple(f.index, f.epsilon)
                                        : nonrealizable_triple(f.index, f.epsilon);
}

UndirectedTree realizable_tree(int index) {
  check_index(index);
  switch (index) {
    case 1:
      return UndirectedTree(3, {{0, 1}, {1, 2}});  // X - Y = Z
    case 2:
      return UndirectedTree(3, {{0, 1}, {0, 2}});  // Y - X = Z
    default:
      return UndirectedTree(3, {{0, 1}, {0, 2}});  // X = Y, Z - X
  }
}

DenseJoint block_product(std::span<const DenseJoint> blocks, std::size_t cap) {
  if (blocks.empty()) throw std::invalid_argument("block_product: no blocks");
  const auto alphabet = blocks.front().alphabet();
  std::size_t n = 0;
  for (const auto& b : blocks) {
    if (b.alphabet() != alphabet) throw std::invalid_argument("block_product: blocks use different alphabets");
    n += b.n();
  }
  dense_size(n, alphabet.size(), cap);
  std::vector<double> probs{1.0};
  for (const auto& b : blocks) {
    std::vector<double> next;
    next.reserve(probs.size() * b.size());
    for (double p : probs)
      for (double q : b.probs()) next.push_back(p * q);
    probs.swap(next);
  }
  return DenseJoint(n, alphabet, std::move(probs), cap);
}

namespace {

Alphabet common_alphabet(std::span<const DenseJoint> blocks) {
  if (blocks.empty()) throw std::invalid_argument("block product: no blocks");
  for (const auto& b : blocks) {
    if (b.alphabet() != blocks.front().alphabet()) throw std::invalid_argument("block product: blocks use different alphabets");
  }
  return blocks.front().alphabet();
}

}  // namespace

SampleSet sample_block_product(std::span<const DenseJoint> blocks, std::size_t count, std::uint64_t seed) {
  const auto alphabet = common_alphabet(blocks);
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.n();
  std::vector<Symbol> rows(count * n);
  std::size_t offset = 0;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto part = sample(blocks[bi], count, derive_seed(seed, bi));
    const std::size_t w = blocks[bi].n();
    for (std::size_t r = 0; r < count; ++r) {
      const auto src = part.row(r);
      std::copy(src.begin(), src.end(), rows.begin() + static_cast<std::ptrdiff_t>(r * n + offset));
    }
    offset += w;
  }
  return SampleSet(n, alphabet, std::move(rows));
}

MIMatrix block_product_mi(std::span<const DenseJoint> blocks) {
  common_alphabet(blocks);
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.n();
  MIMatrix w(n);
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    const auto local = exact_mi_matrix(b);
    for (std::size_t i = 0; i < b.n(); ++i)
      for (std::size_t j = i + 1; j < b.n(); ++j) w.set(offset + i, offset + j, local(i, j));
    offset += b.n();
  }
  return w;
}

namespace {

double pair_mi(const DenseJoint& p, std::size_t a, std::size_t b) {
  const std::size_t vars[] = {a, b};
  return mutual_information(PairTable(p.k(), p.marginal(vars)));
}

}  // namespace

NonRealizableFacts verify_nonrealizable_facts(double eps) {
  TripleFamily{Regime::NonRealizable, 1, eps}.validate();
  const auto r1 = nonrealizable_triple(1, eps);
  const auto r2 = nonrealizable_triple(2, eps);
  return {kl_divergence(r1, r2), pair_mi(r1, 0, 1) - pair_mi(r1, 0, 2)};
}

RealizableFacts verify_realizable_facts(double eps) {
  TripleFamily{Regime::Realizable, 1, eps}.validate();
  const auto r1 = realizable_triple(1, eps);
  const auto r2 = realizable_triple(2, eps);
  return {statistical_distances(r1, r2).hellinger_sq, pair_mi(r1, 1, 2) - pair_mi(r1, 0, 2)};
}

}  // namespace chowliu
