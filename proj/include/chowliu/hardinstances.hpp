#pragma once

#include <span>
#include <string>

#include "chowliu/chowliu.hpp"
#include "chowliu/model.hpp"

namespace chowliu {

enum class Regime { NonRealizable, Realizable };

std::string to_string(Regime r);
Regime parse_regime(const std::string& s);

/// One of the three hard distributions over {0,1}^3 (variables X, Y, Z).
struct TripleFamily {
  Regime regime;
  int index;  // 1, 2 or 3
  double epsilon;

  /// Throws std::invalid_argument unless 0 < eps < 1/4 (non-realizable) or
  /// 0 < eps < 1 (realizable) and index is 1..3.
  void validate() const;
};

/// Shared bit B ~ Ber(1/2); each of X, Y, Z copies B with probability 3/4 + eps
/// or 3/4 - eps (the minus sign on Z, Y, X for i = 1, 2, 3), otherwise is a
/// fresh fair bit. eps = 0 is accepted here as the symmetric limit.
DenseJoint nonrealizable_triple(int index, double eps);

/// Two of the variables are an equal fair bit (Y=Z for i=1, X=Z for i=2, X=Y
/// for i=3); the third copies it with probability 1 - eps, else is a fair bit.
DenseJoint realizable_triple(int index, double eps);

DenseJoint make_triple(const TripleFamily& f);

/// A tree that the realizable triple i factorizes on.
UndirectedTree realizable_tree(int index);

/// Independent concatenation of the blocks, in order.
DenseJoint block_product(std::span<const DenseJoint> blocks, std::size_t cap = kDefaultDenseCap);

/// Samples from the block product without forming its table. Block b is drawn
/// with seed derive_seed(seed, b), so each column group is a prefix-stable stream.
SampleSet sample_block_product(std::span<const DenseJoint> blocks, std::size_t count, std::uint64_t seed);

/// Exact pairwise MI of the block product; pairs in different blocks get 0.
MIMatrix block_product_mi(std::span<const DenseJoint> blocks);

struct NonRealizableFacts {
  double kl_r1_r2;  // D(R1 || R2)
  double mi_gap;    // I(X1;Y1) - I(X1;Z1)
};

struct RealizableFacts {
  double hellinger_sq;  // H^2(R1, R2)
  double mi_gap;        // I(Y1;Z1) - I(X1;Z1)
};

NonRealizableFacts verify_nonrealizable_facts(double eps);
RealizableFacts verify_realizable_facts(double eps);

}  // namespace chowliu
