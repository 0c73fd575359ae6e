#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "chowliu/samples.hpp"
#include "chowliu/types.hpp"

namespace chowliu {

/// Exact probability table over Sigma^n. Index is mixed-radix with x_1 as the
/// most significant digit.
class DenseJoint {
 public:
  DenseJoint(std::size_t n, Alphabet alphabet, std::vector<double> probs,
             std::size_t cap = kDefaultDenseCap);

  static DenseJoint uniform(std::size_t n, Alphabet alphabet);
  static DenseJoint point_mass(std::size_t n, Alphabet alphabet, std::span<const Symbol> x);

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return alphabet_.size(); }
  Alphabet alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t index) const { return probs_[index]; }

  std::size_t index_of(std::span<const Symbol> x) const;
  std::vector<Symbol> decode(std::size_t index) const;
  double prob(std::span<const Symbol> x) const { return probs_[index_of(x)]; }

  /// Marginal over `vars` (distinct), laid out mixed-radix in the given order.
  std::vector<double> marginal(std::span<const std::size_t> vars) const;

 private:
  std::size_t n_;
  Alphabet alphabet_;
  std::vector<double> probs_;
};

/// Checked table size k^n; throws std::length_error above `cap`.
std::size_t dense_size(std::size_t n, std::size_t k, std::size_t cap = kDefaultDenseCap);

struct Edge {
  Node u;
  Node v;
  auto operator<=>(const Edge&) const = default;
};

/// Edge with endpoints ordered u < v.
Edge make_edge(Node a, Node b);

/// Spanning tree on nodes 0..n-1. Edges are stored normalized (u < v) and sorted.
class UndirectedTree {
 public:
  UndirectedTree(std::size_t n, std::vector<Edge> edges);

  std::size_t n() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool contains(Edge e) const;
  std::vector<std::vector<Node>> adjacency() const;

  bool operator==(const UndirectedTree&) const = default;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
};

/// True iff `edges` form a spanning tree on n nodes (n-1 edges, connected, no loops).
bool is_spanning_tree(std::size_t n, std::span<const Edge> edges);

class RootedTree {
 public:
  /// parent[root] must be kNoParent.
  RootedTree(Node root, std::vector<Node> parent);

  static RootedTree orient(const UndirectedTree& t, Node root);

  std::size_t n() const noexcept { return parent_.size(); }
  Node root() const noexcept { return root_; }
  Node parent(Node i) const { return parent_[i]; }
  const std::vector<Node>& parents() const noexcept { return parent_; }

  /// Root first; every node after its parent.
  std::vector<Node> topological_order() const;
  std::vector<std::vector<Node>> children() const;
  UndirectedTree skeleton() const;

  bool operator==(const RootedTree&) const = default;

 private:
  Node root_;
  std::vector<Node> parent_;
};

/// Tree-factored distribution. cpt[i] is a k*k row-major table for non-root i,
/// row indexed by the parent symbol; cpt[root] is empty.
struct TreeModel {
  RootedTree tree;
  Alphabet alphabet;
  std::vector<double> root_marginal;
  std::vector<std::vector<double>> cpt;

  std::size_t n() const noexcept { return tree.n(); }
  std::size_t k() const noexcept { return alphabet.size(); }
  double cond(Node i, Symbol parent_symbol, Symbol child_symbol) const {
    return cpt[i][parent_symbol * k() + child_symbol];
  }
  bool operator==(const TreeModel&) const = default;
};

/// Throws std::invalid_argument naming the first violated invariant.
void validate_tree_model(const TreeModel& m);

DenseJoint to_dense(const TreeModel& m, std::size_t cap = kDefaultDenseCap);

/// Per-node marginals, propagated from the root.
std::vector<std::vector<double>> node_marginals(const TreeModel& m);

/// Same joint distribution, oriented away from `new_root`. Rows conditioned on a
/// zero-probability parent symbol are set to uniform.
TreeModel reroot(const TreeModel& m, Node new_root);

/// Ancestral sampling; bit-identical for identical (m, count, seed).
SampleSet sample(const TreeModel& m, std::size_t count, std::uint64_t seed);

/// Inverse-CDF sampling from a dense table.
SampleSet sample(const DenseJoint& p, std::size_t count, std::uint64_t seed);

/// Exact joint of (X_u, X_v), k*k row-major with rows indexed by X_u.
std::vector<double> pair_marginal(const TreeModel& m, Node u, Node v);

struct DegenerateRow {
  Node node;
  Symbol parent_symbol;
  bool operator==(const DegenerateRow&) const = default;
};

struct Projection {
  TreeModel model;
  /// Rows set to uniform because the parent symbol has zero probability.
  std::vector<DegenerateRow> uniform_rows;
};

/// KL-closest t-structured distribution: conditionals P(X_i | X_pa(i)).
Projection project_onto_tree(const DenseJoint& p, const UndirectedTree& t, Node root = 0);

/// D(p || q) in nats; +infinity when p puts mass where q has none.
double kl_divergence(const DenseJoint& p, const DenseJoint& q);

struct TreeKl {
  double total_correlation;  // J_P = sum_v H(P_v) - H(P)
  double weight;             // sum of edge mutual informations
  double divergence;         // J_P - weight
};

TreeKl kl_to_tree_projection(const DenseJoint& p, const UndirectedTree& t);

struct KlDecomposition {
  double base_term;         // -H(P) + sum_v H(P_v)
  double weight_term;       // sum_v I(X_v; X_pa(v))
  double conditional_term;  // sum_v sum_x P(pa = x) D(P(X_v|x) || Q(X_v|x)), root included
  double total;
};

KlDecomposition kl_decomposition(const DenseJoint& p, const TreeModel& m);

struct StatisticalDistances {
  double tv;
  double hellinger_sq;
};

StatisticalDistances statistical_distances(const DenseJoint& p, const DenseJoint& q);

}  // namespace chowliu
