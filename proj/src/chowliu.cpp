#include "chowliu/chowliu.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "chowliu/estimation.hpp"
#include "chowliu/info.hpp"
#include "chowliu/kernels.hpp"

namespace chowliu {

MIMatrix::MIMatrix(std::size_t n) : n_(n), w_(n * n, 0.0) {}

MIMatrix::MIMatrix(std::size_t n, std::vector<double> weights) : n_(n), w_(std::move(weights)) {
  if (w_.size() != n_ * n_) throw std::invalid_argument("MIMatrix: expected n*n weights");
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (i == j) continue;
      if (!(w_[i * n_ + j] >= 0.0)) throw std::invalid_argument("MIMatrix: negative weight");
      if (w_[i * n_ + j] != w_[j * n_ + i]) throw std::invalid_argument("MIMatrix: not symmetric");
    }
  }
}

void MIMatrix::set(std::size_t i, std::size_t j, double w) {
  if (i >= n_ || j >= n_ || i == j) throw std::invalid_argument("MIMatrix::set: bad index");
  if (!(w >= 0.0)) throw std::invalid_argument("MIMatrix::set: negative weight");
  w_[i * n_ + j] = w;
  w_[j * n_ + i] = w;
}

namespace {

MIMatrix from_pair_counts(const PairCounts& counts) {
  MIMatrix w(counts.n());
  for (std::size_t i = 0; i < counts.n(); ++i) {
    for (std::size_t j = i + 1; j < counts.n(); ++j) {
      w.set(i, j, plugin_mutual_information(counts.table(i, j), counts.k()));
    }
  }
  return w;
}

}  // namespace

MIMatrix mi_matrix(const SampleSet& s, int threads) {
  if (s.empty()) throw std::invalid_argument("mi_matrix: empty sample set");
  return from_pair_counts(accumulate_pair_counts(s, threads));
}

MIMatrix mi_matrix_serial(const SampleSet& s) {
  if (s.empty()) throw std::invalid_argument("mi_matrix: empty sample set");
  return from_pair_counts(accumulate_pair_counts_serial(s));
}

MIMatrix exact_mi_matrix(const DenseJoint& p) {
  MIMatrix w(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) {
    for (std::size_t j = i + 1; j < p.n(); ++j) {
      const std::size_t vars[] = {i, j};
      w.set(i, j, mutual_information(PairTable(p.k(), p.marginal(vars))));
    }
  }
  return w;
}

MIMatrix exact_mi_matrix(const TreeModel& m) {
  MIMatrix w(m.n());
  for (std::size_t i = 0; i < m.n(); ++i) {
    for (std::size_t j = i + 1; j < m.n(); ++j) {
      w.set(i, j, mutual_information(PairTable(m.k(), pair_marginal(m, i, j))));
    }
  }
  return w;
}

double tree_weight(const MIMatrix& w, const UndirectedTree& t) {
  if (w.n() != t.n()) throw std::invalid_argument("tree_weight: size mismatch");
  double total = 0.0;
  for (const auto& e : t.edges()) total += w(e.u, e.v);
  return total;
}

UndirectedTree max_weight_spanning_tree(const MIMatrix& w) {
  const std::size_t n = w.n();
  if (n == 0) throw std::invalid_argument("max_weight_spanning_tree: empty graph");
  std::vector<Edge> candidates;
  candidates.reserve(n * (n - 1) / 2);
  for (Node i = 0; i < n; ++i)
    for (Node j = i + 1; j < n; ++j) candidates.push_back({i, j});
  std::sort(candidates.begin(), candidates.end(), [&](const Edge& a, const Edge& b) {
    const double wa = w(a.u, a.v), wb = w(b.u, b.v);
    if (wa != wb) return wa > wb;
    return a < b;
  });

  std::vector<Node> parent(n);
  std::vector<std::size_t> rank(n, 0);
  std::iota(parent.begin(), parent.end(), Node{0});
  auto find = [&](Node x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<Edge> chosen;
  chosen.reserve(n - 1);
  for (const auto& e : candidates) {
    Node a = find(e.u), b = find(e.v);
    if (a == b) continue;
    if (rank[a] < rank[b]) std::swap(a, b);
    parent[b] = a;
    if (rank[a] == rank[b]) ++rank[a];
    chosen.push_back(e);
    if (chosen.size() + 1 == n) break;
  }
  return UndirectedTree(n, std::move(chosen));
}

UndirectedTree chow_liu_structure(const SampleSet& s, int threads) {
  return max_weight_spanning_tree(mi_matrix(s, threads));
}

TreeModel learn_tree_distribution(const SampleSet& s, int threads) {
  const auto tree = chow_liu_structure(s, threads);
  return learn_parameters(s, RootedTree::orient(tree, 0));
}

namespace {

// Nodes reachable from `start` using `edges` minus `removed`.
std::vector<bool> component(std::size_t n, const std::set<Edge>& edges, Edge removed, Node start) {
  std::vector<std::vector<Node>> adj(n);
  for (const auto& e : edges) {
    if (e == removed) continue;
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<bool> seen(n, false);
  std::vector<Node> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const Node a = stack.back();
    stack.pop_back();
    for (Node b : adj[a]) {
      if (!seen[b]) {
        seen[b] = true;
        stack.push_back(b);
      }
    }
  }
  return seen;
}

// Node sequence of the unique path from `from` to `to` in a tree.
std::vector<Node> tree_path(std::size_t n, const std::set<Edge>& edges, Node from, Node to) {
  std::vector<std::vector<Node>> adj(n);
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<Node> prev(n, kNoParent);
  std::vector<Node> stack{from};
  prev[from] = from;
  while (!stack.empty()) {
    const Node a = stack.back();
    stack.pop_back();
    for (Node b : adj[a]) {
      if (prev[b] == kNoParent) {
        prev[b] = a;
        stack.push_back(b);
      }
    }
  }
  std::vector<Node> path{to};
  while (path.back() != from) path.push_back(prev[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::vector<std::pair<Edge, Edge>> exchange_pairing(const UndirectedTree& t1, const UndirectedTree& t2) {
  if (t1.n() != t2.n()) throw std::invalid_argument("exchange_pairing: trees have different sizes");
  const std::size_t n = t1.n();
  const std::set<Edge> first(t1.edges().begin(), t1.edges().end());
  std::set<Edge> current(t2.edges().begin(), t2.edges().end());
  std::vector<std::pair<Edge, Edge>> pairs;
  for (const auto& e : t1.edges()) {
    if (t2.contains(e)) continue;
    const auto left = component(n, first, e, e.u);
    const auto path = tree_path(n, current, e.u, e.v);
    Edge f{};
    bool found = false;
    for (std::size_t s = 0; s + 1 < path.size(); ++s) {
      if (left[path[s]] != left[path[s + 1]]) {
        f = make_edge(path[s], path[s + 1]);
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("exchange_pairing: no crossing edge");
    pairs.emplace_back(e, f);
    current.erase(f);
    current.insert(e);
  }
  return pairs;
}

double mi_accuracy_budget(double total_eps, std::size_t n) {
  if (n == 0) throw std::invalid_argument("mi_accuracy_budget: n must be positive");
  return total_eps / (2.0 * static_cast<double>(n));
}

}  // namespace chowliu
