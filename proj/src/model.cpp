#include "chowliu/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

#include "chowliu/info.hpp"
#include "chowliu/random.hpp"

namespace chowliu {

namespace {

constexpr double kJointSumTol = 1e-9;
constexpr double kModelSumTol = 1e-12;

// Odometer over mixed-radix digits, last digit fastest.
bool advance(std::vector<Symbol>& digits, std::size_t k) {
  for (std::size_t pos = digits.size(); pos-- > 0;) {
    if (++digits[pos] < k) return true;
    digits[pos] = 0;
  }
  return false;
}

}  // namespace

std::size_t dense_size(std::size_t n, std::size_t k, std::size_t cap) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (size > cap / k) {
      throw std::length_error("dense table k^n = " + std::to_string(k) + "^" + std::to_string(n) +
                              " exceeds cap " + std::to_string(cap));
    }
    size *= k;
  }
  if (size > cap) throw std::length_error("dense table exceeds cap " + std::to_string(cap));
  return size;
}

DenseJoint::DenseJoint(std::size_t n, Alphabet alphabet, std::vector<double> probs, std::size_t cap)
    : n_(n), alphabet_(alphabet), probs_(std::move(probs)) {
  if (n_ == 0) throw std::invalid_argument("DenseJoint: n must be positive");
  const auto expected = dense_size(n_, alphabet_.size(), cap);
  if (probs_.size() != expected) {
    throw std::invalid_argument("DenseJoint: expected " + std::to_string(expected) + " entries, got " +
                                std::to_string(probs_.size()));
  }
  double total = 0.0;
  for (double v : probs_) {
    if (!(v >= 0.0)) throw std::invalid_argument("DenseJoint: negative or NaN probability");
    total += v;
  }
  if (std::abs(total - 1.0) > kJointSumTol) {
    throw std::invalid_argument("DenseJoint: probabilities sum to " + std::to_string(total));
  }
}

DenseJoint DenseJoint::uniform(std::size_t n, Alphabet alphabet) {
  const auto size = dense_size(n, alphabet.size());
  return DenseJoint(n, alphabet, std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

DenseJoint DenseJoint::point_mass(std::size_t n, Alphabet alphabet, std::span<const Symbol> x) {
  if (x.size() != n) throw std::invalid_argument("point_mass: wrong assignment length");
  std::vector<double> probs(dense_size(n, alphabet.size()), 0.0);
  std::size_t idx = 0;
  for (auto s : x) {
    if (s >= alphabet.size()) throw std::invalid_argument("point_mass: symbol out of range");
    idx = idx * alphabet.size() + s;
  }
  probs[idx] = 1.0;
  return DenseJoint(n, alphabet, std::move(probs));
}

std::size_t DenseJoint::index_of(std::span<const Symbol> x) const {
  if (x.size() != n_) throw std::invalid_argument("index_of: wrong assignment length");
  std::size_t idx = 0;
  for (auto s : x) {
    if (s >= k()) throw std::invalid_argument("index_of: symbol out of range");
    idx = idx * k() + s;
  }
  return idx;
}

std::vector<Symbol> DenseJoint::decode(std::size_t index) const {
  std::vector<Symbol> x(n_);
  for (std::size_t pos = n_; pos-- > 0;) {
    x[pos] = static_cast<Symbol>(index % k());
    index /= k();
  }
  return x;
}

std::vector<double> DenseJoint::marginal(std::span<const std::size_t> vars) const {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i] >= n_) throw std::invalid_argument("marginal: variable out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (vars[i] == vars[j]) throw std::invalid_argument("marginal: repeated variable");
    }
  }
  const std::size_t kk = k();
  std::size_t out_size = 1;
  for (std::size_t i = 0; i < vars.size(); ++i) out_size *= kk;
  std::vector<double> out(out_size, 0.0);
  std::vector<Symbol> digits(n_, 0);
  std::size_t idx = 0;
  do {
    std::size_t o = 0;
    for (auto v : vars) o = o * kk + digits[v];
    out[o] += probs_[idx++];
  } while (advance(digits, kk));
  return out;
}

Edge make_edge(Node a, Node b) { return a < b ? Edge{a, b} : Edge{b, a}; }

bool is_spanning_tree(std::size_t n, std::span<const Edge> edges) {
  if (n == 0 || edges.size() + 1 != n) return false;
  std::vector<Node> root(n);
  std::iota(root.begin(), root.end(), Node{0});
  auto find = [&](Node x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n || e.u == e.v) return false;
    const auto a = find(e.u), b = find(e.v);
    if (a == b) return false;
    root[a] = b;
  }
  return true;  // n-1 edges with no cycle on n nodes is connected
}

UndirectedTree::UndirectedTree(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  for (auto& e : edges_) e = make_edge(e.u, e.v);
  std::sort(edges_.begin(), edges_.end());
  if (!is_spanning_tree(n_, edges_)) {
    throw std::invalid_argument("UndirectedTree: edges do not form a spanning tree on " + std::to_string(n_) +
                                " nodes");
  }
}

bool UndirectedTree::contains(Edge e) const { return std::binary_search(edges_.begin(), edges_.end(), make_edge(e.u, e.v)); }

std::vector<std::vector<Node>> UndirectedTree::adjacency() const {
  std::vector<std::vector<Node>> adj(n_);
  for (const auto& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  return adj;
}

RootedTree::RootedTree(Node root, std::vector<Node> parent) : root_(root), parent_(std::move(parent)) {
  const auto n = parent_.size();
  if (n == 0) throw std::invalid_argument("RootedTree: empty");
  if (root_ >= n) throw std::invalid_argument("RootedTree: root out of range");
  if (parent_[root_] != kNoParent) throw std::invalid_argument("RootedTree: root has a parent");
  for (Node i = 0; i < n; ++i) {
    if (i == root_) continue;
    if (parent_[i] == kNoParent) throw std::invalid_argument("RootedTree: node " + std::to_string(i) + " has no parent");
    if (parent_[i] >= n) throw std::invalid_argument("RootedTree: parent out of range");
    if (parent_[i] == i) throw std::invalid_argument("RootedTree: cycle (self-loop at node " + std::to_string(i) + ")");
  }
  if (topological_order().size() != n) throw std::invalid_argument("RootedTree: cycle in parent map");
}

RootedTree RootedTree::orient(const UndirectedTree& t, Node root) {
  if (root >= t.n()) throw std::invalid_argument("orient: root out of range");
  std::vector<Node> parent(t.n(), kNoParent);
  std::vector<bool> seen(t.n(), false);
  const auto adj = t.adjacency();
  std::queue<Node> q;
  q.push(root);
  seen[root] = true;
  while (!q.empty()) {
    const Node a = q.front();
    q.pop();
    for (Node b : adj[a]) {
      if (seen[b]) continue;
      seen[b] = true;
      parent[b] = a;
      q.push(b);
    }
  }
  return RootedTree(root, std::move(parent));
}

std::vector<std::vector<Node>> RootedTree::children() const {
  std::vector<std::vector<Node>> out(n());
  for (Node i = 0; i < n(); ++i) {
    if (i != root_ && parent_[i] < n()) out[parent_[i]].push_back(i);
  }
  return out;
}

std::vector<Node> RootedTree::topological_order() const {
  const auto kids = children();
  std::vector<Node> order;
  order.reserve(n());
  order.push_back(root_);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (Node c : kids[order[head]]) order.push_back(c);
  }
  return order;
}

UndirectedTree RootedTree::skeleton() const {
  std::vector<Edge> edges;
  for (Node i = 0; i < n(); ++i) {
    if (i != root_) edges.push_back(make_edge(i, parent_[i]));
  }
  return UndirectedTree(n(), std::move(edges));
}

void validate_tree_model(const TreeModel& m) {
  const auto n = m.n(), k = m.k();
  auto check_row = [&](std::span<const double> row, const std::string& where) {
    double total = 0.0;
    for (double v : row) {
      if (!(v >= 0.0)) throw std::invalid_argument(where + ": negative entry");
      total += v;
    }
    if (std::abs(total - 1.0) > kModelSumTol) {
      throw std::invalid_argument(where + ": row sum != 1 (" + std::to_string(total) + ")");
    }
  };
  if (m.root_marginal.size() != k) throw std::invalid_argument("root_marginal: expected k entries");
  check_row(m.root_marginal, "root_marginal");
  if (m.cpt.size() != n) throw std::invalid_argument("cpt: expected one table per node");
  for (Node i = 0; i < n; ++i) {
    if (i == m.tree.root()) {
      if (!m.cpt[i].empty()) throw std::invalid_argument("cpt: root table must be empty");
      continue;
    }
    if (m.cpt[i].size() != k * k) throw std::invalid_argument("cpt[" + std::to_string(i) + "]: expected k*k entries");
    for (std::size_t x = 0; x < k; ++x) {
      check_row(std::span<const double>(m.cpt[i]).subspan(x * k, k),
                "cpt[" + std::to_string(i) + "] row " + std::to_string(x));
    }
  }
}

DenseJoint to_dense(const TreeModel& m, std::size_t cap) {
  const auto n = m.n(), k = m.k();
  const auto size = dense_size(n, k, cap);
  const Node root = m.tree.root();
  std::vector<double> probs(size);
  std::vector<Symbol> x(n, 0);
  std::size_t idx = 0;
  do {
    double p = m.root_marginal[x[root]];
    for (Node i = 0; i < n && p > 0.0; ++i) {
      if (i != root) p *= m.cond(i, x[m.tree.parent(i)], x[i]);
    }
    probs[idx++] = p;
  } while (advance(x, k));
  return DenseJoint(n, m.alphabet, std::move(probs), cap);
}

std::vector<std::vector<double>> node_marginals(const TreeModel& m) {
  const auto k = m.k();
  std::vector<std::vector<double>> marg(m.n());
  for (Node i : m.tree.topological_order()) {
    if (i == m.tree.root()) {
      marg[i] = m.root_marginal;
      continue;
    }
    const auto& pm = marg[m.tree.parent(i)];
    marg[i].assign(k, 0.0);
    for (std::size_t x = 0; x < k; ++x) {
      for (std::size_t y = 0; y < k; ++y) marg[i][y] += pm[x] * m.cpt[i][x * k + y];
    }
  }
  return marg;
}

TreeModel reroot(const TreeModel& m, Node new_root) {
  if (new_root >= m.n()) throw std::invalid_argument("reroot: node " + std::to_string(new_root) + " out of range");
  if (new_root == m.tree.root()) return m;
  const auto k = m.k();
  const auto marg = node_marginals(m);
  auto tree = RootedTree::orient(m.tree.skeleton(), new_root);
  std::vector<std::vector<double>> cpt(m.n());
  for (Node c = 0; c < m.n(); ++c) {
    if (c == new_root) continue;
    const Node p = tree.parent(c);
    if (m.tree.parent(c) == p) {
      cpt[c] = m.cpt[c];
      continue;
    }
    // Edge reversed: old table is P(p | c); Bayes with the old parent's marginal.
    cpt[c].assign(k * k, 0.0);
    for (std::size_t x = 0; x < k; ++x) {
      if (marg[p][x] <= 0.0) {
        std::fill_n(cpt[c].begin() + static_cast<std::ptrdiff_t>(x * k), k, 1.0 / static_cast<double>(k));
        continue;
      }
      double row_total = 0.0;
      for (std::size_t y = 0; y < k; ++y) {
        const double joint = marg[c][y] * m.cpt[p][y * k + x];
        cpt[c][x * k + y] = joint;
        row_total += joint;
      }
      for (std::size_t y = 0; y < k; ++y) cpt[c][x * k + y] /= row_total;
    }
  }
  return TreeModel{std::move(tree), m.alphabet, marg[new_root], std::move(cpt)};
}

SampleSet sample(const TreeModel& m, std::size_t count, std::uint64_t seed) {
  const auto n = m.n(), k = m.k();
  const auto order = m.tree.topological_order();
  const Node root = m.tree.root();
  Rng rng(seed);
  std::vector<Symbol> data(count * n);
  for (std::size_t r = 0; r < count; ++r) {
    Symbol* row = data.data() + r * n;
    for (Node i : order) {
      if (i == root) {
        row[i] = static_cast<Symbol>(rng.categorical(m.root_marginal));
      } else {
        const auto table = std::span<const double>(m.cpt[i]).subspan(row[m.tree.parent(i)] * k, k);
        row[i] = static_cast<Symbol>(rng.categorical(table));
      }
    }
  }
  return SampleSet(n, m.alphabet, std::move(data));
}

SampleSet sample(const DenseJoint& p, std::size_t count, std::uint64_t seed) {
  const auto probs = p.probs();
  std::vector<double> cumulative(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cumulative.begin());
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = i;
  }
  const double total = cumulative.back();
  Rng rng(seed);
  std::vector<Symbol> data;
  data.reserve(count * p.n());
  for (std::size_t r = 0; r < count; ++r) {
    const double u = rng.uniform() * total;
    auto idx = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
    idx = std::min(idx, last_positive);
    const auto x = p.decode(idx);
    data.insert(data.end(), x.begin(), x.end());
  }
  return SampleSet(p.n(), p.alphabet(), std::move(data));
}

std::vector<double> pair_marginal(const TreeModel& m, Node u, Node v) {
  const auto n = m.n(), k = m.k();
  if (u >= n || v >= n) throw std::invalid_argument("pair_marginal: node out of range");
  if (u == v) throw std::invalid_argument("pair_marginal: u and v must differ");
  const auto marg = node_marginals(m);

  // Path u -> lca -> v through parent pointers.
  auto ancestors = [&](Node a) {
    std::vector<Node> chain{a};
    while (chain.back() != m.tree.root()) chain.push_back(m.tree.parent(chain.back()));
    return chain;
  };
  const auto up_u = ancestors(u);
  const auto up_v = ancestors(v);
  std::size_t iu = up_u.size(), iv = up_v.size();
  while (iu > 0 && iv > 0 && up_u[iu - 1] == up_v[iv - 1]) {
    --iu;
    --iv;
  }
  // up_u[0..iu] ends at the lca; up_v[0..iv) descends to v in reverse.

  std::vector<double> joint(k * k, 0.0);  // P(X_u = a, X_cur = b)
  for (std::size_t a = 0; a < k; ++a) joint[a * k + a] = marg[u][a];
  std::vector<double> next(k * k);
  auto step = [&](auto transition) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        const double j = joint[a * k + b];
        if (j == 0.0) continue;
        for (std::size_t c = 0; c < k; ++c) next[a * k + c] += j * transition(b, c);
      }
    joint.swap(next);
  };
  for (std::size_t s = 0; s < iu; ++s) {
    const Node child = up_u[s];
    const Node parent = up_u[s + 1];
    step([&](std::size_t b, std::size_t c) {
      // P(parent = c | child = b)
      if (marg[child][b] <= 0.0) return 0.0;
      return marg[parent][c] * m.cpt[child][c * k + b] / marg[child][b];
    });
  }
  for (std::size_t s = iv; s-- > 0;) {
    const Node child = up_v[s];
    step([&](std::size_t b, std::size_t c) { return m.cpt[child][b * k + c]; });
  }
  return joint;
}

Projection project_onto_tree(const DenseJoint& p, const UndirectedTree& t, Node root) {
  if (t.n() != p.n()) throw std::invalid_argument("project_onto_tree: tree and joint sizes differ");
  const auto k = p.k();
  auto tree = RootedTree::orient(t, root);
  const std::size_t root_var[] = {root};
  auto root_marginal = p.marginal(root_var);
  std::vector<std::vector<double>> cpt(p.n());
  std::vector<DegenerateRow> degenerate;
  for (Node i = 0; i < p.n(); ++i) {
    if (i == root) continue;
    const std::size_t vars[] = {tree.parent(i), i};
    auto joint = p.marginal(vars);
    for (std::size_t x = 0; x < k; ++x) {
      const auto row = std::span<double>(joint).subspan(x * k, k);
      const double mass = std::accumulate(row.begin(), row.end(), 0.0);
      if (mass <= 0.0) {
        std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(k));
        degenerate.push_back({i, static_cast<Symbol>(x)});
      } else {
        for (auto& v : row) v /= mass;
      }
    }
    cpt[i] = std::move(joint);
  }
  return {TreeModel{std::move(tree), p.alphabet(), std::move(root_marginal), std::move(cpt)}, std::move(degenerate)};
}

namespace {

void require_same_shape(const DenseJoint& p, const DenseJoint& q, const char* what) {
  if (p.n() != q.n() || p.k() != q.k()) throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

double kl_vector(std::span<const double> p, std::span<const double> q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p[i] * std::log(p[i] / q[i]);
  }
  return d;
}

double pair_mi(const DenseJoint& p, Node a, Node b) {
  const std::size_t vars[] = {a, b};
  return mutual_information(PairTable(p.k(), p.marginal(vars)));
}

double sum_node_entropies(const DenseJoint& p) {
  double total = 0.0;
  for (std::size_t v = 0; v < p.n(); ++v) {
    const std::size_t var[] = {v};
    total += entropy(p.marginal(var));
  }
  return total;
}

}  // namespace

double kl_divergence(const DenseJoint& p, const DenseJoint& q) {
  require_same_shape(p, q, "kl_divergence");
  return std::max(0.0, kl_vector(p.probs(), q.probs()));
}

TreeKl kl_to_tree_projection(const DenseJoint& p, const UndirectedTree& t) {
  if (t.n() != p.n()) throw std::invalid_argument("kl_to_tree_projection: size mismatch");
  const double j = sum_node_entropies(p) - entropy(p.probs());
  double weight = 0.0;
  for (const auto& e : t.edges()) weight += pair_mi(p, e.u, e.v);
  return {j, weight, std::max(0.0, j - weight)};
}

KlDecomposition kl_decomposition(const DenseJoint& p, const TreeModel& m) {
  if (m.n() != p.n() || m.k() != p.k()) throw std::invalid_argument("kl_decomposition: shape mismatch");
  const auto k = p.k();
  const Node root = m.tree.root();
  const double base = sum_node_entropies(p) - entropy(p.probs());
  double weight = 0.0;
  const std::size_t root_var[] = {root};
  double conditional = kl_vector(p.marginal(root_var), m.root_marginal);
  for (Node i = 0; i < p.n(); ++i) {
    if (i == root) continue;
    const Node parent = m.tree.parent(i);
    const std::size_t vars[] = {parent, i};
    const auto joint = p.marginal(vars);
    weight += mutual_information(PairTable(k, joint));
    for (std::size_t x = 0; x < k; ++x) {
      const auto row = std::span<const double>(joint).subspan(x * k, k);
      const double mass = std::accumulate(row.begin(), row.end(), 0.0);
      if (mass <= 0.0) continue;
      std::vector<double> cond(row.begin(), row.end());
      for (auto& v : cond) v /= mass;
      conditional += mass * kl_vector(cond, std::span<const double>(m.cpt[i]).subspan(x * k, k));
    }
  }
  return {base, weight, conditional, base - weight + conditional};
}

StatisticalDistances statistical_distances(const DenseJoint& p, const DenseJoint& q) {
  require_same_shape(p, q, "statistical_distances");
  double tv = 0.0, h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    tv += std::abs(p[i] - q[i]);
    const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    h += d * d;
  }
  return {std::clamp(0.5 * tv, 0.0, 1.0), std::clamp(0.5 * h, 0.0, 1.0)};
}

}  // namespace chowliu
