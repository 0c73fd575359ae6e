#pragma once

#include <utility>
#include <vector>

#include "chowliu/model.hpp"
#include "chowliu/samples.hpp"

namespace chowliu {

/// Symmetric n x n table of nonnegative pairwise weights; the diagonal is unused.
class MIMatrix {
 public:
  explicit MIMatrix(std::size_t n);
  MIMatrix(std::size_t n, std::vector<double> weights);

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double w);
  std::span<const double> weights() const noexcept { return w_; }

  bool operator==(const MIMatrix&) const = default;

 private:
  std::size_t n_;
  std::vector<double> w_;
};

/// Plug-in MI of every column pair from one pass over the samples (OpenMP row chunks).
MIMatrix mi_matrix(const SampleSet& s, int threads = 0);
/// Reference path over the serial pair-count kernel.
MIMatrix mi_matrix_serial(const SampleSet& s);

/// True pairwise MI of a known distribution.
MIMatrix exact_mi_matrix(const DenseJoint& p);
MIMatrix exact_mi_matrix(const TreeModel& m);

double tree_weight(const MIMatrix& w, const UndirectedTree& t);

/// Kruskal. Edges are taken in order of weight descending, then smaller endpoint
/// ascending, then larger endpoint ascending, so ties resolve deterministically.
UndirectedTree max_weight_spanning_tree(const MIMatrix& w);

UndirectedTree chow_liu_structure(const SampleSet& s, int threads = 0);

/// Structure rooted at node 0, then add-1 parameters.
TreeModel learn_tree_distribution(const SampleSet& s, int threads = 0);

/// Pairs (e_i, f_i) with e_i in t1 \ t2 and f_i in t2 \ t1 such that each
/// t1 + f_i - e_i is a spanning tree. Built by repeatedly cutting t1 at e and
/// taking the first crossing edge on the t2 path between e's endpoints.
std::vector<std::pair<Edge, Edge>> exchange_pairing(const UndirectedTree& t1, const UndirectedTree& t2);

/// Per-pair MI accuracy eps / (2n) that makes the Chow-Liu tree eps-approximate.
double mi_accuracy_budget(double total_eps, std::size_t n);

}  // namespace chowliu
