#include "chowliu/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>

namespace chowliu {

PairCounts::PairCounts(std::size_t n, std::size_t k)
    : n_(n), k_(k), counts_(n < 2 ? 0 : n * (n - 1) / 2 * k * k, 0) {}

std::size_t PairCounts::pair_index(std::size_t i, std::size_t j) const {
  if (i >= j || j >= n_) throw std::invalid_argument("PairCounts: need i < j < n");
  // Pairs (0,1) (0,2) ... (0,n-1) (1,2) ...
  return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
}

std::span<const std::uint64_t> PairCounts::table(std::size_t i, std::size_t j) const {
  return std::span<const std::uint64_t>(counts_).subspan(pair_index(i, j) * k_ * k_, k_ * k_);
}

void PairCounts::merge(const PairCounts& other) {
  if (other.n_ != n_ || other.k_ != k_) throw std::invalid_argument("PairCounts::merge: shape mismatch");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

namespace {

void accumulate_rows(const SampleSet& s, std::size_t begin, std::size_t end, std::span<std::uint64_t> out) {
  const std::size_t n = s.n(), k = s.k(), kk = k * k;
  for (std::size_t r = begin; r < end; ++r) {
    const auto row = s.row(r);
    std::uint64_t* table = out.data();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const std::size_t base = row[i] * k;
      for (std::size_t j = i + 1; j < n; ++j) {
        ++table[base + row[j]];
        table += kk;
      }
    }
  }
}

std::size_t column_index(std::span<const Symbol> row, std::span<const std::size_t> columns, std::size_t k) {
  std::size_t idx = 0;
  for (auto c : columns) idx = idx * k + row[c];
  return idx;
}

std::size_t table_size(const SampleSet& s, std::span<const std::size_t> columns) {
  std::size_t size = 1;
  for (std::size_t a = 0; a < columns.size(); ++a) {
    if (columns[a] >= s.n()) throw std::invalid_argument("count_columns: column out of range");
    for (std::size_t b = 0; b < a; ++b) {
      if (columns[a] == columns[b]) throw std::invalid_argument("count_columns: repeated column");
    }
    size *= s.k();
  }
  return size;
}

}  // namespace

PairCounts accumulate_pair_counts_serial(const SampleSet& s) {
  PairCounts counts(s.n(), s.k());
  accumulate_rows(s, 0, s.size(), counts.raw());
  return counts;
}

PairCounts accumulate_pair_counts(const SampleSet& s, int threads) {
  const int workers = threads > 0 ? threads : omp_get_max_threads();
  const std::size_t rows = s.size();
  std::vector<PairCounts> partial(static_cast<std::size_t>(workers), PairCounts(s.n(), s.k()));
#pragma omp parallel for num_threads(workers) schedule(static)
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = rows * static_cast<std::size_t>(w) / static_cast<std::size_t>(workers);
    const std::size_t end = rows * static_cast<std::size_t>(w + 1) / static_cast<std::size_t>(workers);
    accumulate_rows(s, begin, end, partial[static_cast<std::size_t>(w)].raw());
  }
  PairCounts total(s.n(), s.k());
  for (const auto& p : partial) total.merge(p);
  return total;
}

std::vector<std::uint64_t> count_columns_serial(const SampleSet& s, std::span<const std::size_t> columns) {
  std::vector<std::uint64_t> counts(table_size(s, columns), 0);
  for (std::size_t r = 0; r < s.size(); ++r) ++counts[column_index(s.row(r), columns, s.k())];
  return counts;
}

std::vector<std::uint64_t> count_columns(const SampleSet& s, std::span<const std::size_t> columns, int threads) {
  const auto size = table_size(s, columns);
  const int workers = threads > 0 ? threads : omp_get_max_threads();
  const std::size_t rows = s.size();
  std::vector<std::vector<std::uint64_t>> partial(static_cast<std::size_t>(workers),
                                                  std::vector<std::uint64_t>(size, 0));
#pragma omp parallel for num_threads(workers) schedule(static)
  for (int w = 0; w < workers; ++w) {
    const std::size_t begin = rows * static_cast<std::size_t>(w) / static_cast<std::size_t>(workers);
    const std::size_t end = rows * static_cast<std::size_t>(w + 1) / static_cast<std::size_t>(workers);
    auto& local = partial[static_cast<std::size_t>(w)];
    for (std::size_t r = begin; r < end; ++r) ++local[column_index(s.row(r), columns, s.k())];
  }
  std::vector<std::uint64_t> total(size, 0);
  for (const auto& p : partial)
    for (std::size_t i = 0; i < size; ++i) total[i] += p[i];
  return total;
}

}  // namespace chowliu
