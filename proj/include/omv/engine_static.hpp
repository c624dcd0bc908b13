#ifndef OMV_ENGINE_STATIC_HPP
#define OMV_ENGINE_STATIC_HPP

#include <cstdint>
#include <vector>

#include "omv/bitmatrix.hpp"
#include "omv/tree.hpp"

namespace omv {

/// Work accounting for one query: sparse label entries visited plus the
/// constant-per-row/column dense work.
struct QueryStats {
  std::size_t touched_nonzeros = 0;
  std::size_t dense_ops = 0;
};

enum class MvAlgo { Auto, RowTree, ColTree };

/// Small dense integer matrix, the result type of Boolean matrix products.
struct IntMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::int64_t> a;  // row-major

  IntMatrix() = default;
  IntMatrix(std::size_t m, std::size_t n) : rows(m), cols(n), a(m * n, 0) {}
  std::int64_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  std::int64_t at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;
};

/// Preprocessed matrix-vector engine. Holds one delta tree over the columns
/// and one over the rows; a query walks whichever tree is cheaper and costs
/// O(tree weight + n + m) instead of O(mn). Immutable after construction,
/// so any number of concurrent queries are safe.
class StaticOmv {
 public:
  static StaticOmv preprocess(BitMatrix m);

  const BitMatrix& matrix() const { return mat_; }
  std::size_t rows() const { return mat_.rows(); }
  std::size_t cols() const { return mat_.cols(); }

  const DeltaTree& col_tree() const { return col_tree_; }
  const DeltaTree& row_tree() const { return row_tree_; }

  std::size_t cost_row() const { return row_tree_.weight + mat_.cols() + mat_.rows(); }
  std::size_t cost_col() const { return col_tree_.weight + mat_.cols() + mat_.rows(); }
  bool prefers_row_tree() const { return cost_row() <= cost_col(); }

  /// Dispatches to whichever tree is cheaper; results are identical.
  RealVector mv(const RealVector& v, QueryStats* stats = nullptr) const;

  /// Telescope along the row tree: each row's product differs from its
  /// parent row's by a sparse signed dot with v.
  RealVector mv_rowtree(const RealVector& v, QueryStats* stats = nullptr) const;

  /// Bottom-up subtree sums over the column tree, then one sparse pass over
  /// the labels scaled by the sums.
  RealVector mv_coltree(const RealVector& v, QueryStats* stats = nullptr) const;

  /// Multiply against every column of b; threshold at >= 1 for the Boolean product.
  IntMatrix bmm(const BitMatrix& b) const;

 private:
  StaticOmv() = default;
  void check_len(const RealVector& v) const;

  BitMatrix mat_;
  DeltaTree col_tree_;
  DeltaTree row_tree_;
  std::vector<std::uint32_t> col_dfs_;
  std::vector<std::uint32_t> row_dfs_;
};

}  // namespace omv

#endif
