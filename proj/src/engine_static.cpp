#include "omv/engine_static.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace omv {

StaticOmv StaticOmv::preprocess(BitMatrix m) {
  StaticOmv s;
  s.mat_ = std::move(m);
  s.col_tree_ = build_mst(s.mat_);
  s.row_tree_ = build_mst(s.mat_.transposed());
  s.col_dfs_ = dfs_preorder(s.col_tree_);
  s.row_dfs_ = dfs_preorder(s.row_tree_);
  return s;
}

void StaticOmv::check_len(const RealVector& v) const {
  if (v.size() != mat_.cols()) {
    throw std::invalid_argument("mv: vector length " + std::to_string(v.size()) +
                                " does not match n=" + std::to_string(mat_.cols()));
  }
}

RealVector StaticOmv::mv(const RealVector& v, QueryStats* stats) const {
  return prefers_row_tree() ? mv_rowtree(v, stats) : mv_coltree(v, stats);
}

RealVector StaticOmv::mv_rowtree(const RealVector& v, QueryStats* stats) const {
  check_len(v);
  const std::size_t m = mat_.rows();
  QueryStats st;

  // phi[x] = <row x, v>; the virtual root is the zero row.
  RealVector phi(m + 1, 0.0);
  for (std::uint32_t x : row_dfs_) {
    ++st.dense_ops;
    if (x == row_tree_.root) continue;
    const SparseDelta& d = row_tree_.label[x];
    phi[x] = phi[row_tree_.parent[x]] + d.dot(v);
    st.touched_nonzeros += d.nnz();
  }
  RealVector out(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(m));
  st.dense_ops += m;
  if (stats) *stats = st;
  return out;
}

RealVector StaticOmv::mv_coltree(const RealVector& v, QueryStats* stats) const {
  check_len(v);
  const std::size_t m = mat_.rows();
  const std::size_t n = mat_.cols();
  QueryStats st;

  // sigma[x] = sum of v over the real columns in the subtree rooted at x,
  // built leaf edges first by walking the preorder backwards.
  RealVector sigma(n + 1, 0.0);
  for (std::size_t k = col_dfs_.size(); k-- > 0;) {
    std::uint32_t x = col_dfs_[k];
    double s = (x == col_tree_.root) ? 0.0 : v[x];
    for (std::uint32_t c : col_tree_.children[x]) s += sigma[c];
    sigma[x] = s;
    ++st.dense_ops;
  }

  RealVector out(m, 0.0);
  st.dense_ops += m;
  for (std::uint32_t x : col_dfs_) {
    if (x == col_tree_.root) continue;
    double s = sigma[x];
    if (s == 0.0) continue;
    const SparseDelta& d = col_tree_.label[x];
    d.accumulate(out, s);
    st.touched_nonzeros += d.nnz();
  }
  if (stats) *stats = st;
  return out;
}

IntMatrix StaticOmv::bmm(const BitMatrix& b) const {
  if (b.rows() != mat_.cols()) {
    throw std::invalid_argument("bmm: inner dimensions " + std::to_string(mat_.cols()) + " and " +
                                std::to_string(b.rows()) + " do not match");
  }
  IntMatrix out(mat_.rows(), b.cols());
  RealVector vj(b.rows());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < b.rows(); ++i) vj[i] = b.get(i, j) ? 1.0 : 0.0;
    RealVector y = mv(vj);
    for (std::size_t i = 0; i < out.rows; ++i) out.at(i, j) = std::llround(y[i]);
  }
  return out;
}

}  // namespace omv
