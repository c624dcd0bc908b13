#ifndef OMV_POLLARD_HPP
#define OMV_POLLARD_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "omv/bitmatrix.hpp"
#include "omv/engine_static.hpp"

namespace omv {

/// Dense numeric matrix, row-major.
struct NumericMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  NumericMatrix() = default;
  NumericMatrix(std::size_t m, std::size_t n) : rows(m), cols(n), a(m * n, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

/// Matrix-vector engine for numeric matrices with few distinct values.
/// The matrix is split into one Boolean level set per distinct value above
/// the minimum; each level set gets its own tree engine and the levels
/// recombine through telescoping weights:
///   M = c + sum_k w_k B^(k),  B^(1) >= B^(2) >= ... as 0/1 sets.
class ThresholdDecomp {
 public:
  /// Splits m into level sets. Refuses matrices with more than max_distinct
  /// values (they are outside the few-thresholds regime).
  static ThresholdDecomp decompose(const NumericMatrix& m, std::size_t max_distinct = 64);

  RealVector mv(const RealVector& v, QueryStats* stats = nullptr) const;

  double base_offset() const { return base_offset_; }
  std::size_t level_count() const { return engines_.size(); }
  const std::vector<double>& thresholds() const { return thresholds_; }
  const std::vector<double>& weights() const { return weights_; }
  const StaticOmv& level_engine(std::size_t k) const { return engines_[k]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

 private:
  double base_offset_ = 0.0;        // c, the smallest matrix value
  std::vector<double> thresholds_;  // tau_k = v_k - c for the distinct values above c
  std::vector<double> weights_;     // w_k = tau_k - tau_{k-1}
  std::vector<StaticOmv> engines_;  // engine for B^(k)
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
};

// Numeric matrix file: `%%OMV numeric <m> <n>` then m lines of n decimals.
NumericMatrix read_numeric(std::istream& in);
void write_numeric(const NumericMatrix& m, std::ostream& out);
NumericMatrix read_numeric_file(const std::string& path);

}  // namespace omv

#endif
