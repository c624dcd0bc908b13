#include "omv/pollard.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "omv/io.hpp"

namespace omv {

ThresholdDecomp ThresholdDecomp::decompose(const NumericMatrix& m, std::size_t max_distinct) {
  ThresholdDecomp d;
  d.rows_ = m.rows;
  d.cols_ = m.cols;
  if (m.a.empty()) return d;

  std::set<double> distinct(m.a.begin(), m.a.end());
  if (distinct.size() > max_distinct) {
    throw std::invalid_argument("decompose: " + std::to_string(distinct.size()) +
                                " distinct values exceed the cap of " +
                                std::to_string(max_distinct));
  }
  d.base_offset_ = *distinct.begin();

  // Levels compare against the original values, so integer-valued input
  // reconstructs without any rounding.
  double prev = d.base_offset_;
  for (auto it = std::next(distinct.begin()); it != distinct.end(); ++it) {
    double value = *it;
    d.thresholds_.push_back(value - d.base_offset_);
    d.weights_.push_back(value - prev);
    prev = value;

    BitMatrix level(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
      for (std::size_t j = 0; j < m.cols; ++j) {
        if (m.at(i, j) >= value) level.set(i, j);
      }
    }
    d.engines_.push_back(StaticOmv::preprocess(std::move(level)));
  }
  return d;
}

RealVector ThresholdDecomp::mv(const RealVector& v, QueryStats* stats) const {
  if (v.size() != cols_) {
    throw std::invalid_argument("mv: vector length " + std::to_string(v.size()) +
                                " does not match n=" + std::to_string(cols_));
  }
  double vsum = 0.0;
  for (double x : v) vsum += x;
  RealVector out(rows_, base_offset_ * vsum);

  QueryStats total;
  total.dense_ops += cols_ + rows_;
  for (std::size_t k = 0; k < engines_.size(); ++k) {
    QueryStats st;
    RealVector y = engines_[k].mv(v, &st);
    total.touched_nonzeros += st.touched_nonzeros;
    total.dense_ops += st.dense_ops;
    const double w = weights_[k];
    for (std::size_t i = 0; i < rows_; ++i) out[i] += w * y[i];
  }
  if (stats) *stats = total;
  return out;
}

NumericMatrix read_numeric(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&](std::string& out_line) {
    if (!std::getline(in, out_line)) return false;
    if (!out_line.empty() && out_line.back() == '\r') out_line.pop_back();
    ++lineno;
    return true;
  };

  if (!next_line(line)) throw ParseError(1, "missing header");
  std::istringstream hdr(line);
  std::string magic, kind;
  long long m = -1, n = -1;
  hdr >> magic >> kind >> m >> n;
  if (magic != "%%OMV" || kind != "numeric" || m < 0 || n < 0) {
    throw ParseError(lineno, "malformed header, expected '%%OMV numeric <m> <n>'");
  }

  NumericMatrix mat(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < mat.rows; ++i) {
    if (!next_line(line)) {
      throw ParseError(lineno + 1, "row-count mismatch: expected " + std::to_string(mat.rows) +
                                       " rows, got " + std::to_string(i));
    }
    std::istringstream ls(line);
    for (std::size_t j = 0; j < mat.cols; ++j) {
      if (!(ls >> mat.at(i, j))) {
        throw ParseError(lineno, "expected " + std::to_string(mat.cols) + " decimals in row " +
                                     std::to_string(i));
      }
    }
    std::string extra;
    if (ls >> extra) throw ParseError(lineno, "trailing content '" + extra + "'");
  }
  return mat;
}

void write_numeric(const NumericMatrix& m, std::ostream& out) {
  out << "%%OMV numeric " << m.rows << ' ' << m.cols << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (j) out << ' ';
      out << m.at(i, j);
    }
    out << '\n';
  }
}

NumericMatrix read_numeric_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open numeric matrix file '" + path + "'");
  return read_numeric(in);
}

}  // namespace omv
