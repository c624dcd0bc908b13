#include "omv/bitmatrix.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace omv {

BitMatrix BitMatrix::from_coords(std::size_t rows, std::size_t cols,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& ones) {
  BitMatrix m(rows, cols);
  for (const auto& [i, j] : ones) {
    if (i >= rows || j >= cols) {
      throw std::invalid_argument("from_coords: coordinate (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") outside " + std::to_string(rows) + "x" +
                                  std::to_string(cols));
    }
    m.set(i, j);
  }
  return m;
}

BitMatrix BitMatrix::from_packed_columns(std::size_t rows,
                                         const std::vector<std::vector<Word>>& columns) {
  BitMatrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const std::vector<Word>& col = columns[j];
    for (std::size_t w = 0; w < col.size(); ++w) {
      Word bits = col[w];
      while (bits) {
        unsigned b = std::countr_zero(bits);
        bits &= bits - 1;
        std::size_t i = w * kWordBits + b;
        if (i < rows) m.set(i, j);
      }
    }
  }
  return m;
}

void BitMatrix::sync_columns() const {
  if (mirror_valid_) return;
  col_bits_.assign(cols_ * col_words_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const Word* row = row_ptr(i);
    const Word row_mask = Word{1} << (i % kWordBits);
    const std::size_t row_word = i / kWordBits;
    for (std::size_t w = 0; w < row_words_; ++w) {
      Word bits = row[w];
      while (bits) {
        unsigned b = std::countr_zero(bits);
        bits &= bits - 1;
        std::size_t j = w * kWordBits + b;
        col_bits_[j * col_words_ + row_word] |= row_mask;
      }
    }
  }
  mirror_valid_ = true;
}

void BitMatrix::check_col(std::size_t j, const char* who) const {
  if (j >= cols_) {
    throw std::invalid_argument(std::string(who) + ": column " + std::to_string(j) +
                                " out of range (n=" + std::to_string(cols_) + ")");
  }
}

std::size_t BitMatrix::col_weight(std::size_t j) const {
  check_col(j, "col_weight");
  const Word* c = col_ptr(j);
  std::size_t w = 0;
  for (std::size_t k = 0; k < col_words_; ++k) w += std::popcount(c[k]);
  return w;
}

std::size_t BitMatrix::hamming_cols(std::size_t x, std::size_t y) const {
  check_col(x, "hamming_cols");
  check_col(y, "hamming_cols");
  const Word* cx = col_ptr(x);
  const Word* cy = col_ptr(y);
  std::size_t d = 0;
  for (std::size_t k = 0; k < col_words_; ++k) d += std::popcount(cx[k] ^ cy[k]);
  return d;
}

SparseDelta BitMatrix::delta_cols(std::size_t x, std::size_t y) const {
  check_col(x, "delta_cols");
  check_col(y, "delta_cols");
  const Word* cx = col_ptr(x);
  const Word* cy = col_ptr(y);
  SparseDelta d;
  for (std::size_t k = 0; k < col_words_; ++k) {
    Word diff = cx[k] ^ cy[k];
    if (!diff) continue;
    Word plus = diff & cy[k];  // 1 in y, 0 in x
    while (diff) {
      unsigned b = std::countr_zero(diff);
      diff &= diff - 1;
      std::uint32_t i = static_cast<std::uint32_t>(k * kWordBits + b);
      std::int8_t sign = ((plus >> b) & 1u) ? std::int8_t{1} : std::int8_t{-1};
      d.entries.push_back({i, sign});
    }
  }
  return d;
}

SparseDelta BitMatrix::col_as_delta(std::size_t y) const {
  check_col(y, "col_as_delta");
  const Word* cy = col_ptr(y);
  SparseDelta d;
  for (std::size_t k = 0; k < col_words_; ++k) {
    Word bits = cy[k];
    while (bits) {
      unsigned b = std::countr_zero(bits);
      bits &= bits - 1;
      d.entries.push_back({static_cast<std::uint32_t>(k * kWordBits + b), std::int8_t{1}});
    }
  }
  return d;
}

RealVector BitMatrix::naive_mv(const RealVector& v) const {
  if (v.size() != cols_) {
    throw std::invalid_argument("naive_mv: vector length " + std::to_string(v.size()) +
                                " does not match n=" + std::to_string(cols_));
  }
  RealVector out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const Word* row = row_ptr(i);
    double acc = 0.0;
    for (std::size_t w = 0; w < row_words_; ++w) {
      Word bits = row[w];
      while (bits) {
        unsigned b = std::countr_zero(bits);
        bits &= bits - 1;
        acc += v[w * kWordBits + b];
      }
    }
    out[i] = acc;
  }
  return out;
}

BitMatrix BitMatrix::transposed() const {
  sync_columns();
  BitMatrix t(cols_, rows_);
  // Rows of the transpose are exactly the packed columns of this matrix.
  for (std::size_t j = 0; j < cols_; ++j) {
    const Word* src = col_bits_.data() + j * col_words_;
    Word* dst = t.bits_.data() + j * t.row_words_;
    for (std::size_t k = 0; k < col_words_; ++k) dst[k] = src[k];
  }
  return t;
}

}  // namespace omv
