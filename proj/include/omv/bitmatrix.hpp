#ifndef OMV_BITMATRIX_HPP
#define OMV_BITMATRIX_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace omv {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

using RealVector = std::vector<double>;

/// One signed entry of a sparse column difference.
struct DeltaEntry {
  std::uint32_t index;
  std::int8_t sign;  // -1 or +1
  friend bool operator==(const DeltaEntry&, const DeltaEntry&) = default;
};

/// Sparse difference between two Boolean columns: +1 where the target has a
/// one the source lacks, -1 where the source has a one the target lacks.
/// Entries are kept in strictly increasing index order.
struct SparseDelta {
  std::vector<DeltaEntry> entries;

  std::size_t nnz() const { return entries.size(); }

  /// out += coeff * delta, scattered over the entry indices.
  void accumulate(RealVector& out, double coeff) const {
    for (const DeltaEntry& e : entries) out[e.index] += coeff * e.sign;
  }

  /// Sparse dot product with a dense vector.
  double dot(const RealVector& v) const {
    double acc = 0.0;
    for (const DeltaEntry& e : entries) acc += e.sign * v[e.index];
    return acc;
  }

  friend bool operator==(const SparseDelta&, const SparseDelta&) = default;
};

/// Bit-packed Boolean matrix. Rows are stored as padded machine words; a
/// column-packed mirror is kept alongside so column Hamming kernels run
/// word-parallel. The mirror is rebuilt lazily after mutation, so the first
/// column kernel after a write needs exclusive access; afterwards any number
/// of concurrent readers are safe.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), row_words_(words_for(cols)), col_words_(words_for(rows)),
        bits_(rows * row_words_, 0) {}

  static BitMatrix from_coords(std::size_t rows, std::size_t cols,
                               const std::vector<std::pair<std::size_t, std::size_t>>& ones);

  /// Assemble from column-packed words (each column spans `words_for(rows)` words).
  static BitMatrix from_packed_columns(std::size_t rows,
                                       const std::vector<std::vector<Word>>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t i, std::size_t j) const {
    return (row_ptr(i)[j / kWordBits] >> (j % kWordBits)) & 1u;
  }

  void set(std::size_t i, std::size_t j, bool value = true) {
    Word mask = Word{1} << (j % kWordBits);
    Word& w = bits_[i * row_words_ + j / kWordBits];
    w = value ? (w | mask) : (w & ~mask);
    mirror_valid_ = false;
  }

  const Word* row_ptr(std::size_t i) const { return bits_.data() + i * row_words_; }
  std::size_t row_words() const { return row_words_; }
  std::size_t col_words() const { return col_words_; }

  /// Pointer to the packed column, rebuilding the mirror if stale.
  const Word* col_ptr(std::size_t j) const {
    sync_columns();
    return col_bits_.data() + j * col_words_;
  }

  /// Force the column mirror up to date (call once before concurrent reads).
  void sync_columns() const;

  /// Number of ones in column j.
  std::size_t col_weight(std::size_t j) const;

  /// Number of rows where columns x and y differ.
  std::size_t hamming_cols(std::size_t x, std::size_t y) const;

  /// Signed sparse difference turning column x into column y.
  SparseDelta delta_cols(std::size_t x, std::size_t y) const;

  /// Column y expressed as a delta from the all-zero column.
  SparseDelta col_as_delta(std::size_t y) const;

  /// Exact dense product; the per-row reference every engine is tested against.
  RealVector naive_mv(const RealVector& v) const;

  BitMatrix transposed() const;

  bool operator==(const BitMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && bits_ == other.bits_;
  }

 private:
  void check_col(std::size_t j, const char* who) const;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t row_words_ = 0;
  std::size_t col_words_ = 0;
  std::vector<Word> bits_;

  mutable std::vector<Word> col_bits_;
  mutable bool mirror_valid_ = false;
};

}  // namespace omv

#endif
