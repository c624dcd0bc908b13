#ifndef OMV_IO_HPP
#define OMV_IO_HPP

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "omv/bitmatrix.hpp"

namespace omv {

/// Parse failure carrying the 1-based line number of the offending input.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class MatrixFormat { Dense, Coo };

// Matrix file: `%%OMV bitmatrix <m> <n>` then `dense` or `coo`.
// dense: m lines of exactly n characters from {0,1}.
// coo:   one `i j` pair per line, 0-indexed, until EOF.
BitMatrix read_matrix(std::istream& in);
void write_matrix(const BitMatrix& m, std::ostream& out, MatrixFormat format = MatrixFormat::Dense);

BitMatrix read_matrix_file(const std::string& path);
void write_matrix_file(const BitMatrix& m, const std::string& path,
                       MatrixFormat format = MatrixFormat::Dense);

// Vector file: one decimal real per line, length implied by the file.
RealVector read_vector(std::istream& in);
void write_vector(const RealVector& v, std::ostream& out);
RealVector read_vector_file(const std::string& path);

}  // namespace omv

#endif
