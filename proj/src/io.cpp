#include "omv/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace omv {

namespace {

bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  ++lineno;
  return true;
}

std::size_t parse_count(const std::string& tok, std::size_t lineno, const char* what) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size() || v < 0) throw std::invalid_argument(tok);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ParseError(lineno, std::string("expected non-negative integer for ") + what + ", got '" +
                                 tok + "'");
  }
}

}  // namespace

BitMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;

  if (!next_line(in, line, lineno)) throw ParseError(1, "missing header");
  std::istringstream hdr(line);
  std::string magic, kind, mtok, ntok, extra;
  hdr >> magic >> kind >> mtok >> ntok;
  if (magic != "%%OMV" || kind != "bitmatrix" || mtok.empty() || ntok.empty() || (hdr >> extra)) {
    throw ParseError(lineno, "malformed header, expected '%%OMV bitmatrix <m> <n>'");
  }
  std::size_t m = parse_count(mtok, lineno, "row count");
  std::size_t n = parse_count(ntok, lineno, "column count");

  if (!next_line(in, line, lineno)) throw ParseError(lineno + 1, "missing format line");
  if (line == "dense") {
    BitMatrix mat(m, n);
    for (std::size_t i = 0; i < m; ++i) {
      if (!next_line(in, line, lineno)) {
        throw ParseError(lineno + 1, "row-count mismatch: expected " + std::to_string(m) +
                                         " dense rows, got " + std::to_string(i));
      }
      if (line.size() != n) {
        throw ParseError(lineno, "col-count mismatch: expected " + std::to_string(n) +
                                     " characters, got " + std::to_string(line.size()));
      }
      for (std::size_t j = 0; j < n; ++j) {
        char c = line[j];
        if (c == '1') {
          mat.set(i, j);
        } else if (c != '0') {
          throw ParseError(lineno, std::string("illegal character '") + c + "' in dense row");
        }
      }
    }
    return mat;
  }
  if (line == "coo") {
    BitMatrix mat(m, n);
    while (next_line(in, line, lineno)) {
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      std::istringstream ls(line);
      std::string itok, jtok;
      if (!(ls >> itok >> jtok) || (ls >> extra)) {
        throw ParseError(lineno, "expected 'i j' pair, got '" + line + "'");
      }
      std::size_t i = parse_count(itok, lineno, "row index");
      std::size_t j = parse_count(jtok, lineno, "column index");
      if (i >= m || j >= n) {
        throw ParseError(lineno, "coordinate (" + itok + "," + jtok + ") outside " +
                                     std::to_string(m) + "x" + std::to_string(n));
      }
      mat.set(i, j);
    }
    return mat;
  }
  throw ParseError(lineno, "unknown format '" + line + "', expected 'dense' or 'coo'");
}

void write_matrix(const BitMatrix& m, std::ostream& out, MatrixFormat format) {
  out << "%%OMV bitmatrix " << m.rows() << ' ' << m.cols() << '\n';
  if (format == MatrixFormat::Dense) {
    out << "dense\n";
    std::string row(m.cols(), '0');
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) row[j] = m.get(i, j) ? '1' : '0';
      out << row << '\n';
    }
  } else {
    out << "coo\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (m.get(i, j)) out << i << ' ' << j << '\n';
      }
    }
  }
}

BitMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file '" + path + "'");
  return read_matrix(in);
}

void write_matrix_file(const BitMatrix& m, const std::string& path, MatrixFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_matrix(m, out, format);
}

RealVector read_vector(std::istream& in) {
  RealVector v;
  std::string line;
  std::size_t lineno = 0;
  while (next_line(in, line, lineno)) {
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t pos = 0;
      double x = std::stod(line, &pos);
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
      if (pos != line.size()) throw std::invalid_argument(line);
      v.push_back(x);
    } catch (const std::exception&) {
      throw ParseError(lineno, "expected one decimal per line, got '" + line + "'");
    }
  }
  return v;
}

void write_vector(const RealVector& v, std::ostream& out) {
  out.precision(17);
  for (double x : v) out << x << '\n';
}

RealVector read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vector file '" + path + "'");
  return read_vector(in);
}

}  // namespace omv
