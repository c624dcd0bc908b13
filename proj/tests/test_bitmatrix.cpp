#include <doctest.h>

#include <sstream>

#include "omv/bitmatrix.hpp"
#include "omv/io.hpp"
#include "omv/rng.hpp"
#include "oracles.hpp"

using namespace omv;

TEST_CASE("from_coords basics") {
  BitMatrix zero = BitMatrix::from_coords(2, 2, {});
  CHECK(zero.rows() == 2);
  CHECK(zero.cols() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) CHECK_FALSE(zero.get(i, j));
  }

  BitMatrix id = BitMatrix::from_coords(2, 2, {{0, 0}, {1, 1}});
  CHECK(id.get(0, 0));
  CHECK(id.get(1, 1));
  CHECK_FALSE(id.get(0, 1));
  CHECK_FALSE(id.get(1, 0));

  CHECK_THROWS_AS(BitMatrix::from_coords(2, 2, {{2, 0}}), std::invalid_argument);
  // duplicates are an idempotent set
  BitMatrix dup = BitMatrix::from_coords(2, 2, {{0, 1}, {0, 1}});
  CHECK(dup.get(0, 1));
}

TEST_CASE("from_coords matches a membership oracle") {
  rng::Stream st(7, "from_coords");
  std::vector<std::pair<std::size_t, std::size_t>> ones;
  for (int k = 0; k < 6; ++k) ones.emplace_back(st.next_below(3), st.next_below(4));
  BitMatrix m = BitMatrix::from_coords(3, 4, ones);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      bool expect = false;
      for (const auto& [a, b] : ones) expect |= (a == i && b == j);
      CHECK(m.get(i, j) == expect);
    }
  }
}

TEST_CASE("hamming_cols against scalar loop") {
  rng::Stream st(11, "hamming");
  BitMatrix m = oracles::random_matrix(64, 2, 0.5, st);
  CHECK(m.hamming_cols(0, 0) == 0);
  CHECK(m.hamming_cols(0, 1) == oracles::hamming_loop(m, 0, 1));
  CHECK(m.hamming_cols(0, 1) == m.hamming_cols(1, 0));

  // column vs its complement differs everywhere
  BitMatrix c(65, 2);
  for (std::size_t i = 0; i < 65; ++i) {
    if (i % 3 == 0) {
      c.set(i, 0);
    } else {
      c.set(i, 1);
    }
  }
  CHECK(c.hamming_cols(0, 1) == 65);
  CHECK_THROWS_AS(m.hamming_cols(0, 2), std::invalid_argument);
}

TEST_CASE("delta_cols applies exactly") {
  rng::Stream st(13, "delta");
  for (int rep = 0; rep < 20; ++rep) {
    std::size_t m = 1 + st.next_below(100);
    BitMatrix mat = oracles::random_matrix(m, 3, 0.4, st);
    for (std::size_t x = 0; x < 3; ++x) {
      for (std::size_t y = 0; y < 3; ++y) {
        SparseDelta d = mat.delta_cols(x, y);
        CHECK(d.nnz() == mat.hamming_cols(x, y));
        CHECK(oracles::apply_delta(mat, x, d) == oracles::dense_column(mat, y));
        // strictly increasing indices
        for (std::size_t k = 1; k < d.entries.size(); ++k) {
          CHECK(d.entries[k - 1].index < d.entries[k].index);
        }
      }
    }
  }

  BitMatrix m(4, 2);
  for (std::size_t i = 0; i < 4; ++i) m.set(i, 1);
  SparseDelta d = m.delta_cols(0, 1);
  REQUIRE(d.nnz() == 4);
  for (const auto& e : d.entries) CHECK(e.sign == 1);
  CHECK(m.delta_cols(0, 0).nnz() == 0);
}

TEST_CASE("naive_mv basics") {
  BitMatrix id = BitMatrix::from_coords(3, 3, {{0, 0}, {1, 1}, {2, 2}});
  CHECK(id.naive_mv({1, 2, 3}) == RealVector{1, 2, 3});

  BitMatrix zero(4, 3);
  CHECK(zero.naive_mv({5, 6, 7}) == RealVector{0, 0, 0, 0});

  BitMatrix ones(2, 3);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) ones.set(i, j);
  }
  CHECK(ones.naive_mv({1, 1, 1}) == RealVector{3, 3});

  CHECK_THROWS_AS(ones.naive_mv({1, 1}), std::invalid_argument);

  // n = 0 gives the zero vector of length m
  BitMatrix empty(3, 0);
  CHECK(empty.naive_mv({}) == RealVector{0, 0, 0});
}

TEST_CASE("naive_mv is monotone over 0/1 vectors") {
  rng::Stream st(17, "monotone");
  for (int rep = 0; rep < 10; ++rep) {
    BitMatrix m = oracles::random_matrix(8, 12, 0.5, st);
    RealVector lo(12), hi(12);
    for (std::size_t j = 0; j < 12; ++j) {
      lo[j] = st.next_bool() ? 1.0 : 0.0;
      hi[j] = lo[j] == 1.0 ? 1.0 : (st.next_bool() ? 1.0 : 0.0);
    }
    RealVector a = m.naive_mv(lo), b = m.naive_mv(hi);
    for (std::size_t i = 0; i < 8; ++i) CHECK(a[i] <= b[i]);
  }
}

TEST_CASE("transpose is an involution") {
  BitMatrix id = BitMatrix::from_coords(3, 3, {{0, 0}, {1, 1}, {2, 2}});
  CHECK(id.transposed() == id);

  BitMatrix row = BitMatrix::from_coords(1, 3, {{0, 0}, {0, 2}});
  BitMatrix col = row.transposed();
  CHECK(col.rows() == 3);
  CHECK(col.cols() == 1);
  CHECK(col.get(0, 0));
  CHECK_FALSE(col.get(1, 0));
  CHECK(col.get(2, 0));

  rng::Stream st(19, "transpose");
  for (int rep = 0; rep < 10; ++rep) {
    BitMatrix m = oracles::random_matrix(1 + st.next_below(70), 1 + st.next_below(70), 0.3, st);
    CHECK(m.transposed().transposed() == m);
  }
}

TEST_CASE("hamming triangle inequality on random triples") {
  rng::Stream st(23, "triangle");
  BitMatrix m = oracles::random_matrix(50, 12, 0.5, st);
  for (int rep = 0; rep < 50; ++rep) {
    std::size_t x = st.next_below(12), y = st.next_below(12), z = st.next_below(12);
    CHECK(m.hamming_cols(x, z) <= m.hamming_cols(x, y) + m.hamming_cols(y, z));
  }
}
