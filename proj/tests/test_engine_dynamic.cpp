#include <doctest.h>

#include <algorithm>

#include "omv/engine_dynamic.hpp"
#include "omv/rng.hpp"
#include "oracles.hpp"

using namespace omv;

using FuzzDriver = oracles::DynFuzzDriver;

namespace {

void check_query(FuzzDriver& f, omv::rng::Stream& st) {
  RealVector v = oracles::random_int_vector(f.col_ids.size(), -64, 64, st);
  CHECK(f.dyn.query(v) == f.shadow.mv(v));
}

}  // namespace

TEST_CASE("construction examples") {
  DynOmv empty{BitMatrix(0, 0)};
  for (auto [stored, tombs] : empty.bucket_occupancy()) {
    CHECK(stored == 0);
    CHECK(tombs == 0);
  }
  CHECK(empty.query({}).empty());
  empty.audit();

  DynOmv one{BitMatrix::from_coords(1, 1, {{0, 0}})};
  CHECK(one.stripe_occupancy().size() == 1);
  CHECK(one.bucket_occupancy().size() == 1);
  CHECK(one.query({3.0}) == RealVector{3.0});
  one.audit();

  rng::Stream st(101, "dyn_new");
  BitMatrix m8 = oracles::random_matrix(8, 8, 0.5, st);
  DynOmv d8(m8);
  for (int rep = 0; rep < 50; ++rep) {
    RealVector v = oracles::random_int_vector(8, -9, 9, st);
    CHECK(d8.query(v) == m8.naive_mv(v));
  }
  d8.audit();
}

TEST_CASE("insert cascade follows the binary counter") {
  DynOmv d{BitMatrix(2, 0)};
  d.insert_col({1, 0});
  auto occ = d.bucket_occupancy();
  CHECK(occ[0].first == 1);
  d.audit();

  d.insert_col({0, 1});
  occ = d.bucket_occupancy();  // 2 > 2^0 so both moved up
  CHECK(occ[0].first == 0);
  CHECK(occ[1].first == 2);
  d.audit();

  d.insert_col({1, 1});
  occ = d.bucket_occupancy();
  CHECK(occ[0].first == 1);
  CHECK(occ[1].first == 2);
  d.audit();

  CHECK(d.query({1, 1, 1}) == RealVector{2, 2});
}

TEST_CASE("insert then delete is a net no-op") {
  rng::Stream st(103, "noop");
  BitMatrix m = oracles::random_matrix(6, 6, 0.5, st);
  DynOmv d(m);
  RealVector probe = oracles::random_int_vector(6, -9, 9, st);
  RealVector before = d.query(probe);
  std::uint64_t id = d.insert_col({1, 0, 1, 0, 1, 0});
  d.delete_col(id);
  CHECK(d.query(probe) == before);
  d.audit();
}

TEST_CASE("deleting every column leaves the zero map") {
  rng::Stream st(107, "delete_all");
  BitMatrix m = oracles::random_matrix(5, 7, 0.6, st);
  DynOmv d(m);
  for (std::uint64_t id = 0; id < 7; ++id) d.delete_col(id);
  CHECK(d.live_col_count() == 0);
  CHECK(d.query({}) == RealVector(5, 0.0));
  d.audit();
}

TEST_CASE("delete errors") {
  DynOmv d{BitMatrix(2, 2)};
  CHECK_THROWS_AS(d.delete_col(9), std::invalid_argument);
  d.delete_col(0);
  CHECK_THROWS_AS(d.delete_col(0), std::invalid_argument);
  CHECK_THROWS_AS(d.delete_row(7), std::invalid_argument);
}

TEST_CASE("length mismatches are errors") {
  DynOmv d{BitMatrix(3, 2)};
  CHECK_THROWS_AS(d.insert_col({1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(d.insert_row({1}), std::invalid_argument);
  CHECK_THROWS_AS(d.query({1.0}), std::invalid_argument);
}

TEST_CASE("500 random inserts interleaved with queries") {
  rng::Stream st(109, "inserts");
  FuzzDriver f{BitMatrix(4, 0)};
  for (int k = 0; k < 500; ++k) {
    std::vector<std::uint8_t> bits(f.row_ids.size());
    for (auto& b : bits) b = st.next_bool();
    f.insert_col(bits);
    f.dyn.audit();
    if (k % 10 == 0) check_query(f, st);
  }
  check_query(f, st);
}

TEST_CASE("amortized rebuild accounting on an insert-only trace") {
  const std::size_t T = 300;
  DynOmv d{BitMatrix(4, 0)};
  rng::Stream st(113, "accounting");
  for (std::size_t k = 0; k < T; ++k) {
    std::vector<std::uint8_t> bits(4);
    for (auto& b : bits) b = st.next_bool();
    d.insert_col(bits);
  }
  std::size_t levels = 1;
  while ((std::size_t{1} << (levels - 1)) < T) ++levels;
  for (std::size_t s = 0; s < d.stripe_occupancy().size(); ++s) {
    CHECK(d.insert_rebuilt_columns(s) <= T * levels);
  }
}

TEST_CASE("mixed fuzz traces match the shadow and keep the invariants") {
  rng::Stream st(127, "fuzz");
  for (int trace = 0; trace < 8; ++trace) {
    std::size_t m0 = st.next_below(6);
    std::size_t n0 = st.next_below(6);
    FuzzDriver f{oracles::random_matrix(m0, n0, 0.5, st)};
    for (int op = 0; op < 400; ++op) {
      std::uint64_t pick = st.next_below(100);
      if (pick < 28) {
        std::vector<std::uint8_t> bits(f.row_ids.size());
        for (auto& b : bits) b = st.next_bool();
        f.insert_col(bits);
      } else if (pick < 46) {
        std::vector<std::uint8_t> bits(f.col_ids.size());
        for (auto& b : bits) b = st.next_bool();
        f.insert_row(bits);
      } else if (pick < 64 && !f.col_ids.empty()) {
        f.delete_col(st.next_below(f.col_ids.size()));
      } else if (pick < 78 && !f.row_ids.empty()) {
        f.delete_row(st.next_below(f.row_ids.size()));
      } else {
        check_query(f, st);
      }
      f.dyn.audit();
      CHECK(f.dyn.live_row_count() == f.row_ids.size());
      CHECK(f.dyn.live_col_count() == f.col_ids.size());
    }
    // the materialized logical matrix equals the shadow bit for bit
    BitMatrix got = f.dyn.materialize();
    REQUIRE(got.rows() == f.shadow.rows.size());
    REQUIRE(got.cols() == f.shadow.ncols);
    for (std::size_t i = 0; i < got.rows(); ++i) {
      for (std::size_t j = 0; j < got.cols(); ++j) {
        CHECK(got.get(i, j) == (f.shadow.rows[i][j] != 0));
      }
    }
  }
}

TEST_CASE("stored footprint stays within twice the intended size") {
  rng::Stream st(131, "footprint");
  FuzzDriver f{oracles::random_matrix(8, 8, 0.5, st)};
  for (int op = 0; op < 300; ++op) {
    if (st.next_bool() || f.col_ids.empty()) {
      std::vector<std::uint8_t> bits(f.row_ids.size());
      for (auto& b : bits) b = st.next_bool();
      f.insert_col(bits);
    } else {
      f.delete_col(st.next_below(f.col_ids.size()));
    }
    auto occ = f.dyn.bucket_occupancy();
    for (std::size_t b = 0; b < occ.size(); ++b) {
      CHECK(occ[b].first <= 2 * (std::size_t{1} << b));
    }
  }
}
