#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "omv/graphapps.hpp"
#include "omv/rng.hpp"
#include "oracles.hpp"

using namespace omv;

namespace {

BitMatrix random_adjacency(std::size_t n, double p, rng::Stream& st) {
  BitMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (st.next_unit() < p) {
        a.set(i, j);
        a.set(j, i);
      }
    }
  }
  return a;
}

std::vector<std::uint64_t> random_nbrs(const std::vector<std::uint64_t>& verts, std::uint64_t self,
                                       double p, rng::Stream& st) {
  std::vector<std::uint64_t> nbrs;
  for (std::uint64_t u : verts) {
    if (u != self && st.next_unit() < p) nbrs.push_back(u);
  }
  return nbrs;
}

}  // namespace

TEST_CASE("construction validates the adjacency") {
  BitMatrix notsquare(2, 3);
  CHECK_THROWS_AS(DynGraph{notsquare}, std::invalid_argument);

  BitMatrix diag(2, 2);
  diag.set(0, 0);
  CHECK_THROWS_AS(DynGraph{diag}, std::invalid_argument);

  BitMatrix asym(2, 2);
  asym.set(0, 1);
  CHECK_THROWS_AS(DynGraph{asym}, std::invalid_argument);
}

TEST_CASE("triangle trace on known graphs") {
  DynGraph empty;
  CHECK_FALSE(empty.has_triangle());

  // K_3 via initial adjacency
  BitMatrix k3(3, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) k3.set(i, j);
    }
  }
  DynGraph g(k3);
  CHECK(g.triangle_trace() == 6);
  CHECK(g.has_triangle());
  g.audit();

  // isolate one corner: the triangle disappears
  g.vertex_update(0, {});
  CHECK(g.triangle_trace() == 0);
  CHECK_FALSE(g.has_triangle());
  g.audit();
}

TEST_CASE("K_3 built by three vertex updates") {
  DynGraph g;
  std::uint64_t a = g.insert_vertex({});
  std::uint64_t b = g.insert_vertex({});
  std::uint64_t c = g.insert_vertex({});
  CHECK(g.triangle_trace() == 0);
  g.vertex_update(a, {b});
  g.vertex_update(b, {a, c});
  CHECK(g.triangle_trace() == 0);
  g.vertex_update(c, {a, b});
  CHECK(g.triangle_trace() == 6);
  g.audit();
}

TEST_CASE("insert and delete keep the trace honest") {
  rng::Stream st(163, "insdel");
  DynGraph g(random_adjacency(10, 0.3, st));
  // isolated vertex changes nothing
  std::int64_t before = g.triangle_trace();
  std::uint64_t v = g.insert_vertex({});
  CHECK(g.triangle_trace() == before);
  g.delete_vertex(v);
  CHECK(g.triangle_trace() == before);
  g.audit();

  // trace always matches six times the brute count through a random trace
  for (int op = 0; op < 60; ++op) {
    auto verts = g.live_vertices();
    std::uint64_t pick = st.next_below(100);
    if (pick < 25 || verts.size() < 3) {
      g.insert_vertex(random_nbrs(verts, ~0ull, 0.3, st));
    } else if (pick < 45) {
      g.delete_vertex(verts[st.next_below(verts.size())]);
    } else {
      std::uint64_t x = verts[st.next_below(verts.size())];
      g.vertex_update(x, random_nbrs(verts, x, 0.3, st));
    }
    g.audit();
    CHECK(g.triangle_trace() == 6 * oracles::brute_triangles(g.adjacency_ranks()));
  }
}

TEST_CASE("errors on bad vertex updates") {
  DynGraph g;
  std::uint64_t a = g.insert_vertex({});
  CHECK_THROWS_AS(g.vertex_update(a, {a}), std::invalid_argument);  // self-loop
  CHECK_THROWS_AS(g.vertex_update(99, {}), std::invalid_argument);
  CHECK_THROWS_AS(g.vertex_update(a, {42}), std::invalid_argument);
  CHECK_THROWS_AS(g.delete_vertex(17), std::invalid_argument);
}

TEST_CASE("trace is a function of the final graph, not the update order") {
  rng::Stream st(167, "order");
  const std::size_t n = 12;
  BitMatrix target = random_adjacency(n, 0.35, st);

  std::int64_t results[3];
  for (int variant = 0; variant < 3; ++variant) {
    DynGraph g;
    std::vector<std::uint64_t> ids;
    for (std::size_t k = 0; k < n; ++k) ids.push_back(g.insert_vertex({}));
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    for (std::size_t k = n; k > 1; --k) {
      std::swap(order[k - 1], order[st.next_below(k)]);
    }
    for (std::size_t k : order) {
      std::vector<std::uint64_t> nbrs;
      for (std::size_t j = 0; j < n; ++j) {
        if (target.get(k, j)) nbrs.push_back(ids[j]);
      }
      g.vertex_update(ids[k], nbrs);
    }
    results[variant] = g.triangle_trace();
    CHECK(g.triangle_trace() == 6 * oracles::brute_triangles(g.adjacency_ranks()));
  }
  CHECK(results[0] == results[1]);
  CHECK(results[1] == results[2]);
}

TEST_CASE("bounded sssp on a path") {
  BitMatrix p5(5, 5);
  for (std::size_t i = 0; i + 1 < 5; ++i) {
    p5.set(i, i + 1);
    p5.set(i + 1, i);
  }
  DynGraph g(p5);
  auto d = g.bounded_sssp(0, 4);
  CHECK(d == std::vector<double>{0, 1, 2, 3, 4});
  auto d2 = g.bounded_sssp(0, 2);
  CHECK(d2[0] == 0);
  CHECK(d2[2] == 2);
  CHECK(d2[3] == std::numeric_limits<double>::infinity());
  CHECK(g.bounded_sssp(4, 0)[4] == 0);  // dmax = 0 reaches only the source
}

TEST_CASE("bounded sssp equals BFS on random graphs") {
  rng::Stream st(173, "sssp");
  for (int rep = 0; rep < 12; ++rep) {
    std::size_t n = 2 + st.next_below(40);
    DynGraph g(random_adjacency(n, 0.08 + 0.1 * st.next_unit(), st));
    auto adj = g.adjacency_ranks();
    for (int q = 0; q < 3; ++q) {
      std::size_t src = st.next_below(n);
      CHECK(g.bounded_sssp(g.live_vertices()[src], n - 1) == oracles::bfs_distances(adj, src));
    }
  }
}

TEST_CASE("laplacian products") {
  // all-ones vector is in the kernel
  rng::Stream st(179, "lap");
  DynGraph g(random_adjacency(14, 0.3, st));
  RealVector ones(14, 1.0);
  RealVector lv = g.laplacian_mv(ones);
  for (double x : lv) CHECK(x == 0.0);

  // single edge: L e_u = e_u - e_w
  BitMatrix edge(2, 2);
  edge.set(0, 1);
  edge.set(1, 0);
  DynGraph ge(edge);
  CHECK(ge.laplacian_mv({1, 0}) == RealVector{1, -1});

  // dense oracle comparison, and column sums vanish
  for (int rep = 0; rep < 10; ++rep) {
    std::size_t n = 2 + st.next_below(20);
    DynGraph gr(random_adjacency(n, 0.4, st));
    auto adj = gr.adjacency_ranks();
    RealVector v = oracles::random_int_vector(n, -20, 20, st);
    RealVector got = gr.laplacian_mv(v);
    double colsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double expect = static_cast<double>(adj[i].size()) * v[i];
      for (std::uint32_t j : adj[i]) expect -= v[j];
      CHECK(got[i] == expect);
      colsum += got[i];
    }
    CHECK(std::abs(colsum) <= 1e-9);
  }
}

TEST_CASE("normalized laplacian matches the dense formula") {
  rng::Stream st(181, "normlap");
  std::size_t n = 12;
  BitMatrix a = random_adjacency(n, 0.3, st);
  DynGraph g(a);
  auto adj = g.adjacency_ranks();
  RealVector v = oracles::random_int_vector(n, -9, 9, st);
  RealVector got = g.normalized_laplacian_mv(v);
  for (std::size_t i = 0; i < n; ++i) {
    double di = static_cast<double>(adj[i].size());
    double expect = 0.0;
    if (di > 0) {
      expect = v[i];
      for (std::uint32_t j : adj[i]) {
        double dj = static_cast<double>(adj[j].size());
        expect -= v[j] / std::sqrt(di * dj);
      }
    }
    CHECK(std::abs(got[i] - expect) <= 1e-12 * (1 + std::abs(expect)));
  }

  // isolated vertices map to zero
  DynGraph gi;
  gi.insert_vertex({});
  CHECK(gi.normalized_laplacian_mv({5.0}) == RealVector{0.0});
}

TEST_CASE("updates after deletions keep rank bookkeeping straight") {
  rng::Stream st(191, "ranks");
  DynGraph g(random_adjacency(9, 0.3, st));
  g.delete_vertex(3);
  g.delete_vertex(7);
  auto verts = g.live_vertices();
  std::uint64_t x = verts[2], y = verts[5];
  g.vertex_update(x, {y});
  g.audit();
  auto adj = g.adjacency_ranks();
  CHECK(std::count(adj[2].begin(), adj[2].end(), 5) == 1);
  CHECK(g.triangle_trace() == 6 * oracles::brute_triangles(adj));
  // degree vector tracks the sets
  RealVector deg = g.degree_vector();
  for (std::size_t k = 0; k < adj.size(); ++k) {
    CHECK(deg[k] == static_cast<double>(adj[k].size()));
  }
}
