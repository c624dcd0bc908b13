// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fail. Tolerances are pinned in code next to each check.
#include <omp.h>

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "omv/engine_dynamic.hpp"
#include "omv/engine_static.hpp"
#include "omv/graphapps.hpp"
#include "omv/lapsolve.hpp"
#include "omv/pollard.hpp"
#include "omv/rng.hpp"
#include "omv/synthgen.hpp"
#include "omv/tree.hpp"
#include "oracles.hpp"

using namespace omv;

namespace {

struct Failure {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---------------------------------------------------------------- 1
std::string static_exactness() {
  rng::Stream st(20250801, "acc.static");
  for (int rep = 0; rep < 1000; ++rep) {
    std::size_t m, n;
    if (rep == 0) {
      m = 0, n = 3;  // edge shapes first
    } else if (rep == 1) {
      m = 3, n = 0;
    } else if (rep == 2) {
      m = 1, n = 1;
    } else {
      m = 1 + st.next_below(256);
      n = 1 + st.next_below(256);
    }
    double density = 0.05 + 0.9 * st.next_unit();
    BitMatrix mat = oracles::random_matrix(m, n, density, st);
    StaticOmv s = StaticOmv::preprocess(mat);
    RealVector v = oracles::random_int_vector(n, -(1 << 20), 1 << 20, st);
    RealVector expectv = mat.naive_mv(v);
    expect(s.mv_rowtree(v) == expectv, "row-tree mismatch at rep " + std::to_string(rep));
    expect(s.mv_coltree(v) == expectv, "col-tree mismatch at rep " + std::to_string(rep));
  }
  return "1000 random (M,v) bit-exact across both tree algorithms";
}

// ---------------------------------------------------------------- 2
std::string dynamic_equivalence() {
  rng::Stream st(20250802, "acc.dynamic");
  std::size_t queries_checked = 0;
  for (int trace = 0; trace < 100; ++trace) {
    std::size_t m0 = st.next_below(24);
    std::size_t n0 = st.next_below(24);
    oracles::DynFuzzDriver f{oracles::random_matrix(m0, n0, 0.5, st)};
    for (int op = 0; op < 2000; ++op) {
      std::uint64_t pick = st.next_below(100);
      if (pick < 22 && f.row_ids.size() <= 128 && f.col_ids.size() < 128) {
        std::vector<std::uint8_t> bits(f.row_ids.size());
        for (auto& b : bits) b = st.next_bool();
        f.insert_col(bits);
      } else if (pick < 40 && f.col_ids.size() <= 128 && f.row_ids.size() < 128) {
        std::vector<std::uint8_t> bits(f.col_ids.size());
        for (auto& b : bits) b = st.next_bool();
        f.insert_row(bits);
      } else if (pick < 56 && !f.col_ids.empty()) {
        f.delete_col(st.next_below(f.col_ids.size()));
      } else if (pick < 68 && !f.row_ids.empty()) {
        f.delete_row(st.next_below(f.row_ids.size()));
      } else {
        RealVector v = oracles::random_int_vector(f.col_ids.size(), -1024, 1024, st);
        expect(f.dyn.query(v) == f.shadow.mv(v),
               "query mismatch in trace " + std::to_string(trace));
        ++queries_checked;
      }
      f.dyn.audit();  // capacity and tombstone invariants after every op
    }
  }
  return fmt("%.0f queries oracle-exact over 100x2000 audited ops", double(queries_checked));
}

// ---------------------------------------------------------------- 3
std::string weight_law() {
  auto slope_for = [](bool corrupted) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
    for (std::size_t n : {64u, 128u, 256u, 512u, 1024u}) {
      for (std::uint64_t seedrep = 0; seedrep < 5; ++seedrep) {
        std::size_t cpr = corrupted
                              ? static_cast<std::size_t>(std::floor(std::sqrt(double(n))))
                              : 0;
        SynthSpec spec = make_spec(Family::Interval, n, n, cpr,
                                   rng::derive(20250803 + seedrep, "acc.law"));
        DeltaTree t = build_mst(generate(spec));
        double x = std::log(double(n));
        double y = std::log(double(std::max<std::size_t>(t.weight, 1)));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        cnt += 1;
      }
    }
    return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  };
  double clean = slope_for(false);
  double corrupted = slope_for(true);
  expect(clean <= 1.6, fmt("clean interval slope %.3f exceeds 1.6", clean));
  expect(corrupted <= 1.6, fmt("corrupted interval slope %.3f exceeds 1.6", corrupted));
  return fmt("interval slope %.3f clean, %.3f with sqrt(n) corruption (bound 1.6)", clean,
             corrupted);
}

// ---------------------------------------------------------------- 4
std::string unstructured_floor() {
  double worst = 1.0;
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    SynthSpec spec = make_spec(Family::Random, 512, 512, 0, seed);
    DeltaTree t = build_mst(generate(spec));
    double frac = double(t.weight) / (512.0 * 512.0);
    worst = std::min(worst, frac);
    expect(frac >= 0.3, fmt("random 512x512 weight fraction %.3f below 0.3", frac));
  }
  return fmt("random 512x512 MST weight >= %.3f of mn (floor 0.3)", worst);
}

// ---------------------------------------------------------------- 5
std::string linearization_bound() {
  rng::Stream st(20250805, "acc.lin");
  for (int rep = 0; rep < 200; ++rep) {
    std::size_t m = 1 + st.next_below(64);
    std::size_t n = 1 + st.next_below(64);
    BitMatrix mat = oracles::random_matrix(m, n, 0.1 + 0.8 * st.next_unit(), st);
    DeltaTree t = build_mst(mat);
    DeltaTree p = linearize(t, mat);
    expect(p.weight <= 2 * t.weight + m,
           fmt("linearized weight %.0f exceeds 2*%.0f + m", double(p.weight), double(t.weight)));
  }
  return "200 fuzzed matrices satisfy weight(path) <= 2*weight(T) + m";
}

// ---------------------------------------------------------------- 6
std::string bmm_correctness() {
  rng::Stream st(20250806, "acc.bmm");
  for (int rep = 0; rep < 50; ++rep) {
    BitMatrix a = oracles::random_matrix(32, 32, 0.1 + 0.5 * st.next_unit(), st);
    BitMatrix b = oracles::random_matrix(32, 32, 0.1 + 0.5 * st.next_unit(), st);
    IntMatrix got = StaticOmv::preprocess(a).bmm(b);
    IntMatrix want = oracles::triple_loop_product(a, b);
    expect(got == want, "integer product mismatch at rep " + std::to_string(rep));
    for (std::size_t i = 0; i < 32; ++i) {
      for (std::size_t j = 0; j < 32; ++j) {
        expect((got.at(i, j) >= 1) == (want.at(i, j) >= 1), "boolean threshold mismatch");
      }
    }
  }
  return "50 random 32x32 pairs match the cubic product exactly";
}

// ---------------------------------------------------------------- 7
std::string pollard_exactness() {
  rng::Stream st(20250807, "acc.pollard");
  for (int rep = 0; rep < 500; ++rep) {
    std::size_t nvals = 1 + st.next_below(8);
    std::vector<double> values;
    for (std::size_t k = 0; k < nvals; ++k) {
      values.push_back(double(st.next_int(-30, 30)));
    }
    std::size_t m = 1 + st.next_below(64);
    std::size_t n = 1 + st.next_below(64);
    NumericMatrix mat(m, n);
    for (double& x : mat.a) x = values[st.next_below(values.size())];
    ThresholdDecomp d = ThresholdDecomp::decompose(mat, 8);
    RealVector v = oracles::random_int_vector(n, -100, 100, st);
    RealVector got = d.mv(v);
    RealVector want(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) want[i] += mat.at(i, j) * v[j];
    }
    expect(got == want, "numeric product mismatch at rep " + std::to_string(rep));
    for (std::size_t k = 1; k < d.level_count(); ++k) {
      const BitMatrix& hi = d.level_engine(k).matrix();
      const BitMatrix& lo = d.level_engine(k - 1).matrix();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          expect(!hi.get(i, j) || lo.get(i, j), "level sets not monotone");
        }
      }
    }
  }
  return "500 few-valued integer matrices multiply exactly with monotone levels";
}

// ---------------------------------------------------------------- 8
std::string triangle_maintenance() {
  rng::Stream st(20250808, "acc.tri");
  for (std::size_t n : {48u, 64u}) {
    BitMatrix a(n, n);
    DynGraph g(a);
    auto verts = g.live_vertices();
    for (int step = 0; step < 200; ++step) {
      std::uint64_t v = verts[st.next_below(n)];
      std::vector<std::uint64_t> nbrs;
      double p = 0.02 + 0.1 * st.next_unit();
      for (std::uint64_t u : verts) {
        if (u != v && st.next_unit() < p) nbrs.push_back(u);
      }
      g.vertex_update(v, nbrs);
      std::int64_t brute = oracles::brute_triangles(g.adjacency_ranks());
      expect(g.triangle_trace() == 6 * brute,
             fmt("trace %.0f != 6 * %.0f", double(g.triangle_trace()), double(brute)));
    }
  }
  return "400 vertex updates keep s equal to six times the brute count";
}

// ---------------------------------------------------------------- 9
std::string bounded_sssp_exact() {
  rng::Stream st(20250809, "acc.sssp");
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t n = 2 + st.next_below(127);
    double p = (1.0 + 2.0 * st.next_unit()) / double(n);
    BitMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (st.next_unit() < p) {
          a.set(i, j);
          a.set(j, i);
        }
      }
    }
    DynGraph g(a);
    auto adj = g.adjacency_ranks();
    for (int q = 0; q < 5; ++q) {
      std::size_t src = st.next_below(n);
      expect(g.bounded_sssp(g.live_vertices()[src], n - 1) == oracles::bfs_distances(adj, src),
             "distance mismatch at rep " + std::to_string(rep));
    }
  }
  return "100 graphs x 5 sources equal breadth-first search exactly";
}

// ---------------------------------------------------------------- 10
RealVector pinv_solve(const DynGraph& g, const RealVector& b) {
  const std::size_t n = g.vertex_count();
  auto adj = g.adjacency_ranks();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    lap(i, i) = double(adj[i].size());
    for (std::uint32_t j : adj[i]) lap(i, j) -= 1.0;
  }
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs(i) = b[i];
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(lap);
  Eigen::VectorXd x = cod.solve(rhs);
  x.array() -= x.mean();
  return RealVector(x.data(), x.data() + n);
}

double energy_norm(DynGraph& g, const RealVector& v) {
  RealVector lv = g.laplacian_mv(v);
  double q = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) q += v[i] * lv[i];
  return std::sqrt(std::max(q, 0.0));
}

std::string laplacian_accuracy() {
  rng::Stream st(20250810, "acc.lap");
  double worst_rel = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    std::size_t n = 20 + st.next_below(181);  // up to 200
    double p = std::max(0.05, 1.6 * std::log(double(n)) / double(n));
    BitMatrix a(n, n);
    DynGraph* gp = nullptr;
    DynGraph g;
    while (true) {
      a = BitMatrix(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (st.next_unit() < p) {
            a.set(i, j);
            a.set(j, i);
          }
        }
      }
      g = DynGraph(a);
      auto dist = oracles::bfs_distances(g.adjacency_ranks(), 0);
      bool connected = true;
      for (double d : dist) connected &= std::isfinite(d);
      if (connected) break;
    }
    gp = &g;

    RealVector b = oracles::random_int_vector(n, -100, 100, st);
    double mean = 0.0;
    for (double x : b) mean += x;
    mean /= double(n);
    for (double& x : b) x -= mean;

    SolverState s(*gp, 4000 + rep);
    RealVector x = s.solve(b, 1e-8);
    RealVector want = pinv_solve(*gp, b);
    RealVector diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = x[i] - want[i];
    double rel = energy_norm(*gp, diff) / std::max(energy_norm(*gp, want), 1e-300);
    worst_rel = std::max(worst_rel, rel);
    expect(rel <= 1e-8, fmt("energy-norm error %.3g above 1e-8 at n=%.0f", rel, double(n)));
  }

  // path endpoints: n-1 within 1e-6 relative
  for (std::size_t n : {4u, 32u, 99u}) {
    BitMatrix a(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      a.set(i, i + 1);
      a.set(i + 1, i);
    }
    DynGraph g(a);
    SolverState s(g, 77);
    double r = s.effective_resistance(0, n - 1, 1e-6);
    expect(std::abs(r - double(n - 1)) <= 1e-6 * double(n - 1),
           fmt("path resistance %.9f off n-1=%.0f", r, double(n - 1)));
  }

  // K_4: every pair at 1/2 within the query tolerance
  BitMatrix k4(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i != j) k4.set(i, j);
    }
  }
  DynGraph g4(k4);
  SolverState s4(g4, 78);
  for (std::size_t u = 0; u < 4; ++u) {
    for (std::size_t v = u + 1; v < 4; ++v) {
      double r = s4.effective_resistance(u, v, 1e-8);
      expect(std::abs(r - 0.5) <= 1e-8 * 0.5, fmt("K4 resistance %.12f off 0.5", r));
    }
  }
  return fmt("50 solves, worst energy error %.2e (tol 1e-8); P_n and K_4 resistances exact",
             worst_rel);
}

// ---------------------------------------------------------------- 11
std::string cost_accounting() {
  rng::Stream st(20250811, "acc.cost");
  double worst_frac = 0.0;
  for (std::uint64_t seed : {11ull, 12ull}) {
    SynthSpec spec = make_spec(Family::Interval, 1024, 1024, 0, seed);
    StaticOmv s = StaticOmv::preprocess(generate(spec));
    for (int q = 0; q < 8; ++q) {
      RealVector v = oracles::random_int_vector(1024, -100, 100, st);
      QueryStats stats;
      s.mv(v, &stats);
      std::size_t used = s.prefers_row_tree() ? s.row_tree().weight : s.col_tree().weight;
      expect(stats.touched_nonzeros <= used, "touched_nonzeros above the tree weight");
      double frac = double(stats.touched_nonzeros) / (1024.0 * 1024.0);
      worst_frac = std::max(worst_frac, frac);
      expect(stats.touched_nonzeros <= 1024 * 1024 / 8,
             fmt("touched fraction %.4f above mn/8", frac));
    }
  }
  return fmt("interval 1024^2 queries touch <= %.4f of mn (bound 0.125), always <= weight",
             worst_frac);
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<std::string()> run;
  };
  const std::vector<Criterion> criteria = {
      {"static exactness", static_exactness},
      {"dynamic oracle equivalence", dynamic_equivalence},
      {"MST weight law (interval, d=2)", weight_law},
      {"unstructured weight floor", unstructured_floor},
      {"linearization bound", linearization_bound},
      {"boolean matrix product", bmm_correctness},
      {"threshold decomposition exactness", pollard_exactness},
      {"triangle trace maintenance", triangle_maintenance},
      {"bounded single-source distances", bounded_sssp_exact},
      {"laplacian solver accuracy", laplacian_accuracy},
      {"query cost accounting", cost_accounting},
  };

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    double t0 = omp_get_wtime();
    std::string detail;
    bool ok = true;
    try {
      detail = criteria[k].run();
    } catch (const Failure& f) {
      ok = false;
      detail = f.what;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("unexpected exception: ") + e.what();
    }
    double secs = omp_get_wtime() - t0;
    std::printf("[%2zu/11] %s  %-34s (%.1fs) %s\n", k + 1, ok ? "PASS" : "FAIL",
                criteria[k].name, secs, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  if (failed) {
    std::printf("ACCEPTANCE: %d of 11 criteria FAILED\n", failed);
    return 1;
  }
  std::printf("ACCEPTANCE: 11/11 criteria passed\n");
  return 0;
}
