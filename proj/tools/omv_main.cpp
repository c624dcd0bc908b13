// omv: build/query delta-tree matrix-vector engines, replay update traces,
// run the dynamic-graph applications, generate structured inputs, and
// benchmark tree weights against the naive baseline.
#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "omv/engine_dynamic.hpp"
#include "omv/engine_static.hpp"
#include "omv/graphapps.hpp"
#include "omv/io.hpp"
#include "omv/lapsolve.hpp"
#include "omv/pollard.hpp"
#include "omv/rng.hpp"
#include "omv/synthgen.hpp"
#include "omv/tree.hpp"
#include "omv/version.hpp"

using json = nlohmann::json;

namespace {

void print_value(double x) {
  if (x == std::floor(x) && std::abs(x) < 1e15) {
    std::printf("%.0f", x);
  } else {
    std::printf("%.17g", x);
  }
}

void print_vector_lines(const omv::RealVector& v) {
  for (double x : v) {
    print_value(x);
    std::printf("\n");
  }
}

int cmd_build(const std::string& matrix_path, const std::string& out_col,
              const std::string& out_row) {
  omv::BitMatrix m = omv::read_matrix_file(matrix_path);
  omv::StaticOmv s = omv::StaticOmv::preprocess(std::move(m));
  std::printf("rows %zu cols %zu\n", s.rows(), s.cols());
  std::printf("weight_col %zu\n", s.col_tree().weight);
  std::printf("weight_row %zu\n", s.row_tree().weight);
  std::printf("query_cost %zu naive_cost %zu\n", std::min(s.cost_row(), s.cost_col()),
              s.rows() * s.cols());
  if (!out_col.empty()) {
    std::ofstream out(out_col);
    if (!out) throw std::runtime_error("cannot open '" + out_col + "' for writing");
    omv::write_tree_dump(s.col_tree(), out);
  }
  if (!out_row.empty()) {
    std::ofstream out(out_row);
    if (!out) throw std::runtime_error("cannot open '" + out_row + "' for writing");
    omv::write_tree_dump(s.row_tree(), out);
  }
  return 0;
}

int cmd_mv(const std::string& matrix_path, const std::string& vector_path,
           const std::string& algo) {
  omv::BitMatrix m = omv::read_matrix_file(matrix_path);
  omv::RealVector v = omv::read_vector_file(vector_path);
  if (algo == "naive") {
    print_vector_lines(m.naive_mv(v));
    return 0;
  }
  omv::StaticOmv s = omv::StaticOmv::preprocess(std::move(m));
  omv::RealVector y;
  if (algo == "row") {
    y = s.mv_rowtree(v);
  } else if (algo == "col") {
    y = s.mv_coltree(v);
  } else if (algo == "auto") {
    y = s.mv(v);
  } else {
    throw std::invalid_argument("unknown algo '" + algo + "' (auto|row|col|naive)");
  }
  print_vector_lines(y);
  return 0;
}

int cmd_replay(const std::string& matrix_path, const std::string& trace_path, bool audit) {
  omv::BitMatrix initial = omv::read_matrix_file(matrix_path);
  std::vector<omv::TraceOp> ops = omv::read_trace_file(trace_path);

  omv::DynOmv dyn(initial);

  // shadow state for --audit, indexed by live rank
  std::vector<std::vector<std::uint8_t>> shadow;
  std::vector<std::uint64_t> row_ids, col_ids;
  if (audit) {
    shadow.resize(initial.rows());
    for (std::size_t i = 0; i < initial.rows(); ++i) {
      shadow[i].resize(initial.cols());
      for (std::size_t j = 0; j < initial.cols(); ++j) shadow[i][j] = initial.get(i, j);
    }
  }
  for (std::size_t i = 0; i < initial.rows(); ++i) row_ids.push_back(i);
  for (std::size_t j = 0; j < initial.cols(); ++j) col_ids.push_back(j);

  auto rank_of = [](std::vector<std::uint64_t>& ids, std::uint64_t id) {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it == ids.end() || *it != id) throw std::invalid_argument("unknown id in trace");
    return static_cast<std::size_t>(it - ids.begin());
  };

  std::size_t mismatches = 0;
  for (const omv::TraceOp& op : ops) {
    switch (op.kind) {
      case omv::TraceOp::Kind::InsCol: {
        omv::BitVec bits(row_ids.size(), 0);
        for (std::size_t pos : op.coords) {
          if (pos >= bits.size()) throw std::invalid_argument("INSCOL position out of range");
          bits[pos] = 1;
        }
        col_ids.push_back(dyn.insert_col(bits));
        if (audit) {
          for (std::size_t i = 0; i < shadow.size(); ++i) shadow[i].push_back(bits[i]);
        }
        break;
      }
      case omv::TraceOp::Kind::InsRow: {
        omv::BitVec bits(col_ids.size(), 0);
        for (std::size_t pos : op.coords) {
          if (pos >= bits.size()) throw std::invalid_argument("INSROW position out of range");
          bits[pos] = 1;
        }
        row_ids.push_back(dyn.insert_row(bits));
        if (audit) shadow.push_back(bits);
        break;
      }
      case omv::TraceOp::Kind::DelCol: {
        std::size_t r = rank_of(col_ids, op.id);
        dyn.delete_col(op.id);
        col_ids.erase(col_ids.begin() + static_cast<std::ptrdiff_t>(r));
        if (audit) {
          for (auto& row : shadow) row.erase(row.begin() + static_cast<std::ptrdiff_t>(r));
        }
        break;
      }
      case omv::TraceOp::Kind::DelRow: {
        std::size_t r = rank_of(row_ids, op.id);
        dyn.delete_row(op.id);
        row_ids.erase(row_ids.begin() + static_cast<std::ptrdiff_t>(r));
        if (audit) shadow.erase(shadow.begin() + static_cast<std::ptrdiff_t>(r));
        break;
      }
      case omv::TraceOp::Kind::Query: {
        omv::RealVector v = omv::read_vector_file(op.vector_path);
        omv::RealVector y = dyn.query(v);
        for (std::size_t i = 0; i < y.size(); ++i) {
          if (i) std::printf(" ");
          print_value(y[i]);
        }
        std::printf("\n");
        if (audit) {
          for (std::size_t i = 0; i < shadow.size(); ++i) {
            double expect = 0.0;
            for (std::size_t j = 0; j < v.size(); ++j) {
              if (shadow[i][j]) expect += v[j];
            }
            if (expect != y[i]) ++mismatches;
          }
        }
        break;
      }
    }
    if (audit) dyn.audit();
  }
  if (audit) {
    std::fprintf(stderr, "audit: %zu mismatches\n", mismatches);
    if (mismatches) return 1;
  }
  return 0;
}

int cmd_graph_triangle(const std::string& graph_path) {
  omv::DynGraph g{omv::read_graph_file(graph_path)};
  std::printf("triangle %s\n", g.has_triangle() ? "yes" : "no");
  std::printf("trace %lld\n", static_cast<long long>(g.triangle_trace()));
  return 0;
}

int cmd_graph_sssp(const std::string& graph_path, std::uint64_t source, long long dmax) {
  omv::DynGraph g{omv::read_graph_file(graph_path)};
  std::size_t bound = dmax < 0 ? (g.vertex_count() ? g.vertex_count() - 1 : 0)
                               : static_cast<std::size_t>(dmax);
  std::vector<double> dist = g.bounded_sssp(source, bound);
  for (double d : dist) {
    if (std::isinf(d)) {
      std::printf("inf\n");
    } else {
      std::printf("%.0f\n", d);
    }
  }
  return 0;
}

int cmd_graph_solve(const std::string& graph_path, const std::string& rhs_path, double eps,
                    std::uint64_t seed) {
  omv::DynGraph g{omv::read_graph_file(graph_path)};
  omv::SolverState s(g, seed);
  omv::RealVector b = omv::read_vector_file(rhs_path);
  print_vector_lines(s.solve(b, eps));
  return 0;
}

int cmd_graph_resist(const std::string& graph_path, std::uint64_t u, std::uint64_t v, double eps,
                     std::uint64_t seed) {
  omv::DynGraph g{omv::read_graph_file(graph_path)};
  omv::SolverState s(g, seed);
  std::printf("%.12g\n", s.effective_resistance(u, v, eps));
  return 0;
}

int cmd_gen(const std::string& family, std::size_t rows, std::size_t cols, std::size_t corruption,
            std::uint64_t seed, const std::string& out_path, const std::string& format) {
  omv::SynthSpec spec =
      omv::make_spec(omv::family_from_name(family), rows, cols, corruption, seed);
  omv::BitMatrix m = omv::generate(spec);
  omv::MatrixFormat f = format == "coo" ? omv::MatrixFormat::Coo : omv::MatrixFormat::Dense;
  if (out_path.empty() || out_path == "-") {
    omv::write_matrix(m, std::cout, f);
  } else {
    omv::write_matrix_file(m, out_path, f);
  }
  return 0;
}

std::vector<std::size_t> parse_sizes(const std::string& sizes) {
  std::vector<std::size_t> out;
  auto dots = sizes.find("..");
  if (dots == std::string::npos) {
    out.push_back(std::stoull(sizes));
    return out;
  }
  std::size_t a = std::stoull(sizes.substr(0, dots));
  std::size_t b = std::stoull(sizes.substr(dots + 2));
  if (a == 0 || b < a) throw std::invalid_argument("bad --sizes range '" + sizes + "'");
  for (std::size_t n = a; n <= b; n *= 2) out.push_back(n);
  return out;
}

int cmd_bench(const std::string& family, const std::string& sizes, double corruption_mult,
              std::size_t reps, std::size_t queries, std::uint64_t seed,
              const std::string& out_path, bool fit, bool with_linearize) {
  const omv::Family fam = omv::family_from_name(family);
  const int d = omv::claimed_dimension(fam);
  std::vector<std::size_t> ns = parse_sizes(sizes);

  struct Cell {
    std::size_t n = 0, rep = 0, corruption = 0;
    std::uint64_t seed = 0;
    std::size_t weight_col = 0, weight_row = 0, lin_weight = 0;
    std::vector<std::pair<std::size_t, std::size_t>> query_stats;
    double build_seconds = 0, query_seconds = 0;
  };
  std::vector<Cell> cells;
  for (std::size_t n : ns) {
    for (std::size_t rep = 0; rep < reps; ++rep) {
      Cell c;
      c.n = n;
      c.rep = rep;
      c.seed = omv::rng::derive(seed, family + "." + std::to_string(n) + "." +
                                          std::to_string(rep));
      double per_row = d >= 2
                           ? corruption_mult * std::pow(static_cast<double>(n), 1.0 - 1.0 / d)
                           : corruption_mult;
      c.corruption = static_cast<std::size_t>(std::floor(std::max(0.0, per_row)));
      cells.push_back(c);
    }
  }

#pragma omp parallel for schedule(dynamic) num_threads(omv::effective_threads())
  for (std::size_t k = 0; k < cells.size(); ++k) {
    Cell& c = cells[k];
    omv::SynthSpec spec = omv::make_spec(fam, c.n, c.n, c.corruption, c.seed);
    omv::BitMatrix m = omv::generate(spec);

    double t0 = omp_get_wtime();
    omv::StaticOmv s = omv::StaticOmv::preprocess(std::move(m));
    c.build_seconds = omp_get_wtime() - t0;
    c.weight_col = s.col_tree().weight;
    c.weight_row = s.row_tree().weight;
    if (with_linearize) {
      c.lin_weight = omv::linearize(s.col_tree(), s.matrix()).weight;
    }

    omv::rng::Stream qs(c.seed, "bench.queries");
    t0 = omp_get_wtime();
    for (std::size_t q = 0; q < queries; ++q) {
      omv::RealVector v(c.n);
      for (double& x : v) x = static_cast<double>(qs.next_int(-100, 100));
      omv::QueryStats st;
      s.mv(v, &st);
      std::size_t used = s.prefers_row_tree() ? s.row_tree().weight : s.col_tree().weight;
      if (st.touched_nonzeros > used) {
        throw std::logic_error("touched_nonzeros exceeded the tree weight");
      }
      c.query_stats.emplace_back(st.touched_nonzeros, st.dense_ops);
    }
    c.query_seconds = omp_get_wtime() - t0;
  }

  json doc;
  doc["schema"] = 1;
  doc["engine_version"] = omv::kEngineVersion;
  doc["family"] = family;
  doc["claimed_d"] = d;
  doc["corruption_multiplier"] = corruption_mult;
  doc["seed"] = seed;
  doc["threads"] = omv::effective_threads();
  doc["cells"] = json::array();
  for (const Cell& c : cells) {
    json jc;
    jc["n"] = c.n;
    jc["m"] = c.n;
    jc["rep"] = c.rep;
    jc["seed"] = c.seed;
    jc["corruption_per_row"] = c.corruption;
    jc["weight_col"] = c.weight_col;
    jc["weight_row"] = c.weight_row;
    if (with_linearize) jc["lin_weight"] = c.lin_weight;
    jc["naive_ops"] = c.n * c.n;
    jc["build_seconds"] = c.build_seconds;
    jc["query_seconds"] = c.query_seconds;
    json qs = json::array();
    for (auto [touched, dense] : c.query_stats) {
      qs.push_back({{"touched_nonzeros", touched}, {"dense_ops", dense}});
    }
    jc["queries"] = qs;
    doc["cells"].push_back(jc);
  }

  if (fit) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double count = 0;
    for (const Cell& c : cells) {
      double x = std::log(static_cast<double>(c.n));
      double y = std::log(static_cast<double>(std::max<std::size_t>(c.weight_col, 1)));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      count += 1;
    }
    double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    doc["fit"] = {{"slope", slope}, {"points", count}};
    std::printf("slope %.4f\n", slope);
  }
  for (const Cell& c : cells) {
    std::printf("n %zu rep %zu corruption %zu weight_col %zu weight_row %zu naive %zu\n", c.n,
                c.rep, c.corruption, c.weight_col, c.weight_row, c.n * c.n);
  }

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    out << doc.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delta-tree matrix-vector engine"};
  app.require_subcommand(1);

  std::string matrix_path, vector_path, trace_path, graph_path, rhs_path;
  std::string out_path, out_row_path, algo = "auto", family = "random", sizes = "64..256";
  std::string format = "dense";
  bool audit = false, fit = false, with_linearize = false;
  std::size_t rows = 0, cols = 0, corruption = 0, reps = 3, queries = 8;
  double eps = 1e-8, corruption_mult = 0.0;
  std::uint64_t seed = 0, source = 0, res_u = 0, res_v = 0;
  long long dmax = -1;

  auto* build = app.add_subcommand("build", "preprocess a matrix and report tree weights");
  build->add_option("--matrix", matrix_path)->required();
  build->add_option("--out", out_path, "column tree dump path");
  build->add_option("--out-row", out_row_path, "row tree dump path");

  auto* mv = app.add_subcommand("mv", "multiply a matrix file by a vector file");
  mv->add_option("--matrix", matrix_path)->required();
  mv->add_option("--vector", vector_path)->required();
  mv->add_option("--algo", algo, "auto|row|col|naive");

  auto* replay = app.add_subcommand("replay", "run an update/query trace");
  replay->add_option("--matrix", matrix_path)->required();
  replay->add_option("--trace", trace_path)->required();
  replay->add_flag("--audit", audit, "cross-check every query against a naive shadow");

  auto* graph = app.add_subcommand("graph", "dynamic graph applications");
  graph->require_subcommand(1);
  auto* tri = graph->add_subcommand("triangle", "triangle detection");
  tri->add_option("--graph", graph_path)->required();
  auto* sssp = graph->add_subcommand("sssp", "bounded single-source distances");
  sssp->add_option("--graph", graph_path)->required();
  sssp->add_option("--source", source)->required();
  sssp->add_option("--dmax", dmax, "hop bound (default n-1)");
  auto* solve = graph->add_subcommand("solve", "laplacian solve");
  solve->add_option("--graph", graph_path)->required();
  solve->add_option("--rhs", rhs_path)->required();
  solve->add_option("--eps", eps);
  solve->add_option("--seed", seed);
  auto* resist = graph->add_subcommand("resist", "effective resistance");
  resist->add_option("--graph", graph_path)->required();
  resist->add_option("--u", res_u)->required();
  resist->add_option("--v", res_v)->required();
  resist->add_option("--eps", eps);
  resist->add_option("--seed", seed);

  auto* gen = app.add_subcommand("gen", "generate a structured matrix");
  gen->add_option("--family", family, "interval|grid|halfplane|random|hadamard")->required();
  gen->add_option("--rows", rows)->required();
  gen->add_option("--cols", cols)->required();
  gen->add_option("--corruption", corruption, "flipped entries per row");
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path, "output path ('-' for stdout)");
  gen->add_option("--format", format, "dense|coo");

  auto* bench = app.add_subcommand("bench", "tree-weight benchmark sweep");
  bench->add_option("--family", family)->required();
  bench->add_option("--sizes", sizes, "a..b doubling sweep");
  bench->add_option("--corruption", corruption_mult,
                    "multiplier on n^(1-1/d) flips per row (absolute if no d)");
  bench->add_option("--reps", reps);
  bench->add_option("--queries", queries);
  bench->add_option("--seed", seed);
  bench->add_option("--out", out_path, "JSON output path");
  bench->add_flag("--fit", fit, "append the log-log slope of weight vs n");
  bench->add_flag("--linearize", with_linearize, "also weigh the linearized column tree");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) return cmd_build(matrix_path, out_path, out_row_path);
    if (*mv) return cmd_mv(matrix_path, vector_path, algo);
    if (*replay) return cmd_replay(matrix_path, trace_path, audit);
    if (*tri) return cmd_graph_triangle(graph_path);
    if (*sssp) return cmd_graph_sssp(graph_path, source, dmax);
    if (*solve) return cmd_graph_solve(graph_path, rhs_path, eps, seed);
    if (*resist) return cmd_graph_resist(graph_path, res_u, res_v, eps, seed);
    if (*gen) return cmd_gen(family, rows, cols, corruption, seed, out_path, format);
    if (*bench) {
      return cmd_bench(family, sizes, corruption_mult, reps, queries, seed, out_path, fit,
                       with_linearize);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
