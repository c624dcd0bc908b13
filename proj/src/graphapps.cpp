#include "omv/graphapps.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "omv/io.hpp"

namespace omv {

DynGraph::DynGraph() : adj_(BitMatrix(0, 0)) {}

DynGraph::DynGraph(const BitMatrix& adjacency) : adj_(adjacency) {
  const std::size_t n = adjacency.rows();
  if (adjacency.cols() != n) throw std::invalid_argument("DynGraph: adjacency must be square");
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency.get(i, i)) throw std::invalid_argument("DynGraph: nonzero diagonal");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (adjacency.get(i, j) != adjacency.get(j, i)) {
        throw std::invalid_argument("DynGraph: adjacency not symmetric");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    VertexInfo vi;
    vi.row_id = i;
    vi.col_id = i;
    for (std::size_t j = 0; j < n; ++j) {
      if (adjacency.get(i, j)) vi.nbrs.insert(j);
    }
    vi.degree = static_cast<std::int64_t>(vi.nbrs.size());
    info_[i] = std::move(vi);
    row_to_vid_[i] = i;
    col_to_vid_[i] = i;
    vids_.push_back(i);
  }
  next_vid_ = n;

  // Seed trace: each triangle is seen once per edge, and contributes two
  // closed 3-walks per diagonal slot.
  std::int64_t common_sum = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::uint64_t w : info_[u].nbrs) {
      if (w <= u) continue;
      const auto& a = info_[u].nbrs;
      const auto& b = info_[w].nbrs;
      for (std::uint64_t x : a) {
        if (b.count(x)) ++common_sum;
      }
    }
  }
  trace_ = 2 * common_sum;
}

std::size_t DynGraph::rank_of(std::uint64_t vid) const {
  auto it = std::lower_bound(vids_.begin(), vids_.end(), vid);
  if (it == vids_.end() || *it != vid) {
    throw std::invalid_argument("unknown vertex " + std::to_string(vid));
  }
  return static_cast<std::size_t>(it - vids_.begin());
}

void DynGraph::check_live(std::uint64_t v, const char* who) const {
  if (!is_live(v)) {
    throw std::invalid_argument(std::string(who) + ": unknown vertex " + std::to_string(v));
  }
}

std::int64_t DynGraph::closed_triples(const std::set<std::uint64_t>& set) const {
  // a^T (A a) for the indicator vector a of `set`; counts closed 3-walks
  // through the updated vertex. Entries of A in its own row/column never
  // contribute because a is zero there.
  if (set.empty()) return 0;
  RealVector a(adj_.live_col_count(), 0.0);
  const auto& cols = adj_.live_cols();
  for (std::uint64_t u : set) {
    std::uint64_t cid = info_.at(u).col_id;
    a[static_cast<std::size_t>(std::lower_bound(cols.begin(), cols.end(), cid) - cols.begin())] =
        1.0;
  }
  RealVector y = adj_.query(a);
  const auto& rows = adj_.live_rows();
  double t = 0.0;
  for (std::uint64_t u : set) {
    std::uint64_t rid = info_.at(u).row_id;
    t += y[static_cast<std::size_t>(std::lower_bound(rows.begin(), rows.end(), rid) -
                                    rows.begin())];
  }
  return std::llround(t);
}

void DynGraph::vertex_update(std::uint64_t v, const std::vector<std::uint64_t>& nbrs) {
  check_live(v, "vertex_update");
  std::set<std::uint64_t> next(nbrs.begin(), nbrs.end());
  if (next.count(v)) {
    throw std::invalid_argument("vertex_update: self-loop requested for " + std::to_string(v));
  }
  for (std::uint64_t u : next) check_live(u, "vertex_update");

  VertexInfo& vi = info_[v];
  const std::set<std::uint64_t> prev = vi.nbrs;

  const std::int64_t t_old = closed_triples(prev);

  adj_.delete_row(vi.row_id);
  adj_.delete_col(vi.col_id);
  row_to_vid_.erase(vi.row_id);
  col_to_vid_.erase(vi.col_id);

  BitVec rbits(adj_.live_col_count(), 0);
  const auto& cols = adj_.live_cols();
  for (std::uint64_t u : next) {
    std::uint64_t cid = info_.at(u).col_id;
    rbits[static_cast<std::size_t>(std::lower_bound(cols.begin(), cols.end(), cid) -
                                   cols.begin())] = 1;
  }
  vi.row_id = adj_.insert_row(rbits);

  BitVec cbits(adj_.live_row_count(), 0);
  const auto& rows = adj_.live_rows();
  for (std::uint64_t u : next) {
    std::uint64_t rid = info_.at(u).row_id;
    cbits[static_cast<std::size_t>(std::lower_bound(rows.begin(), rows.end(), rid) -
                                   rows.begin())] = 1;
  }
  vi.col_id = adj_.insert_col(cbits);
  row_to_vid_[vi.row_id] = v;
  col_to_vid_[vi.col_id] = v;

  const std::int64_t t_new = closed_triples(next);
  trace_ += 3 * (t_new - t_old);

  for (std::uint64_t u : prev) {
    if (!next.count(u)) {
      info_[u].nbrs.erase(v);
      --info_[u].degree;
    }
  }
  for (std::uint64_t u : next) {
    if (!prev.count(u)) {
      info_[u].nbrs.insert(v);
      ++info_[u].degree;
    }
  }
  vi.nbrs = std::move(next);
  vi.degree = static_cast<std::int64_t>(vi.nbrs.size());
  ++epoch_;
}

std::uint64_t DynGraph::insert_vertex(const std::vector<std::uint64_t>& nbrs) {
  const std::uint64_t vid = next_vid_++;
  VertexInfo vi;
  vi.row_id = adj_.insert_row(BitVec(adj_.live_col_count(), 0));
  vi.col_id = adj_.insert_col(BitVec(adj_.live_row_count(), 0));
  row_to_vid_[vi.row_id] = vid;
  col_to_vid_[vi.col_id] = vid;
  info_[vid] = std::move(vi);
  vids_.push_back(vid);
  ++epoch_;
  if (!nbrs.empty()) vertex_update(vid, nbrs);
  return vid;
}

void DynGraph::delete_vertex(std::uint64_t v) {
  check_live(v, "delete_vertex");
  vertex_update(v, {});
  const VertexInfo& vi = info_.at(v);
  adj_.delete_row(vi.row_id);
  adj_.delete_col(vi.col_id);
  row_to_vid_.erase(vi.row_id);
  col_to_vid_.erase(vi.col_id);
  info_.erase(v);
  vids_.erase(vids_.begin() + static_cast<std::ptrdiff_t>(rank_of(v)));
  ++epoch_;
}

std::vector<double> DynGraph::bounded_sssp(std::uint64_t u, std::size_t dmax) const {
  check_live(u, "bounded_sssp");
  const std::size_t n = vids_.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  dist[rank_of(u)] = 0.0;

  const auto& cols = adj_.live_cols();
  const auto& rows = adj_.live_rows();
  auto col_pos = [&](std::uint64_t vid) {
    return static_cast<std::size_t>(
        std::lower_bound(cols.begin(), cols.end(), info_.at(vid).col_id) - cols.begin());
  };
  auto row_pos = [&](std::uint64_t vid) {
    return static_cast<std::size_t>(
        std::lower_bound(rows.begin(), rows.end(), info_.at(vid).row_id) - rows.begin());
  };

  RealVector w(n, 0.0);
  w[col_pos(u)] = 1.0;
  for (std::size_t step = 1; step <= dmax; ++step) {
    RealVector y = adj_.query(w);
    RealVector next(n, 0.0);
    bool any_new = false;
    for (std::size_t k = 0; k < n; ++k) {
      std::uint64_t vid = vids_[k];
      if (y[row_pos(vid)] != 0.0) {
        next[col_pos(vid)] = 1.0;  // threshold keeps magnitudes flat
        if (dist[k] == inf) {
          dist[k] = static_cast<double>(step);
          any_new = true;
        }
      }
    }
    // Distances within a component are contiguous, so a round that reaches
    // nothing new means every remaining vertex is unreachable.
    if (!any_new) break;
    w = std::move(next);
  }
  return dist;
}

RealVector DynGraph::laplacian_mv(const RealVector& v) const {
  const std::size_t n = vids_.size();
  if (v.size() != n) {
    throw std::invalid_argument("laplacian_mv: vector length " + std::to_string(v.size()) +
                                " does not match vertex count " + std::to_string(n));
  }
  const auto& cols = adj_.live_cols();
  const auto& rows = adj_.live_rows();
  RealVector ev(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const VertexInfo& vi = info_.at(vids_[k]);
    ev[static_cast<std::size_t>(std::lower_bound(cols.begin(), cols.end(), vi.col_id) -
                                cols.begin())] = v[k];
  }
  RealVector y = adj_.query(ev);
  RealVector out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const VertexInfo& vi = info_.at(vids_[k]);
    double av = y[static_cast<std::size_t>(std::lower_bound(rows.begin(), rows.end(), vi.row_id) -
                                           rows.begin())];
    out[k] = static_cast<double>(vi.degree) * v[k] - av;
  }
  return out;
}

RealVector DynGraph::normalized_laplacian_mv(const RealVector& v) const {
  const std::size_t n = vids_.size();
  if (v.size() != n) {
    throw std::invalid_argument("normalized_laplacian_mv: vector length mismatch");
  }
  RealVector w(n, 0.0);
  RealVector dsqrt(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::int64_t d = info_.at(vids_[k]).degree;
    if (d > 0) {
      dsqrt[k] = std::sqrt(static_cast<double>(d));
      w[k] = v[k] / dsqrt[k];
    }
  }
  // L~ v = D^{-1/2} (D w - A w) for w = D^{-1/2} v.
  RealVector lw = laplacian_mv(w);
  RealVector out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (dsqrt[k] > 0.0) out[k] = lw[k] / dsqrt[k];
  }
  return out;
}

RealVector DynGraph::degree_vector() const {
  RealVector d(vids_.size());
  for (std::size_t k = 0; k < vids_.size(); ++k) {
    d[k] = static_cast<double>(info_.at(vids_[k]).degree);
  }
  return d;
}

std::vector<std::vector<std::uint32_t>> DynGraph::adjacency_ranks() const {
  std::vector<std::vector<std::uint32_t>> adj(vids_.size());
  for (std::size_t k = 0; k < vids_.size(); ++k) {
    for (std::uint64_t w : info_.at(vids_[k]).nbrs) {
      adj[k].push_back(static_cast<std::uint32_t>(rank_of(w)));
    }
    std::sort(adj[k].begin(), adj[k].end());
  }
  return adj;
}

void DynGraph::audit() const {
  auto fail = [](const std::string& what) { throw std::logic_error("DynGraph audit: " + what); };
  for (std::uint64_t v : vids_) {
    const VertexInfo& vi = info_.at(v);
    if (vi.nbrs.count(v)) fail("self-loop at " + std::to_string(v));
    if (vi.degree != static_cast<std::int64_t>(vi.nbrs.size())) {
      fail("degree out of sync at " + std::to_string(v));
    }
    for (std::uint64_t w : vi.nbrs) {
      if (!info_.count(w)) fail("edge to dead vertex");
      if (!info_.at(w).nbrs.count(v)) fail("asymmetric edge");
    }
  }
  if (trace_ < 0 || trace_ % 6 != 0) fail("triangle trace not a nonnegative multiple of 6");

  // The engine must store exactly the adjacency described by the sets.
  BitMatrix mat = adj_.materialize();
  if (mat.rows() != vids_.size() || mat.cols() != vids_.size()) fail("engine dims mismatch");
  const auto& rows = adj_.live_rows();
  const auto& cols = adj_.live_cols();
  for (std::size_t a = 0; a < vids_.size(); ++a) {
    std::uint64_t va = row_to_vid_.at(rows[a]);
    for (std::size_t b = 0; b < vids_.size(); ++b) {
      std::uint64_t vb = col_to_vid_.at(cols[b]);
      bool bit = mat.get(a, b);
      bool expect = info_.at(va).nbrs.count(vb) != 0;
      if (bit != expect) fail("engine bit mismatch");
    }
  }
}

BitMatrix read_graph(std::istream& in) {
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
  long long n = -1, m = -1;
  hdr >> magic >> kind >> n >> m;
  if (magic != "%%OMV" || kind != "graph" || n < 0 || m < 0) {
    throw ParseError(lineno, "malformed header, expected '%%OMV graph <n> <m_edges>'");
  }
  BitMatrix adj(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  long long seen = 0;
  while (next_line(line)) {
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream ls(line);
    long long u = -1, v = -1;
    std::string extra;
    if (!(ls >> u >> v) || (ls >> extra) || u < 0 || v < 0) {
      throw ParseError(lineno, "expected 'u v' edge, got '" + line + "'");
    }
    if (u >= n || v >= n) throw ParseError(lineno, "vertex out of range in '" + line + "'");
    if (u == v) throw ParseError(lineno, "self-loop '" + line + "'");
    if (adj.get(static_cast<std::size_t>(u), static_cast<std::size_t>(v))) {
      throw ParseError(lineno, "duplicate edge '" + line + "'");
    }
    adj.set(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
    adj.set(static_cast<std::size_t>(v), static_cast<std::size_t>(u));
    ++seen;
  }
  if (seen != m) {
    throw ParseError(lineno, "edge-count mismatch: header says " + std::to_string(m) + ", file has " +
                                 std::to_string(seen));
  }
  return adj;
}

void write_graph(const BitMatrix& adjacency, std::ostream& out) {
  std::size_t n = adjacency.rows();
  std::size_t m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (adjacency.get(i, j)) ++m;
    }
  }
  out << "%%OMV graph " << n << ' ' << m << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (adjacency.get(i, j)) out << i << ' ' << j << '\n';
    }
  }
}

BitMatrix read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  return read_graph(in);
}

}  // namespace omv
