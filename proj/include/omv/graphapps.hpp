#ifndef OMV_GRAPHAPPS_HPP
#define OMV_GRAPHAPPS_HPP

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "omv/bitmatrix.hpp"
#include "omv/engine_dynamic.hpp"

namespace omv {

/// Undirected dynamic graph over a DynOmv-backed symmetric adjacency matrix
/// with zero diagonal. Alongside the engine it maintains the degree vector
/// and the triangle trace s = sum_i (A^3)_ii, updated per vertex change from
/// two engine queries; s is six times the number of triangles.
///
/// Vertices carry stable ids. Vectors exchanged with callers (Laplacian
/// products, distances, degrees) are indexed by live vertices in ascending
/// id order.
class DynGraph {
 public:
  DynGraph();
  /// Wraps an existing adjacency matrix; vertex ids are 0..n-1.
  explicit DynGraph(const BitMatrix& adjacency);

  std::size_t vertex_count() const { return vids_.size(); }
  const std::vector<std::uint64_t>& live_vertices() const { return vids_; }
  std::size_t rank_of(std::uint64_t vid) const;
  bool is_live(std::uint64_t vid) const { return info_.count(vid) != 0; }

  /// Replace the neighborhood of v. One logical transaction: the triangle
  /// trace is adjusted from queries against the pre- and post-state.
  void vertex_update(std::uint64_t v, const std::vector<std::uint64_t>& nbrs);

  /// Fresh isolated vertex, then vertex_update with the given neighbors.
  std::uint64_t insert_vertex(const std::vector<std::uint64_t>& nbrs);

  /// Isolate v, then drop its row and column.
  void delete_vertex(std::uint64_t v);

  std::int64_t triangle_trace() const { return trace_; }
  bool has_triangle() const { return trace_ > 0; }

  /// Hop distances from u up to dmax (infinity beyond), computed by repeated
  /// thresholded adjacency products; sound because nothing can cancel.
  std::vector<double> bounded_sssp(std::uint64_t u, std::size_t dmax) const;

  /// (D - A) v through the engine.
  RealVector laplacian_mv(const RealVector& v) const;
  /// (I - D^{-1/2} A D^{-1/2}) v, isolated vertices mapped to zero.
  RealVector normalized_laplacian_mv(const RealVector& v) const;

  RealVector degree_vector() const;
  /// Sorted neighbor lists, indexed and valued by live rank.
  std::vector<std::vector<std::uint32_t>> adjacency_ranks() const;

  std::uint64_t update_epoch() const { return epoch_; }
  const DynOmv& engine() const { return adj_; }

  /// Symmetry/diagonal/degree/trace consistency walk; throws on violation.
  void audit() const;

 private:
  struct VertexInfo {
    std::uint64_t row_id = 0;
    std::uint64_t col_id = 0;
    std::set<std::uint64_t> nbrs;
    std::int64_t degree = 0;
  };

  std::int64_t closed_triples(const std::set<std::uint64_t>& set) const;
  void check_live(std::uint64_t v, const char* who) const;

  DynOmv adj_;
  std::vector<std::uint64_t> vids_;  // live, ascending
  std::unordered_map<std::uint64_t, VertexInfo> info_;
  std::unordered_map<std::uint64_t, std::uint64_t> row_to_vid_, col_to_vid_;
  std::int64_t trace_ = 0;
  std::uint64_t next_vid_ = 0;
  std::uint64_t epoch_ = 0;
};

// Graph file: `%%OMV graph <n> <m_edges>` then one `u v` per edge,
// 0-indexed, undirected, no duplicates or self-loops.
BitMatrix read_graph(std::istream& in);
void write_graph(const BitMatrix& adjacency, std::ostream& out);
BitMatrix read_graph_file(const std::string& path);

}  // namespace omv

#endif
