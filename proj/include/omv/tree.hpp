#ifndef OMV_TREE_HPP
#define OMV_TREE_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "omv/bitmatrix.hpp"

namespace omv {

/// Rooted spanning tree over a matrix's columns plus one virtual all-zero
/// column as the root. Every non-root node carries the sparse difference
/// from its parent's column to its own, so composing labels along the
/// root-to-x path reconstructs column x exactly.
struct DeltaTree {
  std::size_t node_count = 1;          // real columns + 1
  std::uint32_t root = 0;              // id of the virtual zero column (== node_count - 1)
  std::vector<std::int64_t> parent;    // parent[root] == -1
  std::vector<std::vector<std::uint32_t>> children;
  std::vector<SparseDelta> label;      // label[x] is for the edge parent[x] -> x
  std::size_t weight = 0;              // total nonzeros across labels

  std::size_t real_columns() const { return node_count - 1; }
};

/// Exact Prim MST over the column Hamming metric, with the virtual zero root
/// attached to the lightest column; distance evaluations run in parallel over
/// candidate columns. Ties break toward the smaller column index, so the
/// result is deterministic and identical to build_mst_serial.
DeltaTree build_mst(const BitMatrix& m);

/// Plain single-threaded reference of build_mst, kept for testing and for
/// the kernel benchmark.
DeltaTree build_mst_serial(const BitMatrix& m);

/// Flatten a tree into a path visiting columns in DFS preorder, relabelling
/// each path edge against the source matrix. The path weighs at most twice
/// the tree plus one root re-attachment.
DeltaTree linearize(const DeltaTree& t, const BitMatrix& m);

/// Stored total label weight.
inline std::size_t tree_weight(const DeltaTree& t) { return t.weight; }

/// Fresh recount of the stored weight, for audits.
std::size_t recount_weight(const DeltaTree& t);

/// Iterative DFS preorder (root first, parents before children).
std::vector<std::uint32_t> dfs_preorder(const DeltaTree& t);

/// Debug dump: `%%OMV dtree <node_count> <weight>` then `<id> <parent|-> <label nnz>`.
void write_tree_dump(const DeltaTree& t, std::ostream& out);

/// Threads used by parallel kernels: min(omp max threads, OMV_THREADS if set).
int effective_threads();

}  // namespace omv

#endif
