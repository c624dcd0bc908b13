#include "omv/tree.hpp"

#include <omp.h>

#include <bit>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace omv {

int effective_threads() {
  static int cached = [] {
    int k = omp_get_max_threads();
    if (const char* env = std::getenv("OMV_THREADS")) {
      int cap = std::atoi(env);
      if (cap > 0 && cap < k) k = cap;
    }
    return k;
  }();
  return cached;
}

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

std::size_t hamming_words(const Word* a, const Word* b, std::size_t words) {
  std::size_t d = 0;
  for (std::size_t k = 0; k < words; ++k) d += std::popcount(a[k] ^ b[k]);
  return d;
}

// Orient the undirected MST away from the virtual root and attach labels.
DeltaTree assemble(const BitMatrix& m, const std::vector<std::uint32_t>& mst_parent,
                   std::uint32_t attach_col) {
  const std::size_t n = m.cols();
  DeltaTree t;
  t.node_count = n + 1;
  t.root = static_cast<std::uint32_t>(n);
  t.parent.assign(n + 1, -1);
  t.children.assign(n + 1, {});
  t.label.assign(n + 1, {});
  if (n == 0) return t;

  // Undirected adjacency of the column MST plus the root edge.
  std::vector<std::vector<std::uint32_t>> adj(n + 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (mst_parent[j] == t.root) continue;  // Prim start column has no MST parent
    adj[j].push_back(mst_parent[j]);
    adj[mst_parent[j]].push_back(static_cast<std::uint32_t>(j));
  }
  adj[t.root].push_back(attach_col);
  adj[attach_col].push_back(t.root);

  std::vector<std::uint32_t> stack = {t.root};
  std::vector<char> seen(n + 1, 0);
  seen[t.root] = 1;
  while (!stack.empty()) {
    std::uint32_t x = stack.back();
    stack.pop_back();
    for (std::uint32_t c : adj[x]) {
      if (seen[c]) continue;
      seen[c] = 1;
      t.parent[c] = x;
      t.children[x].push_back(c);
      t.label[c] = (x == t.root) ? m.col_as_delta(c) : m.delta_cols(x, c);
      t.weight += t.label[c].nnz();
      stack.push_back(c);
    }
  }
  return t;
}

std::uint32_t lightest_column(const BitMatrix& m) {
  std::size_t best = kInf;
  std::uint32_t arg = 0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    std::size_t w = m.col_weight(j);
    if (w < best) {
      best = w;
      arg = static_cast<std::uint32_t>(j);
    }
  }
  return arg;
}

}  // namespace

DeltaTree build_mst(const BitMatrix& m) {
  const std::size_t n = m.cols();
  if (n == 0) return assemble(m, {}, 0);
  m.sync_columns();
  const std::size_t cw = m.col_words();

  // Team startup is not worth it below ~a million word ops per build.
  const int threads = effective_threads();
  if (threads == 1 || n * n * cw < (std::size_t{1} << 20)) return build_mst_serial(m);

  std::vector<std::size_t> best(n, kInf);
  std::vector<std::uint32_t> bp(n, static_cast<std::uint32_t>(n));
  std::vector<char> in_tree(n, 0);
  std::size_t pick = 0;

  // One team for the whole build; each round the single block selects the
  // next column and the worksharing loop refreshes candidate distances.
  in_tree[0] = 1;
#pragma omp parallel num_threads(threads)
  {
    const Word* c0 = m.col_ptr(0);
#pragma omp for schedule(static)
    for (std::size_t j = 1; j < n; ++j) {
      best[j] = hamming_words(c0, m.col_ptr(j), cw);
      bp[j] = 0;
    }
    for (std::size_t round = 1; round < n; ++round) {
#pragma omp single
      {
        std::size_t pick_key = kInf;
        pick = n;
        for (std::size_t j = 0; j < n; ++j) {
          if (!in_tree[j] && best[j] < pick_key) {
            pick_key = best[j];
            pick = j;
          }
        }
        in_tree[pick] = 1;
      }
      const Word* cp = m.col_ptr(pick);
#pragma omp for schedule(static)
      for (std::size_t j = 0; j < n; ++j) {
        if (in_tree[j]) continue;
        std::size_t d = hamming_words(cp, m.col_ptr(j), cw);
        if (d < best[j]) {
          best[j] = d;
          bp[j] = static_cast<std::uint32_t>(pick);
        }
      }
    }
  }

  std::vector<std::uint32_t> mst_parent(n, static_cast<std::uint32_t>(n));
  for (std::size_t j = 1; j < n; ++j) mst_parent[j] = bp[j];
  return assemble(m, mst_parent, lightest_column(m));
}

DeltaTree build_mst_serial(const BitMatrix& m) {
  const std::size_t n = m.cols();
  if (n == 0) return assemble(m, {}, 0);
  m.sync_columns();

  std::vector<std::size_t> best(n, kInf);
  std::vector<std::uint32_t> bp(n, static_cast<std::uint32_t>(n));
  std::vector<char> in_tree(n, 0);

  in_tree[0] = 1;
  for (std::size_t j = 1; j < n; ++j) {
    best[j] = m.hamming_cols(0, j);
    bp[j] = 0;
  }

  for (std::size_t round = 1; round < n; ++round) {
    std::size_t pick_key = kInf;
    std::size_t pick = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (!in_tree[j] && best[j] < pick_key) {
        pick_key = best[j];
        pick = j;
      }
    }
    in_tree[pick] = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      std::size_t d = m.hamming_cols(pick, j);
      if (d < best[j]) {
        best[j] = d;
        bp[j] = static_cast<std::uint32_t>(pick);
      }
    }
  }

  std::vector<std::uint32_t> mst_parent(n, static_cast<std::uint32_t>(n));
  for (std::size_t j = 1; j < n; ++j) mst_parent[j] = bp[j];
  return assemble(m, mst_parent, lightest_column(m));
}

std::vector<std::uint32_t> dfs_preorder(const DeltaTree& t) {
  std::vector<std::uint32_t> order;
  order.reserve(t.node_count);
  std::vector<std::uint32_t> stack = {t.root};
  while (!stack.empty()) {
    std::uint32_t x = stack.back();
    stack.pop_back();
    order.push_back(x);
    const auto& kids = t.children[x];
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return order;
}

DeltaTree linearize(const DeltaTree& t, const BitMatrix& m) {
  if (t.node_count != m.cols() + 1) {
    throw std::invalid_argument("linearize: tree does not span the matrix columns");
  }
  std::vector<std::uint32_t> order = dfs_preorder(t);

  DeltaTree path;
  path.node_count = t.node_count;
  path.root = t.root;
  path.parent.assign(t.node_count, -1);
  path.children.assign(t.node_count, {});
  path.label.assign(t.node_count, {});
  for (std::size_t k = 1; k < order.size(); ++k) {
    std::uint32_t prev = order[k - 1];
    std::uint32_t cur = order[k];
    path.parent[cur] = prev;
    path.children[prev].push_back(cur);
    path.label[cur] = (prev == path.root) ? m.col_as_delta(cur) : m.delta_cols(prev, cur);
    path.weight += path.label[cur].nnz();
  }
  return path;
}

std::size_t recount_weight(const DeltaTree& t) {
  std::size_t w = 0;
  for (const SparseDelta& d : t.label) w += d.nnz();
  return w;
}

void write_tree_dump(const DeltaTree& t, std::ostream& out) {
  out << "%%OMV dtree " << t.node_count << ' ' << t.weight << '\n';
  for (std::size_t x = 0; x < t.node_count; ++x) {
    out << x << ' ';
    if (t.parent[x] < 0) {
      out << '-';
    } else {
      out << t.parent[x];
    }
    out << ' ' << t.label[x].nnz() << '\n';
  }
}

}  // namespace omv
