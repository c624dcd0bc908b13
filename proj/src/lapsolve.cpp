#include "omv/lapsolve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace omv {

namespace {

std::vector<int> component_labels(const std::vector<std::vector<std::uint32_t>>& adj) {
  std::vector<int> comp(adj.size(), -1);
  int next = 0;
  std::vector<std::uint32_t> stack;
  for (std::size_t s = 0; s < adj.size(); ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    stack.push_back(static_cast<std::uint32_t>(s));
    while (!stack.empty()) {
      std::uint32_t x = stack.back();
      stack.pop_back();
      for (std::uint32_t y : adj[x]) {
        if (comp[y] < 0) {
          comp[y] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  return comp;
}

double quad_form(const std::vector<WeightedEdge>& edges, const RealVector& x) {
  double q = 0.0;
  for (const WeightedEdge& e : edges) {
    double d = x[e.u] - x[e.v];
    q += e.w * d * d;
  }
  return q;
}

double norm2(const RealVector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void project_ones(RealVector& v) {
  if (v.empty()) return;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

}  // namespace

SolverState::SolverState(DynGraph& g, std::uint64_t seed)
    : g_(&g), rng_(seed, "lapsolve") {}

void SolverState::refresh_sparsifier() {
  const std::size_t n = g_->vertex_count();
  const auto adj = g_->adjacency_ranks();
  sparsifier_.clear();
  exact_fallback_ = false;
  probe_lo_ = 1.0;
  probe_hi_ = 1.0;

  std::vector<WeightedEdge> all_edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::uint32_t v : adj[u]) {
      if (v > u) all_edges.push_back({static_cast<std::uint32_t>(u), v, 1.0});
    }
  }

  const std::vector<int> comp = component_labels(adj);
  int comp_count = comp.empty() ? 0 : 1 + *std::max_element(comp.begin(), comp.end());

  for (int c = 0; c < comp_count; ++c) {
    std::vector<std::uint32_t> verts;
    for (std::size_t u = 0; u < n; ++u) {
      if (comp[u] == c) verts.push_back(static_cast<std::uint32_t>(u));
    }
    std::vector<WeightedEdge> comp_edges;
    for (const WeightedEdge& e : all_edges) {
      if (comp[e.u] == c) comp_edges.push_back(e);
    }
    const std::size_t nc = verts.size();

    // Forests are their own sparsifiers: every edge is a bridge with
    // leverage one, so keep them verbatim.
    if (comp_edges.size() <= nc - 1 || nc <= 2) {
      sparsifier_.insert(sparsifier_.end(), comp_edges.begin(), comp_edges.end());
      continue;
    }

    std::vector<std::size_t> local(n, 0);
    for (std::size_t k = 0; k < nc; ++k) local[verts[k]] = k;

    // Leverage scores from a dense pseudo-inverse; fine at desk scale.
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nc),
                                                static_cast<Eigen::Index>(nc));
    for (const WeightedEdge& e : comp_edges) {
      auto a = static_cast<Eigen::Index>(local[e.u]);
      auto b = static_cast<Eigen::Index>(local[e.v]);
      lap(a, a) += 1.0;
      lap(b, b) += 1.0;
      lap(a, b) -= 1.0;
      lap(b, a) -= 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const Eigen::MatrixXd& vec = eig.eigenvectors();
    const double cutoff = 1e-9 * std::max(1.0, ev(static_cast<Eigen::Index>(nc) - 1));

    std::vector<double> lever(comp_edges.size(), 0.0);
    double lever_sum = 0.0;
    for (std::size_t k = 0; k < comp_edges.size(); ++k) {
      auto a = static_cast<Eigen::Index>(local[comp_edges[k].u]);
      auto b = static_cast<Eigen::Index>(local[comp_edges[k].v]);
      double r = 0.0;
      for (Eigen::Index t = 0; t < static_cast<Eigen::Index>(nc); ++t) {
        if (ev(t) <= cutoff) continue;
        double d = vec(a, t) - vec(b, t);
        r += d * d / ev(t);
      }
      lever[k] = std::max(r, 1e-12);
      lever_sum += lever[k];
    }
    std::vector<double> cdf(comp_edges.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < comp_edges.size(); ++k) {
      acc += lever[k] / lever_sum;
      cdf[k] = acc;
    }
    cdf.back() = 1.0;

    const double logn = std::log(static_cast<double>(std::max<std::size_t>(nc, 2)));
    std::size_t draws = static_cast<std::size_t>(
        std::ceil(sample_multiplier * static_cast<double>(nc) * logn * logn));

    bool accepted = false;
    std::vector<WeightedEdge> sampled;
    for (int attempt = 0; attempt < 4 && !accepted; ++attempt, draws *= 2) {
      std::map<std::pair<std::uint32_t, std::uint32_t>, double> acc_w;
      for (std::size_t d = 0; d < draws; ++d) {
        double u01 = rng_.next_unit();
        std::size_t k = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u01) - cdf.begin());
        if (k >= comp_edges.size()) k = comp_edges.size() - 1;
        double p = lever[k] / lever_sum;
        acc_w[{comp_edges[k].u, comp_edges[k].v}] +=
            comp_edges[k].w / (p * static_cast<double>(draws));
      }
      sampled.clear();
      for (const auto& [key, w] : acc_w) sampled.push_back({key.first, key.second, w});

      // Quality probes: random directions orthogonal to ones, restricted to
      // this component, must see the two quadratic forms within a factor 1.5.
      bool ok = true;
      double lo = 1e300, hi = 0.0;
      for (std::size_t p = 0; p < probe_count && ok; ++p) {
        RealVector x(n, 0.0);
        double mean = 0.0;
        for (std::uint32_t u : verts) {
          double g1 = rng_.next_unit();
          double g2 = rng_.next_unit();
          double gauss = std::sqrt(-2.0 * std::log(g1 + 1e-300)) * std::cos(6.283185307179586 * g2);
          x[u] = gauss;
          mean += gauss;
        }
        mean /= static_cast<double>(nc);
        for (std::uint32_t u : verts) x[u] -= mean;
        double qg = quad_form(comp_edges, x);
        if (qg <= 0.0) continue;
        double ratio = quad_form(sampled, x) / qg;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        if (ratio < 0.5 || ratio > 1.5) ok = false;
      }
      if (ok) {
        accepted = true;
        probe_lo_ = std::min(probe_lo_, lo);
        probe_hi_ = std::max(probe_hi_, hi);
      }
    }
    if (!accepted) {
      sampled = comp_edges;  // exact fallback, never an error
      exact_fallback_ = true;
    }
    sparsifier_.insert(sparsifier_.end(), sampled.begin(), sampled.end());
  }

  h_adj_.assign(n, {});
  h_diag_.assign(n, 0.0);
  for (const WeightedEdge& e : sparsifier_) {
    h_adj_[e.u].push_back({e.v, e.w});
    h_adj_[e.v].push_back({e.u, e.w});
    h_diag_[e.u] += e.w;
    h_diag_[e.v] += e.w;
  }
  have_sparsifier_ = true;
  refreshed_epoch_ = g_->update_epoch();
}

void SolverState::maybe_refresh() {
  const std::size_t n = std::max<std::size_t>(g_->vertex_count(), 1);
  const std::uint64_t period = (n + 3) / 4;
  if (!have_sparsifier_ || g_->update_epoch() - refreshed_epoch_ >= period ||
      h_adj_.size() != g_->vertex_count()) {
    refresh_sparsifier();
  }
}

RealVector SolverState::apply_preconditioner(const RealVector& r) const {
  // Jacobi-scaled conjugate gradient on L_H, down to a relative residual of
  // inner_tol. Everything stays orthogonal to the all-ones kernel.
  const std::size_t n = r.size();
  RealVector rhs = r;
  project_ones(rhs);
  const double rhs_norm = norm2(rhs);
  RealVector x(n, 0.0);
  if (rhs_norm == 0.0) return x;

  auto apply_h = [&](const RealVector& v, RealVector& out) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = h_diag_[i] * v[i];
      for (const auto& [j, w] : h_adj_[i]) acc -= w * v[j];
      out[i] = acc;
    }
  };
  auto precond = [&](const RealVector& v, RealVector& out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = h_diag_[i] > 0.0 ? v[i] / h_diag_[i] : v[i];
  };

  RealVector res = rhs;
  RealVector z(n), p(n), hp(n);
  precond(res, z);
  project_ones(z);
  p = z;
  double rz = 0.0;
  for (std::size_t i = 0; i < n; ++i) rz += res[i] * z[i];

  const std::size_t max_iter = 20 * n + 50;
  for (std::size_t it = 0; it < max_iter; ++it) {
    if (norm2(res) <= inner_tol * rhs_norm) break;
    apply_h(p, hp);
    double php = 0.0;
    for (std::size_t i = 0; i < n; ++i) php += p[i] * hp[i];
    if (php <= 0.0) break;
    double alpha = rz / php;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      res[i] -= alpha * hp[i];
    }
    precond(res, z);
    project_ones(z);
    double rz_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) rz_new += res[i] * z[i];
    double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  project_ones(x);
  return x;
}

RealVector SolverState::solve(const RealVector& b, double eps) {
  const std::size_t n = g_->vertex_count();
  if (b.size() != n) {
    throw std::invalid_argument("solve: rhs length " + std::to_string(b.size()) +
                                " does not match vertex count " + std::to_string(n));
  }
  if (n == 0) return {};

  const auto adj = g_->adjacency_ranks();
  const std::vector<int> comp = component_labels(adj);
  for (int c : comp) {
    if (c != 0) throw std::invalid_argument("solve: graph is disconnected");
  }

  const double bnorm = norm2(b);
  if (bnorm == 0.0) return RealVector(n, 0.0);
  double bsum = 0.0;
  for (double x : b) bsum += x;
  if (std::abs(bsum) / std::sqrt(static_cast<double>(n)) > 1e-12 * bnorm) {
    throw std::invalid_argument("solve: rhs is not orthogonal to the all-ones vector");
  }

  maybe_refresh();

  RealVector rhs = b;
  project_ones(rhs);

  eps = std::min(std::max(eps, 1e-15), 0.99);
  const std::size_t iters = static_cast<std::size_t>(
      std::ceil(std::log(1.0 / eps) / std::log(1.0 / contraction_bound)));

  RealVector x = apply_preconditioner(rhs);
  RealVector r(n);
  for (std::size_t t = 0; t < iters; ++t) {
    RealVector lx = g_->laplacian_mv(x);
    for (std::size_t i = 0; i < n; ++i) r[i] = lx[i] - rhs[i];
    if (norm2(r) <= 1e-15 * bnorm) break;  // floating-point floor
    RealVector z = apply_preconditioner(r);
    for (std::size_t i = 0; i < n; ++i) x[i] -= z[i];
  }
  project_ones(x);
  return x;
}

double SolverState::effective_resistance(std::uint64_t u, std::uint64_t v, double eps) {
  if (!g_->is_live(u) || !g_->is_live(v)) {
    throw std::invalid_argument("effective_resistance: unknown vertex");
  }
  if (u == v) return 0.0;
  const std::size_t n = g_->vertex_count();
  RealVector b(n, 0.0);
  std::size_t ru = g_->rank_of(u);
  std::size_t rv = g_->rank_of(v);
  b[ru] = 1.0;
  b[rv] = -1.0;
  // A third of the budget on the solve keeps the quadratic form within eps.
  RealVector x = solve(b, eps / 3.0);
  return x[ru] - x[rv];
}

}  // namespace omv
