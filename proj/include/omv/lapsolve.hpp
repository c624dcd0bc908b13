#ifndef OMV_LAPSOLVE_HPP
#define OMV_LAPSOLVE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "omv/graphapps.hpp"
#include "omv/rng.hpp"

namespace omv {

struct WeightedEdge {
  std::uint32_t u, v;  // live ranks
  double w;
};

/// High-accuracy Laplacian solver over a DynGraph. Products with the graph
/// Laplacian go through the engine; a reweighted sampled subgraph H serves
/// as the Richardson preconditioner and is applied by Jacobi-scaled
/// conjugate gradient. The sparsifier is recomputed from scratch every
/// ceil(n/4) vertex updates rather than maintained incrementally.
class SolverState {
 public:
  explicit SolverState(DynGraph& g, std::uint64_t seed = 0);

  /// Resample H by effective-resistance sampling, per connected component.
  /// Forests keep all their edges; quality probes double the sample budget
  /// on failure (3 retries) and the fallback is H = G exactly.
  void refresh_sparsifier();

  /// x with ||x - x*||_L <= eps ||x*||_L for L x* = b; requires b orthogonal
  /// to the all-ones vector (within 1e-12 relative) and a connected graph.
  /// The output is re-projected against the all-ones vector.
  RealVector solve(const RealVector& b, double eps);

  /// (1 +- eps)-approximate effective resistance between u and v.
  double effective_resistance(std::uint64_t u, std::uint64_t v, double eps);

  const std::vector<WeightedEdge>& sparsifier() const { return sparsifier_; }
  std::pair<double, double> last_probe_ratio() const { return {probe_lo_, probe_hi_}; }
  bool sparsifier_is_exact() const { return exact_fallback_; }

  double inner_tol = 0.25;               // relative residual for applying H^{-1}
  double contraction_bound = 2.0 / 3.0;  // assumed per-iteration error factor
  double sample_multiplier = 8.0;        // C in q = ceil(C n log^2 n)
  std::size_t probe_count = 100;

 private:
  void maybe_refresh();
  RealVector apply_preconditioner(const RealVector& r) const;

  DynGraph* g_;
  std::vector<WeightedEdge> sparsifier_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> h_adj_;
  RealVector h_diag_;
  bool have_sparsifier_ = false;
  bool exact_fallback_ = false;
  std::uint64_t refreshed_epoch_ = 0;
  double probe_lo_ = 1.0, probe_hi_ = 1.0;
  rng::Stream rng_;
};

}  // namespace omv

#endif
