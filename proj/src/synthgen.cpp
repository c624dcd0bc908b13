#include "omv/synthgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "omv/rng.hpp"

namespace omv {

Family family_from_name(const std::string& name) {
  if (name == "interval") return Family::Interval;
  if (name == "grid") return Family::Grid;
  if (name == "halfplane") return Family::Halfplane;
  if (name == "random") return Family::Random;
  if (name == "hadamard" || name == "hadamard_like") return Family::HadamardLike;
  throw std::invalid_argument("unknown family '" + name + "'");
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Interval: return "interval";
    case Family::Grid: return "grid";
    case Family::Halfplane: return "halfplane";
    case Family::Random: return "random";
    case Family::HadamardLike: return "hadamard_like";
  }
  return "?";
}

int claimed_dimension(Family f) {
  switch (f) {
    case Family::Interval: return 2;   // intervals on a line
    case Family::Grid: return 4;       // planar
    case Family::Halfplane: return 3;  // halfplanes in the plane
    case Family::Random:
    case Family::HadamardLike: return 0;  // none claimed
  }
  return 0;
}

SynthSpec make_spec(Family f, std::size_t m, std::size_t n, std::size_t corruption_per_row,
                    std::uint64_t seed) {
  SynthSpec s;
  s.family = f;
  s.m = m;
  s.n = n;
  s.corruption_per_row = corruption_per_row;
  s.seed = seed;
  s.claimed_d = claimed_dimension(f);
  return s;
}

namespace {

BitMatrix gen_interval(std::size_t m, std::size_t n, rng::Stream& st) {
  // One interval per index; entry (i,j) marks intersecting distinct intervals.
  const std::size_t count = std::max(m, n);
  std::vector<std::pair<double, double>> iv(count);
  for (auto& [a, b] : iv) {
    a = st.next_unit();
    b = st.next_unit();
    if (a > b) std::swap(a, b);
  }
  BitMatrix mat(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (iv[i].first <= iv[j].second && iv[j].first <= iv[i].second) mat.set(i, j);
    }
  }
  return mat;
}

BitMatrix gen_grid(std::size_t m, std::size_t n) {
  const std::size_t side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (side * side != n || m > n) {
    throw std::invalid_argument("grid family requires a square column count with m <= n");
  }
  BitMatrix mat(m, n);
  auto id = [side](std::size_t r, std::size_t c) { return r * side + c; };
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      std::size_t v = id(r, c);
      if (c + 1 < side) {
        if (v < m) mat.set(v, id(r, c + 1));
        if (id(r, c + 1) < m) mat.set(id(r, c + 1), v);
      }
      if (r + 1 < side) {
        if (v < m) mat.set(v, id(r + 1, c));
        if (id(r + 1, c) < m) mat.set(id(r + 1, c), v);
      }
    }
  }
  return mat;
}

BitMatrix gen_halfplane(std::size_t m, std::size_t n, rng::Stream& st) {
  // Rows are halfplanes through random anchor points, columns are points.
  std::vector<std::pair<double, double>> pts(n);
  for (auto& [x, y] : pts) {
    x = st.next_unit();
    y = st.next_unit();
  }
  BitMatrix mat(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    double theta = st.next_unit() * 6.283185307179586;
    double ax = std::cos(theta);
    double ay = std::sin(theta);
    double qx = st.next_unit();
    double qy = st.next_unit();
    double b = ax * qx + ay * qy;
    for (std::size_t j = 0; j < n; ++j) {
      if (ax * pts[j].first + ay * pts[j].second >= b) mat.set(i, j);
    }
  }
  return mat;
}

BitMatrix gen_random(std::size_t m, std::size_t n, rng::Stream& st) {
  BitMatrix mat(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (st.next_bool()) mat.set(i, j);
    }
  }
  return mat;
}

BitMatrix gen_hadamard_like(std::size_t m, std::size_t n) {
  // Sylvester parity pattern truncated to the requested shape.
  BitMatrix mat(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (std::popcount(i & j) & 1u) mat.set(i, j);
    }
  }
  return mat;
}

}  // namespace

BitMatrix generate(const SynthSpec& spec) {
  if (spec.corruption_per_row > spec.n) {
    throw std::invalid_argument("corruption_per_row exceeds column count");
  }
  rng::Stream base(spec.seed, "synthgen." + family_name(spec.family));
  BitMatrix mat(0, 0);
  switch (spec.family) {
    case Family::Interval: mat = gen_interval(spec.m, spec.n, base); break;
    case Family::Grid: mat = gen_grid(spec.m, spec.n); break;
    case Family::Halfplane: mat = gen_halfplane(spec.m, spec.n, base); break;
    case Family::Random: mat = gen_random(spec.m, spec.n, base); break;
    case Family::HadamardLike: mat = gen_hadamard_like(spec.m, spec.n); break;
  }

  const std::size_t budget = std::min(spec.corruption_per_row, spec.n);
  if (budget > 0) {
    rng::Stream cst(spec.seed, "synthgen.corruption");
    std::unordered_set<std::size_t> picked;
    for (std::size_t i = 0; i < spec.m; ++i) {
      picked.clear();
      while (picked.size() < budget) {
        picked.insert(static_cast<std::size_t>(cst.next_below(spec.n)));
      }
      for (std::size_t j : picked) mat.set(i, j, !mat.get(i, j));
    }
  }
  return mat;
}

}  // namespace omv
