#ifndef OMV_SYNTHGEN_HPP
#define OMV_SYNTHGEN_HPP

#include <cstdint>
#include <string>

#include "omv/bitmatrix.hpp"

namespace omv {

enum class Family { Interval, Grid, Halfplane, Random, HadamardLike };

Family family_from_name(const std::string& name);
std::string family_name(Family f);

/// Documented structural-dimension bound of the family, reported in benchmark
/// records only; no code path consumes it. 0 means no bound is claimed.
int claimed_dimension(Family f);

/// Recipe for a structured test matrix. Identical (spec, seed) pairs
/// regenerate identical matrices.
struct SynthSpec {
  Family family = Family::Random;
  std::size_t n = 0;                 // columns
  std::size_t m = 0;                 // rows
  std::size_t corruption_per_row = 0;
  std::uint64_t seed = 0;
  int claimed_d = 0;
};

SynthSpec make_spec(Family f, std::size_t m, std::size_t n, std::size_t corruption_per_row,
                    std::uint64_t seed);

/// Base family matrix with corruption_per_row uniformly chosen entries
/// flipped per row (distinct positions, redrawn on collision).
BitMatrix generate(const SynthSpec& spec);

}  // namespace omv

#endif
