#ifndef OMV_RNG_HPP
#define OMV_RNG_HPP

#include <cstdint>
#include <string_view>

namespace omv::rng {

// splitmix64 step; the de-facto standard seed expander.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Derive a child seed from a root seed and a stream name, so that every
// consumer of randomness draws from its own reproducible stream.
inline std::uint64_t derive(std::uint64_t root, std::string_view stream) {
  std::uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a
  for (char c : stream) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  std::uint64_t s = root ^ h;
  splitmix64(s);
  std::uint64_t mixed = splitmix64(s);
  return mixed;
}

// Small deterministic generator. Unlike std::uniform_int_distribution the
// draws are identical on every platform, which keeps generated fixtures
// stable across compilers.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}
  Stream(std::uint64_t root, std::string_view name) : state_(derive(root, name)) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, bound), rejection sampled; bound = 0 is an error by contract.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (~std::uint64_t{0} / bound);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

  // Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bool() { return (next_u64() & 1u) != 0; }

  // Integer in [lo, hi] inclusive.
  std::int64_t next_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

}  // namespace omv::rng

#endif
