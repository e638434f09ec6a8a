#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "hgl/rational.hpp"

namespace hgl {

// Philox4x32-10 (Salmon et al., Random123). A keyed bijection of a 128-bit
// counter; every random value in the library is philox(seed, counter) for a
// counter derived from what the value is *for*, so results never depend on
// evaluation order or thread count.
namespace philox {

using Counter = std::array<std::uint32_t, 4>;

inline Counter block(std::uint64_t key, Counter ctr) {
  constexpr std::uint32_t kMul0 = 0xD2511F53u, kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u, kWeyl1 = 0xBB67AE85u;
  std::uint32_t k0 = static_cast<std::uint32_t>(key), k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k0, static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k1, static_cast<std::uint32_t>(p0)};
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return ctr;
}

}  // namespace philox

// Stream tags keep independent uses of one seed apart.
enum class Tag : std::uint32_t {
  vertex_choice = 1,
  coordinate = 2,  // + subset size r, see coordinate_tag()
  monte_carlo = 64,
  trial = 65,
  cylinder = 66,
  labels = 67,
  search = 68,
  family = 69,
  injective_map = 70,
  distance_mc = 71,
  symmetry_check = 72,
  dvh = 73,
};

inline std::uint32_t coordinate_tag(unsigned r) { return static_cast<std::uint32_t>(Tag::coordinate) + r; }

// UniformRandomBitGenerator over the counter space (tag, item, position).
// Streams with distinct (tag, item) never overlap.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint32_t tag, std::uint64_t item)
      : seed_(seed), tag_(tag), item_(item) {}
  CounterRng(std::uint64_t seed, Tag tag, std::uint64_t item)
      : CounterRng(seed, static_cast<std::uint32_t>(tag), item) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (buffered_) {
      buffered_ = false;
      return spare_;
    }
    auto out = philox::block(seed_, {position_++, static_cast<std::uint32_t>(item_),
                                     static_cast<std::uint32_t>(item_ >> 32), tag_});
    spare_ = std::uint64_t{out[2]} | std::uint64_t{out[3]} << 32;
    buffered_ = true;
    return std::uint64_t{out[0]} | std::uint64_t{out[1]} << 32;
  }

  // Uniform integer in [0, bound) by Lemire's multiply-and-reject.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t seed_;
  std::uint32_t tag_;
  std::uint64_t item_;
  std::uint32_t position_ = 0;
  std::uint64_t spare_ = 0;
  bool buffered_ = false;
};

// First 64 bits of the stream (tag, item); the usual way to get one value.
inline std::uint64_t random_bits(std::uint64_t seed, std::uint32_t tag, std::uint64_t item) {
  auto out = philox::block(seed, {0, static_cast<std::uint32_t>(item), static_cast<std::uint32_t>(item >> 32), tag});
  return std::uint64_t{out[0]} | std::uint64_t{out[1]} << 32;
}

// Coordinate stream: one Philox block serves the two items 2j and 2j+1.
inline std::array<std::uint64_t, 2> paired_block(std::uint64_t seed, std::uint32_t tag, std::uint64_t j) {
  auto out = philox::block(seed, {0, static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(j >> 32), tag});
  return {std::uint64_t{out[0]} | std::uint64_t{out[1]} << 32, std::uint64_t{out[2]} | std::uint64_t{out[3]} << 32};
}

inline std::uint64_t paired_bits(std::uint64_t seed, std::uint32_t tag, std::uint64_t item) {
  return paired_block(seed, tag, item >> 1)[item & 1];
}

inline std::uint64_t derive_seed(std::uint64_t seed, Tag tag, std::uint64_t item) {
  return random_bits(seed, static_cast<std::uint32_t>(tag), item);
}

// A point of [0,1) in 64-bit fixed point: value = bits / 2^64. Level tests
// against an l-grid are exact integer arithmetic.
struct Unit {
  std::uint64_t bits = 0;

  double value() const { return static_cast<double>(bits) * 0x1.0p-64; }

  // 0-based grid level: floor(l * value).
  unsigned level(unsigned l) const {
    return static_cast<unsigned>((static_cast<unsigned __int128>(bits) * l) >> 64);
  }

  // Smallest representable point >= p/q (requires 0 <= p/q < 1).
  static Unit from_fraction(std::uint64_t p, std::uint64_t q) {
    require(q > 0 && p < q, "fraction outside [0,1)");
    unsigned __int128 scaled = (static_cast<unsigned __int128>(p) << 64);
    unsigned __int128 bits = (scaled + q - 1) / q;
    return Unit{static_cast<std::uint64_t>(bits)};
  }

  static Unit from_double(double x) {
    require(x >= 0.0 && x < 1.0, "coordinate outside [0,1)");
    long double scaled = static_cast<long double>(x) * 0x1.0p64L;
    if (scaled >= 0x1.0p64L) return Unit{std::numeric_limits<std::uint64_t>::max()};
    return Unit{static_cast<std::uint64_t>(scaled)};
  }

  friend bool operator==(Unit, Unit) = default;
};

// First fixed-point value on level j of an l-grid: ceil(j * 2^64 / l).
inline unsigned __int128 grid_boundary(unsigned j, unsigned l) {
  return ((static_cast<unsigned __int128>(j) << 64) + l - 1) / l;
}

// Maps a uniform Unit onto the 0-based level `level` of an l-grid, uniformly
// within [level/l, (level+1)/l).
inline Unit restrict_to_level(Unit u, unsigned level, unsigned l) {
  unsigned __int128 lo = grid_boundary(level, l);
  unsigned __int128 hi = grid_boundary(level + 1, l);
  unsigned __int128 width = hi - lo;
  unsigned __int128 offset = (static_cast<unsigned __int128>(u.bits) * width) >> 64;
  return Unit{static_cast<std::uint64_t>(lo + offset)};
}

}  // namespace hgl
