#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hgl/error.hpp"

namespace hgl {

using Vertex = std::uint32_t;
using Mask = std::uint32_t;

inline constexpr std::uint64_t kU64Max = std::numeric_limits<std::uint64_t>::max();

// C(n, r), saturating at kU64Max.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > kU64Max) return kU64Max;
  }
  return static_cast<std::uint64_t>(acc);
}

// base^exponent, saturating at kU64Max.
inline std::uint64_t checked_pow(std::uint64_t base, unsigned exponent) {
  unsigned __int128 acc = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    acc *= base;
    if (acc > kU64Max) return kU64Max;
  }
  return static_cast<std::uint64_t>(acc);
}

// n (n-1) ... (n-r+1), saturating.
inline std::uint64_t falling_factorial(std::uint64_t n, unsigned r) {
  if (r > n) return 0;
  unsigned __int128 acc = 1;
  for (unsigned i = 0; i < r; ++i) {
    acc *= (n - i);
    if (acc > kU64Max) return kU64Max;
  }
  return static_cast<std::uint64_t>(acc);
}

// Colex rank of a strictly increasing vertex list: sum_i C(a_i, i+1).
inline std::uint64_t colex_rank(std::span<const Vertex> sorted) {
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) rank += binomial(sorted[i], i + 1);
  return rank;
}

inline std::vector<Vertex> colex_unrank(std::uint64_t rank, unsigned r) {
  std::vector<Vertex> out(r);
  for (unsigned i = r; i-- > 0;) {
    // largest v with C(v, i+1) <= rank
    Vertex lo = i, hi = i;
    while (binomial(hi + 1, i + 1) <= rank) hi = hi * 2 + 1;
    while (lo < hi) {
      Vertex mid = lo + (hi - lo + 1) / 2;
      if (binomial(mid, i + 1) <= rank)
        lo = mid;
      else
        hi = mid - 1;
    }
    out[i] = lo;
    rank -= binomial(lo, i + 1);
  }
  return out;
}

// Visits every r-subset of [0, n) in colex order (so the visit index equals the
// colex rank). fn receives the subset as an increasing span.
template <class Fn>
void for_each_subset(unsigned n, unsigned r, Fn&& fn) {
  if (r > n) return;
  std::vector<Vertex> a(r);
  std::iota(a.begin(), a.end(), Vertex{0});
  while (true) {
    fn(std::span<const Vertex>(a));
    unsigned i = 0;
    while (i < r && ((i + 1 < r) ? a[i] + 1 == a[i + 1] : a[i] + 1 == n)) ++i;
    if (i == r) return;
    ++a[i];
    for (unsigned j = 0; j < i; ++j) a[j] = j;
  }
}

// Sorts a small tuple in place; false when it has a repeated entry.
template <class It>
bool sort_distinct(It first, It last) {
  std::sort(first, last);
  return std::adjacent_find(first, last) == last;
}

inline unsigned popcount(Mask m) { return static_cast<unsigned>(std::popcount(m)); }

// All permutations of {0..k-1} in lexicographic order; perm[i] is the image of i.
inline std::vector<std::vector<unsigned>> all_permutations(unsigned k) {
  std::vector<unsigned> p(k);
  std::iota(p.begin(), p.end(), 0u);
  std::vector<std::vector<unsigned>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// Image of a subset mask of [k] under a permutation.
inline Mask permute_mask(Mask m, std::span<const unsigned> perm) {
  Mask out = 0;
  for (unsigned i = 0; i < perm.size(); ++i)
    if (m >> i & 1u) out |= Mask{1} << perm[i];
  return out;
}

// Set partitions of {0..v-1} as restricted growth strings: block[i] is the
// block index of element i, with block[0] = 0 and block[i] <= 1 + max(block[0..i)).
template <class Fn>
void for_each_set_partition(unsigned v, Fn&& fn) {
  if (v == 0) {
    std::vector<unsigned> empty;
    fn(std::span<const unsigned>(empty), 0u);
    return;
  }
  std::vector<unsigned> block(v, 0), prefix_max(v, 0);
  while (true) {
    fn(std::span<const unsigned>(block), prefix_max[v - 1] + 1);
    int i = static_cast<int>(v) - 1;
    while (i > 0 && block[i] == prefix_max[i - 1] + 1) --i;
    if (i == 0) return;
    ++block[i];
    prefix_max[i] = std::max(prefix_max[i - 1], block[i]);
    for (unsigned j = i + 1; j < v; ++j) {
      block[j] = 0;
      prefix_max[j] = prefix_max[j - 1];
    }
  }
}

}  // namespace hgl
