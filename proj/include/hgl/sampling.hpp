#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hgl/error.hpp"
#include "hgl/hypergraph.hpp"
#include "hgl/hypergraphon.hpp"
#include "hgl/hyperpartition.hpp"
#include "hgl/parallel.hpp"
#include "hgl/random.hpp"

namespace hgl {

// A random coordinate system on r([n],k), evaluated lazily: the value of S is
// paired_bits(seed, coordinate_tag(|S|), colex rank of S). With a hyperpartition
// the value is pushed into the interval of S's class.
class CoordinateSystem {
 public:
  CoordinateSystem(unsigned n, unsigned k, std::uint64_t seed, const Hyperpartition* hp = nullptr)
      : n_(n), k_(k), seed_(seed), hp_(hp) {
    if (hp_) {
      require(hp_->order() == n && hp_->arity() == k, "hyperpartition shape does not match (n, k)");
    }
  }

  unsigned order() const { return n_; }
  unsigned arity() const { return k_; }
  std::uint64_t seed() const { return seed_; }

  Unit value(std::span<const Vertex> sorted) const { return value(sorted, colex_rank(sorted)); }

  Unit value(std::span<const Vertex> sorted, std::uint64_t rank) const {
    const auto r = static_cast<unsigned>(sorted.size());
    return place(Unit{paired_bits(seed_, coordinate_tag(r), rank)}, r, rank);
  }

  // Raw uniform bits -> coordinate of the r-subset with the given rank.
  Unit place(Unit u, unsigned r, std::uint64_t rank) const {
    if (!hp_) return u;
    return restrict_to_level(u, hp_->labels(r)[rank] - 1u, hp_->classes());
  }

 private:
  unsigned n_, k_;
  std::uint64_t seed_;
  const Hyperpartition* hp_;
};

struct SampleRecord {
  Hypergraph sample;
  std::uint64_t seed = 0;
  std::string source;  // W or H descriptor
  unsigned n = 0;
  bool hyperpartitioned = false;
};

// G(H, n): n iid uniform vertices of H, v_i from the stream (seed, vertex_choice, i).
inline Hypergraph sample_vertex(const Hypergraph& h, unsigned n, std::uint64_t seed) {
  require(h.order() > 0, "H: empty vertex set");
  std::vector<Vertex> pick(n);
  for (unsigned i = 0; i < n; ++i) pick[i] = static_cast<Vertex>(CounterRng(seed, Tag::vertex_choice, i).below(h.order()));
  std::vector<std::uint64_t> ranks;
  std::vector<Vertex> image(h.arity());
  std::uint64_t q = 0;
  for_each_subset(n, h.arity(), [&](std::span<const Vertex> s) {
    for (unsigned i = 0; i < s.size(); ++i) image[i] = pick[s[i]];
    std::vector<Vertex> sorted = image;
    if (sort_distinct(sorted.begin(), sorted.end()) && h.has_edge(sorted)) ranks.push_back(q);
    ++q;
  });
  return Hypergraph::from_ranks(h.arity(), n, std::move(ranks));
}

inline constexpr std::uint64_t kMaxSampleSubsets = std::uint64_t{1} << 32;

// G(W, n) or G(W, HP, n): one coordinate per S in r([n],k); the k-set e is an
// edge iff the point (X_S)_{S ⊆ e}, read through the increasing order of e,
// lies in W.
template <class W>
SampleRecord sample_w(const W& w, unsigned n, std::uint64_t seed, const Hyperpartition* hp = nullptr,
                      std::string source = "W") {
  const unsigned k = detail::hypergraphon_arity(w);
  if (hp) {
    if constexpr (std::is_same_v<W, StepHypergraphon>) {
      require(hp->order() == n, "shape mismatch: hyperpartition n=" + std::to_string(hp->order()) +
                                    " vs n=" + std::to_string(n));
      require(hp->arity() == w.k(), "shape mismatch: hyperpartition k vs W k");
      require(hp->classes() == w.l(), "shape mismatch: hyperpartition l=" + std::to_string(hp->classes()) +
                                          " vs W l=" + std::to_string(w.l()));
    } else {
      throw InputError("hyperpartition sampling requires a step hypergraphon");
    }
  }
  const std::uint64_t total = binomial(n, k);
  if (total > kMaxSampleSubsets) throw CapExceeded("C(n,k) above 2^32");
  CoordinateSystem coords(n, k, seed, hp);

  std::vector<std::uint64_t> binom(std::size_t{n + 1} * (k + 1));
  for (unsigned v = 0; v <= n; ++v)
    for (unsigned j = 0; j <= k; ++j) binom[std::size_t{v} * (k + 1) + j] = binomial(v, j);

  // Lower-arity coordinates are shared by many k-sets: materialize them
  // (as grid levels when W is a step function).
  constexpr bool step = std::is_same_v<W, StepHypergraphon>;
  std::vector<std::vector<Unit>> lower(k);
  std::vector<std::vector<std::uint8_t>> lower_level(k);
  for (unsigned r = 1; r < k; ++r) {
    (step ? lower_level[r].resize(binomial(n, r)) : lower[r].resize(binomial(n, r)));
    std::uint64_t q = 0;
    for_each_subset(n, r, [&](std::span<const Vertex> s) {
      Unit u = coords.value(s, q);
      if constexpr (step)
        lower_level[r][q] = static_cast<std::uint8_t>(u.level(w.l()));
      else
        lower[r][q] = u;
      ++q;
    });
  }

  // Work is split over blocks of colex ranks; each block unranks its start.
  const std::uint64_t block = 1 << 14;
  const std::uint64_t blocks = (total + block - 1) / block;
  std::vector<std::vector<std::uint64_t>> found(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    std::uint64_t first = b * block, last = std::min(total, first + block);
    std::vector<Vertex> s = colex_unrank(first, k);
    std::vector<Vertex> sub(k);
    Point p(k);
    const Mask top = (Mask{1} << k) - 1;
    std::array<std::uint64_t, 2> pair{};
    for (std::uint64_t q = first; q < last; ++q) {
      bool edge;
      if constexpr (step) {
        const auto& space = w.space();
        std::uint64_t code = 0;
        for (Mask a = 1; a < top; ++a) {
          unsigned r = 0;
          std::uint64_t rank = 0;
          for (unsigned i = 0; i < k; ++i)
            if (a >> i & 1u) {
              rank += binom[std::size_t{s[i]} * (k + 1) + r + 1];
              ++r;
            }
          code += std::uint64_t{lower_level[r][rank]} * space.place(a);
        }
        if (q == first || (q & 1) == 0) pair = paired_block(seed, coordinate_tag(k), q >> 1);
        code += std::uint64_t{coords.place(Unit{pair[q & 1]}, k, q).level(w.l())} * space.place(top);
        edge = w.contains(code);
      } else {
        for (Mask a = 1; a <= top; ++a) {
          unsigned r = 0;
          for (unsigned i = 0; i < k; ++i)
            if (a >> i & 1u) sub[r++] = s[i];
          std::span<const Vertex> part(sub.data(), r);
          p[a] = r < k ? lower[r][colex_rank(part)] : coords.value(part, q);
        }
        edge = contains(w, p);
      }
      if (edge) found[b].push_back(q);
      // next k-subset in colex order
      unsigned i = 0;
      while (i + 1 < k && s[i] + 1 == s[i + 1]) {
        s[i] = i;
        ++i;
      }
      ++s[i];
    }
  });
  std::vector<std::uint64_t> ranks;
  for (auto& part : found) ranks.insert(ranks.end(), part.begin(), part.end());
  SampleRecord out{Hypergraph::from_ranks(k, n, std::move(ranks)), seed, std::move(source), n, hp != nullptr};
  return out;
}

}  // namespace hgl
