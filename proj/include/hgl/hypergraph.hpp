#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hgl/combinatorics.hpp"
#include "hgl/error.hpp"
#include "hgl/parallel.hpp"
#include "hgl/random.hpp"
#include "hgl/rational.hpp"

namespace hgl {

// Finite k-uniform hypergraph on vertices 0..n-1. Edges are stored as the colex
// ranks of their vertex sets (sorted, unique); the ordered-tuple view, with
// k! tuples per edge, is never materialised.
class Hypergraph {
 public:
  Hypergraph(unsigned k, unsigned n) : k_(k), n_(n) {
    require(k >= 1, "k: arity must be positive");
    require(k <= 16, "k: arity above 16 is not supported");
    build_index();
  }

  Hypergraph(unsigned k, unsigned n, const std::vector<std::vector<Vertex>>& edges) : Hypergraph(k, n) {
    ranks_.reserve(edges.size());
    for (const auto& e : edges) {
      require(e.size() == k, "edges: edge with " + std::to_string(e.size()) + " vertices in a " +
                                 std::to_string(k) + "-uniform hypergraph");
      std::vector<Vertex> s = e;
      require(sort_distinct(s.begin(), s.end()), "edges: edge with a repeated vertex");
      require(s.back() < n, "edges: vertex " + std::to_string(s.back()) + " out of range for n=" + std::to_string(n));
      ranks_.push_back(rank_of(s));
    }
    std::sort(ranks_.begin(), ranks_.end());
    require(std::adjacent_find(ranks_.begin(), ranks_.end()) == ranks_.end(), "edges: duplicate edge");
    fill_bitmap();
  }

  // From colex ranks; duplicates are merged.
  static Hypergraph from_ranks(unsigned k, unsigned n, std::vector<std::uint64_t> ranks) {
    Hypergraph h(k, n);
    if (!std::is_sorted(ranks.begin(), ranks.end())) std::sort(ranks.begin(), ranks.end());
    ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
    require(ranks.empty() || ranks.back() < binomial(n, k), "edge rank out of range");
    h.ranks_ = std::move(ranks);
    h.fill_bitmap();
    return h;
  }

  unsigned arity() const { return k_; }
  unsigned order() const { return n_; }
  std::size_t size() const { return ranks_.size(); }
  const std::vector<std::uint64_t>& edge_ranks() const { return ranks_; }
  std::vector<Vertex> edge(std::size_t i) const { return colex_unrank(ranks_[i], k_); }

  std::vector<std::vector<Vertex>> edges() const {
    std::vector<std::vector<Vertex>> out;
    out.reserve(ranks_.size());
    for (auto r : ranks_) out.push_back(colex_unrank(r, k_));
    return out;
  }

  // Colex rank of an increasing k-subset of [n].
  std::uint64_t rank_of(std::span<const Vertex> sorted) const {
    std::uint64_t r = 0;
    for (unsigned i = 0; i < sorted.size(); ++i) r += binom_[std::size_t{sorted[i]} * (k_ + 1) + i + 1];
    return r;
  }

  bool has_edge_rank(std::uint64_t rank) const {
    if (!bitmap_.empty()) return bitmap_[rank >> 6] >> (rank & 63) & 1u;
    return std::binary_search(ranks_.begin(), ranks_.end(), rank);
  }

  bool has_edge(std::span<const Vertex> sorted) const { return has_edge_rank(rank_of(sorted)); }

  // Tuple membership in the ordered view: distinct entries forming an edge.
  bool has_tuple(std::span<const Vertex> tuple) const {
    std::array<Vertex, 16> buf{};
    std::copy(tuple.begin(), tuple.end(), buf.begin());
    if (!sort_distinct(buf.begin(), buf.begin() + tuple.size())) return false;
    return has_edge(std::span<const Vertex>(buf.data(), tuple.size()));
  }

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) {
    return a.k_ == b.k_ && a.n_ == b.n_ && a.ranks_ == b.ranks_;
  }

 private:
  void build_index() {
    binom_.assign(std::size_t{n_ + 1} * (k_ + 1), 0);
    for (unsigned v = 0; v <= n_; ++v)
      for (unsigned j = 0; j <= k_; ++j) binom_[std::size_t{v} * (k_ + 1) + j] = binomial(v, j);
  }

  void fill_bitmap() {
    std::uint64_t slots = binomial(n_, k_);
    bitmap_.clear();
    if (slots > (std::uint64_t{1} << 28)) return;
    bitmap_.assign((slots + 63) / 64, 0);
    for (auto r : ranks_) bitmap_[r >> 6] |= std::uint64_t{1} << (r & 63);
  }

  unsigned k_, n_;
  std::vector<std::uint64_t> ranks_;
  std::vector<std::uint64_t> binom_;
  std::vector<std::uint64_t> bitmap_;
};

inline Hypergraph complete_hypergraph(unsigned k, unsigned n) {
  std::vector<std::uint64_t> ranks(binomial(n, k));
  for (std::uint64_t i = 0; i < ranks.size(); ++i) ranks[i] = i;
  return Hypergraph::from_ranks(k, n, std::move(ranks));
}

inline Hypergraph complement(const Hypergraph& h) {
  std::vector<std::uint64_t> ranks;
  std::uint64_t total = binomial(h.order(), h.arity());
  for (std::uint64_t i = 0; i < total; ++i)
    if (!h.has_edge_rank(i)) ranks.push_back(i);
  return Hypergraph::from_ranks(h.arity(), h.order(), std::move(ranks));
}

inline Hypergraph single_edge(unsigned k) { return complete_hypergraph(k, k); }

// Partition of the vertex set of a hypergraph into nonempty blocks. Blocks are
// kept sorted and ordered by their smallest element.
class VertexPartition {
 public:
  VertexPartition(unsigned base, std::vector<std::vector<Vertex>> blocks) : base_(base), block_of_(base, 0) {
    std::vector<bool> seen(base, false);
    for (auto& b : blocks) {
      require(!b.empty(), "partition: empty block");
      std::sort(b.begin(), b.end());
      for (auto v : b) {
        require(v < base, "partition: vertex " + std::to_string(v) + " out of range");
        require(!seen[v], "partition: vertex " + std::to_string(v) + " in two blocks");
        seen[v] = true;
      }
    }
    require(std::all_of(seen.begin(), seen.end(), [](bool s) { return s; }), "partition: blocks do not cover all vertices");
    std::sort(blocks.begin(), blocks.end());
    blocks_ = std::move(blocks);
    for (unsigned i = 0; i < blocks_.size(); ++i)
      for (auto v : blocks_[i]) block_of_[v] = i;
  }

  // From a restricted growth string.
  static VertexPartition from_growth_string(std::span<const unsigned> rgs, unsigned block_count) {
    std::vector<std::vector<Vertex>> blocks(block_count);
    for (unsigned v = 0; v < rgs.size(); ++v) blocks[rgs[v]].push_back(v);
    return VertexPartition(static_cast<unsigned>(rgs.size()), std::move(blocks));
  }

  unsigned base() const { return base_; }
  const std::vector<std::vector<Vertex>>& blocks() const { return blocks_; }
  unsigned block_of(Vertex v) const { return block_of_[v]; }
  unsigned height() const { return base_ - static_cast<unsigned>(blocks_.size()); }

 private:
  unsigned base_;
  std::vector<std::vector<Vertex>> blocks_;
  std::vector<unsigned> block_of_;
};

// F(P): vertices are the blocks, edges are the images of the edges of F.
// nullopt when some block meets some edge twice (the quotient is not k-uniform).
inline std::optional<Hypergraph> quotient(const Hypergraph& f, const VertexPartition& p) {
  require(p.base() == f.order(), "partition: base does not match the hypergraph's vertex count");
  std::vector<std::vector<Vertex>> edges;
  edges.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<Vertex> image;
    for (auto v : f.edge(i)) image.push_back(p.block_of(v));
    if (!sort_distinct(image.begin(), image.end())) return std::nullopt;
    edges.push_back(std::move(image));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Hypergraph(f.arity(), static_cast<unsigned>(p.blocks().size()), edges);
}

enum class HomMode { all, injective };

namespace detail {

// Counts maps V(F) -> V(H) by depth-first assignment of F's vertices in
// index order; a constraint (a k-subset of V(F)) is checked as soon as its
// largest vertex is assigned.
class MapCounter {
 public:
  struct Options {
    bool injective = false;
    bool induced = false;  // also require non-edges of F to land on non-edges (with distinct images)
  };

  MapCounter(const Hypergraph& f, const Hypergraph& h, Options opt) : f_(f), h_(h), opt_(opt) {
    require(f.arity() == h.arity(), "arity mismatch: F is " + std::to_string(f.arity()) + "-uniform, H is " +
                                        std::to_string(h.arity()) + "-uniform");
    constraints_.resize(f.order());
    if (opt.induced) {
      for_each_subset(f.order(), f.arity(), [&](std::span<const Vertex> s) {
        constraints_[s.back()].push_back({std::vector<Vertex>(s.begin(), s.end()), f.has_edge(s)});
      });
    } else {
      for (std::size_t i = 0; i < f.size(); ++i) {
        auto e = f.edge(i);
        Vertex last = e.back();
        constraints_[last].push_back({std::move(e), true});
      }
    }
    pivot_.assign(f.order(), -1);
    for (unsigned d = 0; d < f.order(); ++d)
      for (std::size_t i = 0; i < constraints_[d].size() && pivot_[d] < 0; ++i)
        if (constraints_[d][i].edge) pivot_[d] = static_cast<int>(i);
    bool closed_form = !opt.induced && f.size() == 1;
    if (!closed_form && std::any_of(pivot_.begin(), pivot_.end(), [](int p) { return p >= 0; })) build_links();
  }

  std::uint64_t count() const {
    const unsigned v = f_.order(), n = h_.order();
    if (v == 0) return 1;
    if (opt_.injective && v > n) return 0;
    require(checked_pow(n, v) != kU64Max, "hom count overflows 64 bits");
    if (!opt_.induced && f_.size() == 1) {
      // one edge: k! orderings of each H-edge, free choice for the rest
      const unsigned k = f_.arity();
      std::uint64_t rest = opt_.injective ? falling_factorial(n - k, v - k) : checked_pow(n, v - k);
      return falling_factorial(k, k) * h_.size() * rest;
    }
    // Split on the image of vertex 0.
    return parallel_sum<std::uint64_t>(n, [&](std::size_t first) {
      std::vector<Vertex> image(v);
      std::vector<bool> used(opt_.injective ? n : 0, false);
      image[0] = static_cast<Vertex>(first);
      if (!satisfied(0, image)) return std::uint64_t{0};
      if (opt_.injective) used[first] = true;
      return extend(1, image, used);
    }, n >= 32 && v >= 2 ? default_threads() : 1);
  }

 private:
  struct Constraint {
    std::vector<Vertex> vertices;
    bool edge;
  };

  bool satisfied(unsigned depth, const std::vector<Vertex>& image, int skip = -1) const {
    std::array<Vertex, 16> buf{};
    for (int ci = 0; ci < static_cast<int>(constraints_[depth].size()); ++ci) {
      if (ci == skip) continue;
      const auto& c = constraints_[depth][ci];
      const unsigned k = static_cast<unsigned>(c.vertices.size());
      for (unsigned i = 0; i < k; ++i) buf[i] = image[c.vertices[i]];
      bool distinct = sort_distinct(buf.begin(), buf.begin() + k);
      if (!distinct) return false;  // neither an edge nor a non-edge of H
      if (h_.has_edge(std::span<const Vertex>(buf.data(), k)) != c.edge) return false;
    }
    return true;
  }

  std::uint64_t extend(unsigned depth, std::vector<Vertex>& image, std::vector<bool>& used) const {
    const unsigned v = f_.order(), n = h_.order();
    if (depth == v) return 1;
    std::uint64_t total = 0;
    int skip = -1;  // the pivot holds for every linked candidate
    auto visit = [&](Vertex x) {
      if (opt_.injective && used[x]) return;
      image[depth] = x;
      if (!satisfied(depth, image, skip)) return;
      if (opt_.injective) used[x] = true;
      total += extend(depth + 1, image, used);
      if (opt_.injective) used[x] = false;
    };
    if (pivot_[depth] >= 0 && !offsets_.empty()) {
      // only completions of the pivot edge's other images can work
      const auto& c = constraints_[depth][pivot_[depth]];
      std::array<Vertex, 16> buf{};
      unsigned j = 0;
      for (auto u : c.vertices)
        if (u != depth) buf[j++] = image[u];
      if (!sort_distinct(buf.begin(), buf.begin() + j)) return 0;
      auto key = colex_rank(std::span<const Vertex>(buf.data(), j));
      skip = pivot_[depth];
      for (auto i = offsets_[key]; i < offsets_[key + 1]; ++i) visit(links_[i]);
    } else {
      for (Vertex x = 0; x < n; ++x) visit(x);
    }
    return total;
  }

  // links_[offsets_[q] .. offsets_[q+1]): vertices completing the (k-1)-set of
  // colex rank q to an edge of H.
  void build_links() {
    const unsigned k = h_.arity();
    const std::uint64_t keys = binomial(h_.order(), k - 1);
    if (keys > (std::uint64_t{1} << 26)) return;
    offsets_.assign(keys + 1, 0);
    std::vector<Vertex> rest(k - 1);
    auto each = [&](auto&& fn) {
      auto visit = [&](std::span<const Vertex> e) {
        for (unsigned drop = 0; drop < k; ++drop) {
          for (unsigned i = 0, j = 0; i < k; ++i)
            if (i != drop) rest[j++] = e[i];
          fn(colex_rank(rest), e[drop]);
        }
      };
      if (h_.size() * 8 < binomial(h_.order(), k)) {
        for (auto q : h_.edge_ranks()) visit(colex_unrank(q, k));
      } else {
        std::uint64_t q = 0;
        for_each_subset(h_.order(), k, [&](std::span<const Vertex> e) {
          if (h_.has_edge_rank(q++)) visit(e);
        });
      }
    };
    each([&](std::uint64_t key, Vertex) { ++offsets_[key + 1]; });
    for (std::uint64_t i = 0; i < keys; ++i) offsets_[i + 1] += offsets_[i];
    links_.resize(offsets_[keys]);
    std::vector<std::uint64_t> fill(offsets_.begin(), offsets_.end() - 1);
    each([&](std::uint64_t key, Vertex x) { links_[fill[key]++] = x; });
  }

  const Hypergraph& f_;
  const Hypergraph& h_;
  Options opt_;
  std::vector<std::vector<Constraint>> constraints_;
  std::vector<int> pivot_;  // index of an edge constraint closing at each depth
  std::vector<std::uint64_t> offsets_;
  std::vector<Vertex> links_;
};

}  // namespace detail

// Number of injective homomorphisms by direct enumeration of injective maps.
// Serves as the independent check of the inversion formula used by hom().
inline std::uint64_t hom_injective_enumerate(const Hypergraph& f, const Hypergraph& h) {
  return detail::MapCounter(f, h, {.injective = true, .induced = false}).count();
}

inline constexpr unsigned kMaxInversionVertices = 10;

// hom(F,H): maps sending every edge of F onto an edge of H. In injective mode
// hom0 is obtained by Moebius inversion on the partition lattice,
//   hom0(F,H) = sum_P mu(P) hom(F(P),H),  mu(P) = prod_B (-1)^{|B|-1} (|B|-1)!,
// degenerate quotients contributing zero. The sign of mu(P) is (-1)^{h(P)};
// the factorials only matter once a block has three or more vertices.
inline std::uint64_t hom(const Hypergraph& f, const Hypergraph& h, HomMode mode = HomMode::all) {
  if (mode == HomMode::all) return detail::MapCounter(f, h, {}).count();
  require(f.arity() == h.arity(), "arity mismatch");
  if (f.order() > kMaxInversionVertices)
    throw CapExceeded("inversion formula needs |V(F)| <= " + std::to_string(kMaxInversionVertices));
  __int128 total = 0;
  for_each_set_partition(f.order(), [&](std::span<const unsigned> rgs, unsigned blocks) {
    auto q = quotient(f, VertexPartition::from_growth_string(rgs, blocks));
    if (!q) return;
    std::vector<unsigned> size(blocks, 0);
    for (auto b : rgs) ++size[b];
    __int128 mu = 1;
    for (auto s : size)
      for (unsigned i = 2; i < s; ++i) mu *= i;
    auto term = mu * static_cast<__int128>(hom(*q, h, HomMode::all));
    total += ((f.order() - blocks) % 2 == 0) ? term : -term;
  });
  if (total < 0) throw std::logic_error("negative injective homomorphism count");
  return static_cast<std::uint64_t>(total);
}

// Maps that are induced homomorphisms: edges to edges, non-edges to non-edges
// of H with distinct images.
inline std::uint64_t induced_hom(const Hypergraph& f, const Hypergraph& h, HomMode mode = HomMode::all) {
  return detail::MapCounter(f, h, {.injective = mode == HomMode::injective, .induced = true}).count();
}

struct DensityRecord {
  Rational t;
  std::optional<Rational> t0;  // undefined when |V(F)| > n
  Rational t_ind;
  std::optional<Rational> t0_ind;
};

inline Rational hom_density(const Hypergraph& f, const Hypergraph& h) {
  require(h.order() > 0 || f.order() == 0, "H has no vertices");
  return Rational(BigInt(hom(f, h)), ipow(BigInt(h.order()), f.order()));
}

inline DensityRecord densities(const Hypergraph& f, const Hypergraph& h) {
  require(f.arity() == h.arity(), "arity mismatch: F is " + std::to_string(f.arity()) + "-uniform, H is " +
                                      std::to_string(h.arity()) + "-uniform");
  require(h.order() > 0 || f.order() == 0, "H has no vertices");
  const unsigned v = f.order(), n = h.order();
  BigInt all_maps = ipow(BigInt(n), v);
  DensityRecord out;
  out.t = Rational(BigInt(hom(f, h)), all_maps);
  out.t_ind = Rational(BigInt(induced_hom(f, h)), all_maps);
  if (v <= n) {
    BigInt injective_maps = 1;
    for (unsigned i = 0; i < v; ++i) injective_maps *= (n - i);
    std::uint64_t h0 = v <= kMaxInversionVertices ? hom(f, h, HomMode::injective) : hom_injective_enumerate(f, h);
    out.t0 = Rational(BigInt(h0), injective_maps);
    out.t0_ind = Rational(BigInt(induced_hom(f, h, HomMode::injective)), injective_maps);
  }
  return out;
}

// t-fold equitable blowup: vertex x becomes x*t .. x*t + t-1, each edge a
// complete k-partite bundle on the corresponding groups.
inline Hypergraph blowup(const Hypergraph& h, unsigned t) {
  require(t >= 1, "blowup factor must be >= 1");
  std::uint64_t n = std::uint64_t{h.order()} * t;
  require(n < (std::uint64_t{1} << 31), "blowup: vertex count overflows");
  const unsigned k = h.arity();
  require(checked_pow(t, k) != kU64Max && h.size() * checked_pow(t, k) < (std::uint64_t{1} << 32),
          "blowup: edge count too large");
  Hypergraph shape(k, static_cast<unsigned>(n));
  std::vector<std::uint64_t> ranks;
  ranks.reserve(h.size() * checked_pow(t, k));
  std::vector<Vertex> member(k);
  for (std::size_t i = 0; i < h.size(); ++i) {
    auto e = h.edge(i);
    std::vector<unsigned> digit(k, 0);
    while (true) {
      for (unsigned j = 0; j < k; ++j) member[j] = e[j] * t + digit[j];
      ranks.push_back(shape.rank_of(member));  // groups are ordered like e, so member is increasing
      unsigned j = 0;
      while (j < k && ++digit[j] == t) digit[j++] = 0;
      if (j == k) break;
    }
  }
  return Hypergraph::from_ranks(k, static_cast<unsigned>(n), std::move(ranks));
}

inline Hypergraph relabel(const Hypergraph& h, std::span<const Vertex> perm) {
  std::vector<std::uint64_t> ranks;
  ranks.reserve(h.size());
  std::vector<Vertex> img(h.arity());
  for (std::size_t i = 0; i < h.size(); ++i) {
    auto e = h.edge(i);
    for (unsigned j = 0; j < e.size(); ++j) img[j] = perm[e[j]];
    std::sort(img.begin(), img.end());
    ranks.push_back(h.rank_of(img));
  }
  return Hypergraph::from_ranks(h.arity(), h.order(), std::move(ranks));
}

inline constexpr unsigned kMaxCanonicalVertices = 10;

// Canonical representative: the relabelling with the lexicographically
// smallest sorted edge-rank list, over all n! vertex permutations.
inline Hypergraph canonical_form(const Hypergraph& h) {
  if (h.order() > kMaxCanonicalVertices)
    throw CapExceeded("canonical form needs n <= " + std::to_string(kMaxCanonicalVertices));
  std::vector<Vertex> perm(h.order());
  std::iota(perm.begin(), perm.end(), Vertex{0});
  std::vector<std::uint64_t> best = h.edge_ranks(), current(h.size());
  const auto edges = h.edges();
  std::vector<Vertex> img(h.arity());
  do {
    for (std::size_t i = 0; i < edges.size(); ++i) {
      for (unsigned j = 0; j < img.size(); ++j) img[j] = perm[edges[i][j]];
      std::sort(img.begin(), img.end());
      current[i] = h.rank_of(img);
    }
    std::sort(current.begin(), current.end());
    if (current < best) best = current;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return Hypergraph::from_ranks(h.arity(), h.order(), std::move(best));
}

inline std::vector<unsigned> degree_sequence(const Hypergraph& h) {
  std::vector<unsigned> deg(h.order(), 0);
  for (std::size_t i = 0; i < h.size(); ++i)
    for (auto v : h.edge(i)) ++deg[v];
  std::sort(deg.begin(), deg.end());
  return deg;
}

inline bool isomorphic(const Hypergraph& a, const Hypergraph& b) {
  if (a.arity() != b.arity() || a.order() != b.order() || a.size() != b.size()) return false;
  if (degree_sequence(a) != degree_sequence(b)) return false;
  return canonical_form(a) == canonical_form(b);
}

inline constexpr unsigned kExhaustiveFamilyVertices = 5;

// All k-uniform hypergraphs on exactly v vertices up to isomorphism, as
// canonical forms in increasing order of (edge count, ranks).
inline std::vector<Hypergraph> canonical_hypergraphs(unsigned k, unsigned v) {
  if (v > kExhaustiveFamilyVertices)
    throw CapExceeded("exhaustive enumeration needs v <= " + std::to_string(kExhaustiveFamilyVertices));
  const std::uint64_t slots = binomial(v, k);
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<Hypergraph> out;
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << slots); ++subset) {
    std::vector<std::uint64_t> ranks;
    for (std::uint64_t r = 0; r < slots; ++r)
      if (subset >> r & 1u) ranks.push_back(r);
    auto c = canonical_form(Hypergraph::from_ranks(k, v, std::move(ranks)));
    if (seen.insert(c.edge_ranks()).second) out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const Hypergraph& a, const Hypergraph& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.edge_ranks() < b.edge_ranks();
  });
  return out;
}

// Each k-subset of [v] is an edge with probability 1/2.
inline Hypergraph random_hypergraph(unsigned k, unsigned v, CounterRng& rng) {
  std::vector<std::uint64_t> ranks;
  std::uint64_t slots = binomial(v, k);
  for (std::uint64_t r = 0; r < slots; ++r)
    if (rng() >> 63) ranks.push_back(r);
  return Hypergraph::from_ranks(k, v, std::move(ranks));
}

// Test family of "all F with at most max_vertices vertices": exhaustive up to
// kExhaustiveFamilyVertices, then `random_per_size` seeded random members per
// larger vertex count.
inline std::vector<Hypergraph> test_family(unsigned k, unsigned max_vertices, unsigned random_per_size = 20,
                                           std::uint64_t seed = 0) {
  std::vector<Hypergraph> out;
  for (unsigned v = 1; v <= max_vertices; ++v) {
    if (v <= kExhaustiveFamilyVertices) {
      for (auto& f : canonical_hypergraphs(k, v)) out.push_back(std::move(f));
    } else {
      for (unsigned i = 0; i < random_per_size; ++i) {
        CounterRng rng(seed, Tag::family, std::uint64_t{v} << 32 | i);
        out.push_back(random_hypergraph(k, v, rng));
      }
    }
  }
  return out;
}

// Density equivalence. When the common blowups (|V(H1)||V(H2)| vertices) fit
// within check_size (and the canonical-form cap) the answer is exact, by
// isomorphism of the |V(H2)|-fold blowup of H1 and the |V(H1)|-fold blowup of
// H2. Otherwise t(F,H1) = t(F,H2) is compared for every F on at most
// min(check_size, 5) vertices, which is only a necessary condition.
inline bool density_equivalent(const Hypergraph& h1, const Hypergraph& h2, unsigned check_size) {
  require(h1.arity() == h2.arity(), "arity mismatch");
  require(h1.order() > 0 && h2.order() > 0, "hypergraphs must have vertices");
  std::uint64_t common = std::uint64_t{h1.order()} * h2.order();
  if (common <= check_size && common <= kMaxCanonicalVertices)
    return isomorphic(blowup(h1, h2.order()), blowup(h2, h1.order()));
  unsigned limit = std::min(check_size, kExhaustiveFamilyVertices);
  for (const auto& f : test_family(h1.arity(), limit))
    if (hom_density(f, h1) != hom_density(f, h2)) return false;
  return true;
}

}  // namespace hgl
