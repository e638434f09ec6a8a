#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hgl/cells.hpp"
#include "hgl/combinatorics.hpp"
#include "hgl/error.hpp"
#include "hgl/hypergraph.hpp"
#include "hgl/parallel.hpp"
#include "hgl/random.hpp"
#include "hgl/rational.hpp"

namespace hgl {

// An l-hyperpartition of [n]: for every arity r in 1..k a labelling of all
// r-subsets of [n] by classes 1..l. labels(r) is indexed by colex rank.
class Hyperpartition {
 public:
  Hyperpartition(unsigned n, unsigned k, unsigned l, std::vector<std::vector<Label>> labels_by_arity)
      : n_(n), k_(k), l_(l), labels_(std::move(labels_by_arity)) {
    require(k >= 1, "k: must be positive");
    require(l >= 1 && l <= 255, "l: must lie in 1..255");
    require(labels_.size() == k, "labels: expected one list per arity 1.." + std::to_string(k));
    for (unsigned r = 1; r <= k; ++r) {
      auto& row = labels_[r - 1];
      require(row.size() == binomial(n, r), "labels." + std::to_string(r) + ": expected C(n," + std::to_string(r) +
                                                ")=" + std::to_string(binomial(n, r)) + " entries, got " +
                                                std::to_string(row.size()));
      for (auto x : row) require(x >= 1 && x <= l, "labels." + std::to_string(r) + ": label outside 1..l");
    }
    binom_.assign(std::size_t{n + 1} * (k + 1), 0);
    for (unsigned v = 0; v <= n; ++v)
      for (unsigned j = 0; j <= k; ++j) binom_[std::size_t{v} * (k + 1) + j] = binomial(v, j);
  }

  unsigned order() const { return n_; }
  unsigned arity() const { return k_; }
  unsigned classes() const { return l_; }
  const std::vector<Label>& labels(unsigned r) const { return labels_[r - 1]; }

  std::uint64_t rank_of(std::span<const Vertex> sorted) const {
    std::uint64_t rank = 0;
    for (unsigned i = 0; i < sorted.size(); ++i) rank += binom_[std::size_t{sorted[i]} * (k_ + 1) + i + 1];
    return rank;
  }

  // Class of an increasing subset of size 1..k.
  Label label(std::span<const Vertex> sorted) const { return labels_[sorted.size() - 1][rank_of(sorted)]; }

  Hyperpartition with_label(unsigned r, std::uint64_t rank, Label value) const {
    Hyperpartition copy = *this;
    copy.labels_[r - 1][rank] = value;
    return copy;
  }
  void set_label(unsigned r, std::uint64_t rank, Label value) { labels_[r - 1][rank] = value; }

  friend bool operator==(const Hyperpartition& a, const Hyperpartition& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.l_ == b.l_ && a.labels_ == b.labels_;
  }

 private:
  unsigned n_, k_, l_;
  std::vector<std::vector<Label>> labels_;
  std::vector<std::uint64_t> binom_;
};

// Labels drawn iid uniformly from [l]; label of the r-subset with rank q comes
// from the counter (seed, labels, r, q).
inline Hyperpartition random_hyperpartition(unsigned n, unsigned k, unsigned l, std::uint64_t seed) {
  std::vector<std::vector<Label>> labels(k);
  for (unsigned r = 1; r <= k; ++r) {
    labels[r - 1].resize(binomial(n, r));
    for (std::uint64_t q = 0; q < labels[r - 1].size(); ++q) {
      CounterRng rng(derive_seed(seed, Tag::labels, r), Tag::labels, q);
      labels[r - 1][q] = static_cast<Label>(1 + rng.below(l));
    }
  }
  return Hyperpartition(n, k, l, std::move(labels));
}

// Balanced deterministic labelling: the r-subset of colex rank q gets (q mod l) + 1.
inline Hyperpartition round_robin_hyperpartition(unsigned n, unsigned k, unsigned l) {
  std::vector<std::vector<Label>> labels(k);
  for (unsigned r = 1; r <= k; ++r) {
    labels[r - 1].resize(binomial(n, r));
    for (std::uint64_t q = 0; q < labels[r - 1].size(); ++q) labels[r - 1][q] = static_cast<Label>(q % l + 1);
  }
  return Hyperpartition(n, k, l, std::move(labels));
}

// max over r and i<j of ||P_r^i| - |P_r^j|| / C(n,r). The hyperpartition is
// delta-equitable iff this is < delta.
inline Rational equitability_deficit(const Hyperpartition& hp) {
  Rational worst = 0;
  for (unsigned r = 1; r <= hp.arity(); ++r) {
    const auto& row = hp.labels(r);
    if (row.empty()) continue;
    std::vector<std::uint64_t> count(hp.classes() + 1, 0);
    for (auto x : row) ++count[x];
    auto [lo, hi] = std::minmax_element(count.begin() + 1, count.end());
    worst = std::max(worst, Rational(BigInt(*hi - *lo), BigInt(row.size())));
  }
  return worst;
}

// Symmetric (k,l)-cell system.
class CombinatorialStructure : public SymmetricCellSystem {
 public:
  using SymmetricCellSystem::SymmetricCellSystem;

  static CombinatorialStructure all(unsigned k, unsigned l) {
    CellSpace space(k, l);
    std::vector<std::uint64_t> codes(space.size());
    for (std::uint64_t c = 0; c < codes.size(); ++c) codes[c] = c;
    return CombinatorialStructure(k, l, std::move(codes));
  }
  static CombinatorialStructure none(unsigned k, unsigned l) { return CombinatorialStructure(k, l, {}); }

  // Closes an arbitrary cell list under S_k.
  static CombinatorialStructure symmetrized(unsigned k, unsigned l, std::vector<std::uint64_t> codes) {
    CellSpace space(k, l);
    return CombinatorialStructure(space, symmetrize(space, CellSet(space, std::move(codes))));
  }

  // All cells satisfying a predicate on the coordinate (then symmetrized).
  template <class Pred>
  static CombinatorialStructure where(unsigned k, unsigned l, Pred&& pred) {
    CellSpace space(k, l);
    std::vector<std::uint64_t> codes;
    for (std::uint64_t c = 0; c < space.size(); ++c)
      if (pred(CellCoordinate(space, c))) codes.push_back(c);
    return CombinatorialStructure(space, symmetrize(space, CellSet(space, std::move(codes))));
  }
};

// Coordinate of the directed cell containing an ordered k-tuple of distinct
// vertices: assignment(S) = label of {x_i : i in S}.
inline CellCoordinate cell_coordinate(const Hyperpartition& hp, std::span<const Vertex> tuple) {
  const unsigned k = hp.arity();
  require(tuple.size() == k, "tuple: expected " + std::to_string(k) + " vertices");
  for (auto x : tuple) require(x < hp.order(), "tuple: vertex out of range");
  std::vector<Vertex> check(tuple.begin(), tuple.end());
  require(sort_distinct(check.begin(), check.end()), "tuple: repeated vertex");
  CellCoordinate out(k);
  std::array<Vertex, 16> buf{};
  for (Mask m = 1; m < (Mask{1} << k); ++m) {
    unsigned r = 0;
    for (unsigned i = 0; i < k; ++i)
      if (m >> i & 1u) buf[r++] = tuple[i];
    std::sort(buf.begin(), buf.begin() + r);
    out[m] = hp.label(std::span<const Vertex>(buf.data(), r));
  }
  return out;
}

namespace detail {
// Cell code of an increasing k-subset read in increasing order.
inline std::uint64_t sorted_cell_code(const Hyperpartition& hp, const CellSpace& space, std::span<const Vertex> sorted) {
  const unsigned k = space.k();
  std::uint64_t code = 0;
  std::array<Vertex, 16> buf{};
  for (Mask m = 1; m <= space.top(); ++m) {
    unsigned r = 0;
    for (unsigned i = 0; i < k; ++i)
      if (m >> i & 1u) buf[r++] = sorted[i];
    code += std::uint64_t{hp.label(std::span<const Vertex>(buf.data(), r)) - 1u} * space.place(m);
  }
  return code;
}

inline void require_same_shape(const Hyperpartition& hp, const SymmetricCellSystem& c) {
  require(c.k() == hp.arity(), "shape mismatch: structure k=" + std::to_string(c.k()) +
                                   " vs hyperpartition k=" + std::to_string(hp.arity()));
  require(c.l() == hp.classes(), "shape mismatch: structure l=" + std::to_string(c.l()) +
                                     " vs hyperpartition l=" + std::to_string(hp.classes()));
}
}  // namespace detail

// H(HP, C, [n]): the union of the HP-cells whose coordinates lie in C.
inline Hypergraph cells_union(const Hyperpartition& hp, const CombinatorialStructure& c) {
  detail::require_same_shape(hp, c);
  std::vector<std::uint64_t> ranks;
  std::uint64_t q = 0;
  for_each_subset(hp.order(), hp.arity(), [&](std::span<const Vertex> s) {
    if (c.contains(detail::sorted_cell_code(hp, c.space(), s))) ranks.push_back(q);
    ++q;
  });
  return Hypergraph::from_ranks(hp.arity(), hp.order(), std::move(ranks));
}

// The class P_r^j as an r-uniform hypergraph.
inline Hypergraph class_hypergraph(const Hyperpartition& hp, unsigned r, Label j) {
  std::vector<std::uint64_t> ranks;
  const auto& row = hp.labels(r);
  for (std::uint64_t q = 0; q < row.size(); ++q)
    if (row[q] == j) ranks.push_back(q);
  return Hypergraph::from_ranks(r, hp.order(), std::move(ranks));
}

// ---------------------------------------------------------------------------
// Cylinder intersections and regularity probes.

// Cylinder intersections generated by r-tuples (B_1..B_r) of (r-1)-uniform
// hypergraphs. Exhaustive: every r-tuple drawn from `pool`. Sampled: `count`
// random r-tuples whose (r-1)-sets are present with probability 1/2.
struct ExhaustiveCylinders {
  std::vector<Hypergraph> pool;
};
struct SampledCylinders {
  unsigned count = 200;
  std::uint64_t seed = 0;
};
using CylinderFamily = std::variant<ExhaustiveCylinders, SampledCylinders>;

struct CylinderProbe {
  std::uint64_t size = 0;  // |L|
  std::uint64_t hits = 0;  // |G ∩ L|
};

namespace detail {

// L from facet sets B_i given as membership over colex ranks of (r-1)-subsets.
inline std::vector<bool> cylinder_intersection(unsigned n, unsigned r, const std::vector<std::vector<bool>>& facets) {
  std::vector<bool> in(binomial(n, r), false);
  if (r == 1) {
    bool all = std::all_of(facets.begin(), facets.end(), [](const auto& b) { return b[0]; });
    std::fill(in.begin(), in.end(), all);
    return in;
  }
  auto perms = all_permutations(r);
  std::uint64_t q = 0;
  std::vector<std::uint64_t> facet_rank(r);
  std::vector<Vertex> rest(r - 1);
  for_each_subset(n, r, [&](std::span<const Vertex> s) {
    for (unsigned drop = 0; drop < r; ++drop) {
      unsigned j = 0;
      for (unsigned i = 0; i < r; ++i)
        if (i != drop) rest[j++] = s[i];
      facet_rank[drop] = colex_rank(rest);
    }
    bool member = false;
    for (const auto& p : perms) {  // facet p[i] goes to B_i
      bool ok = true;
      for (unsigned i = 0; i < r && ok; ++i) ok = facets[i][facet_rank[p[i]]];
      if (ok) {
        member = true;
        break;
      }
    }
    in[q++] = member;
  });
  return in;
}

inline std::vector<bool> as_membership(const Hypergraph& b) {
  std::vector<bool> out(binomial(b.order(), b.arity()), false);
  for (auto q : b.edge_ranks()) out[q] = true;
  return out;
}

}  // namespace detail

// |L| and |G ∩ L| for every cylinder intersection of the family.
inline std::vector<CylinderProbe> probe_cylinders(const Hypergraph& g, const CylinderFamily& family) {
  const unsigned n = g.order(), r = g.arity();
  std::vector<std::vector<std::vector<bool>>> tuples;
  if (const auto* ex = std::get_if<ExhaustiveCylinders>(&family)) {
    require(!ex->pool.empty(), "cylinder family is empty");
    if (r == 1) {
      tuples.push_back({std::vector<bool>{true}});
    } else {
      for (const auto& b : ex->pool) {
        require(b.arity() == r - 1 && b.order() == n, "cylinder pool: expected (r-1)-uniform hypergraphs on [n]");
      }
      const std::uint64_t total = checked_pow(ex->pool.size(), r);
      require(total <= (std::uint64_t{1} << 20), "cylinder pool too large for exhaustive mode");
      for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::vector<std::vector<bool>> facets;
        std::uint64_t rest = idx;
        for (unsigned i = 0; i < r; ++i, rest /= ex->pool.size())
          facets.push_back(detail::as_membership(ex->pool[rest % ex->pool.size()]));
        tuples.push_back(std::move(facets));
      }
    }
  } else {
    const auto& sm = std::get<SampledCylinders>(family);
    require(sm.count > 0, "cylinder family is empty");
    const std::uint64_t slots = binomial(n, r - 1);
    for (unsigned t = 0; t < sm.count; ++t) {
      std::vector<std::vector<bool>> facets(r, std::vector<bool>(slots));
      CounterRng rng(sm.seed, Tag::cylinder, t);
      for (auto& b : facets)
        for (std::uint64_t q = 0; q < slots; ++q) b[q] = rng() >> 63;
      tuples.push_back(std::move(facets));
    }
  }
  std::vector<CylinderProbe> probes(tuples.size());
  parallel_for(tuples.size(), [&](std::size_t t) {
    auto in = detail::cylinder_intersection(n, r, tuples[t]);
    CylinderProbe p;
    for (std::uint64_t q = 0; q < in.size(); ++q)
      if (in[q]) {
        ++p.size;
        if (g.has_edge_rank(q)) ++p.hits;
      }
    probes[t] = p;
  });
  return probes;
}

namespace detail {
inline Rational probe_deviation(const CylinderProbe& p, std::uint64_t edges, std::uint64_t total) {
  Rational global = make_rational(BigInt(edges), BigInt(total));
  Rational local = make_rational(BigInt(p.hits), BigInt(p.size));
  return abs(global - local);
}
}  // namespace detail

// max over generated L with |L| >= eps * C(n,r) of | |G|/C(n,r) - |G∩L|/|L| |.
// Only a lower bound on the true deficit: the family is a finite sample of all
// cylinder intersections. Zero when no generated L is large enough.
inline Rational regularity_deficit(const Hypergraph& g, const CylinderFamily& family, const Rational& eps) {
  const std::uint64_t total = binomial(g.order(), g.arity());
  Rational worst = 0;
  for (const auto& p : probe_cylinders(g, family)) {
    if (p.size == 0 || Rational(BigInt(p.size)) < eps * Rational(BigInt(total))) continue;
    worst = std::max(worst, detail::probe_deviation(p, g.size(), total));
  }
  return worst;
}

// Smallest delta for which G passes the delta-regularity test on the family
// (deviation <= delta on every L with |L| >= delta*C(n,r)), as an infimum:
// max over L of min(deviation(L), |L|/C(n,r)).
inline Rational regularity_level(const Hypergraph& g, const CylinderFamily& family) {
  const std::uint64_t total = binomial(g.order(), g.arity());
  Rational worst = 0;
  for (const auto& p : probe_cylinders(g, family)) {
    if (p.size == 0) continue;
    Rational level = std::min(detail::probe_deviation(p, g.size(), total), Rational(BigInt(p.size), BigInt(total)));
    worst = std::max(worst, level);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// (l,k)-maps and t(F, C).

// An (l,k)-map on V = {0..v-1}: a label for every subset mask of V with
// 1 <= |S| <= k. Entry 0 and masks of other sizes hold 0.
using LabelMap = std::vector<Label>;

namespace detail {
inline std::vector<Mask> edge_masks(const Hypergraph& f) {
  std::vector<Mask> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    Mask m = 0;
    for (auto v : f.edge(i)) m |= Mask{1} << v;
    out.push_back(m);
  }
  return out;
}

// Mask over V of the image of A ⊆ [k] under the increasing bijection [k] -> E.
inline Mask lift_mask(Mask edge, Mask a) {
  Mask out = 0;
  unsigned i = 0;
  for (unsigned v = 0; v < 32; ++v)
    if (edge >> v & 1u) {
      if (a >> i & 1u) out |= Mask{1} << v;
      ++i;
    }
  return out;
}

inline void require_structure_arity(const Hypergraph& f, const SymmetricCellSystem& c) {
  require(f.arity() == c.k(), "arity mismatch: F is " + std::to_string(f.arity()) + "-uniform, structure has k=" +
                                  std::to_string(c.k()));
  require(f.order() <= 24, "F: at most 24 vertices supported");
}
}  // namespace detail

// g is a homomorphism of F into C iff for every edge E the restriction of g,
// read through the increasing bijection [k] -> E, is a cell of C.
inline bool is_structure_homomorphism(const Hypergraph& f, const SymmetricCellSystem& c, const LabelMap& g) {
  const auto& space = c.space();
  for (Mask e : detail::edge_masks(f)) {
    std::uint64_t code = 0;
    for (Mask a = 1; a <= space.top(); ++a) code += std::uint64_t{g[detail::lift_mask(e, a)] - 1u} * space.place(a);
    if (!c.contains(code)) return false;
  }
  return true;
}

namespace detail {

using Count = unsigned __int128;

// Variables: the simplices of F (nonempty subsets of edges), by vertex mask.
inline std::vector<Mask> simplices(const Hypergraph& f) {
  std::vector<Mask> out;
  for (Mask e : edge_masks(f))
    for (Mask a = e; a; a = (a - 1) & e) out.push_back(a);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline void require_count_fits(unsigned l, std::size_t variables) {
  double bits = static_cast<double>(variables) * std::log2(static_cast<double>(std::max(l, 2u)));
  if (bits >= 126.0) throw CapExceeded("l^|simplices(F)| exceeds 2^126");
}

struct Factor {
  std::vector<unsigned> scope;  // increasing variable ids
  std::vector<Count> table;     // index = sum_i value(scope[i]) * l^i
};

}  // namespace detail

// Number of homomorphisms of F into C among the l^|Σ(F)| labellings of the
// simplices of F, by variable elimination (sum-product) over the edge
// constraints. Tables are capped at 2^24 entries.
inline detail::Count structure_hom_count(const Hypergraph& f, const SymmetricCellSystem& c) {
  using detail::Count;
  using detail::Factor;
  detail::require_structure_arity(f, c);
  const auto& space = c.space();
  const unsigned l = c.l();
  const auto vars = detail::simplices(f);
  detail::require_count_fits(l, vars.size());
  auto var_of = [&](Mask m) {
    return static_cast<unsigned>(std::lower_bound(vars.begin(), vars.end(), m) - vars.begin());
  };

  std::vector<Factor> factors;
  for (Mask e : detail::edge_masks(f)) {
    // scope position of each A ⊆ [k]
    std::vector<std::pair<unsigned, Mask>> order;
    for (Mask a = 1; a <= space.top(); ++a) order.push_back({var_of(detail::lift_mask(e, a)), a});
    std::sort(order.begin(), order.end());
    Factor fac;
    std::vector<std::uint64_t> stride(space.top() + 1);
    std::uint64_t s = 1;
    for (auto& [var, a] : order) {
      fac.scope.push_back(var);
      stride[a] = s;
      s *= l;
    }
    fac.table.assign(s, 0);
    for (std::uint64_t code = 0; code < space.size(); ++code) {
      if (!c.contains(code)) continue;
      std::uint64_t idx = 0;
      for (Mask a = 1; a <= space.top(); ++a) idx += std::uint64_t{space.label(code, a) - 1u} * stride[a];
      fac.table[idx] = 1;
    }
    factors.push_back(std::move(fac));
  }

  std::vector<bool> alive(vars.size(), true);
  constexpr std::uint64_t kMaxTable = std::uint64_t{1} << 24;
  for (std::size_t step = 0; step < vars.size(); ++step) {
    // Greedy: the variable whose bucket has the smallest joint scope.
    unsigned best = 0;
    std::size_t best_width = SIZE_MAX;
    for (unsigned v = 0; v < vars.size(); ++v) {
      if (!alive[v]) continue;
      std::vector<unsigned> joint;
      for (const auto& fac : factors)
        if (std::binary_search(fac.scope.begin(), fac.scope.end(), v))
          joint.insert(joint.end(), fac.scope.begin(), fac.scope.end());
      std::sort(joint.begin(), joint.end());
      joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
      if (joint.size() < best_width) {
        best_width = joint.size();
        best = v;
      }
    }
    alive[best] = false;

    std::vector<Factor> bucket, rest;
    for (auto& fac : factors)
      (std::binary_search(fac.scope.begin(), fac.scope.end(), best) ? bucket : rest).push_back(std::move(fac));
    std::vector<unsigned> joint;
    for (const auto& fac : bucket) joint.insert(joint.end(), fac.scope.begin(), fac.scope.end());
    std::sort(joint.begin(), joint.end());
    joint.erase(std::unique(joint.begin(), joint.end()), joint.end());
    if (checked_pow(l, static_cast<unsigned>(joint.size())) > kMaxTable)
      throw CapExceeded("elimination table l^" + std::to_string(joint.size()) + " too large");

    Factor out;
    for (auto v : joint)
      if (v != best) out.scope.push_back(v);
    out.table.assign(checked_pow(l, static_cast<unsigned>(out.scope.size())), 0);
    // strides of each joint position inside every bucket factor and the output
    const std::size_t width = joint.size();
    std::vector<std::vector<std::uint64_t>> stride(bucket.size(), std::vector<std::uint64_t>(width, 0));
    std::vector<std::uint64_t> out_stride(width, 0);
    for (std::size_t b = 0; b < bucket.size(); ++b) {
      std::uint64_t s = 1;
      for (auto v : bucket[b].scope) {
        stride[b][std::lower_bound(joint.begin(), joint.end(), v) - joint.begin()] = s;
        s *= l;
      }
    }
    {
      std::uint64_t s = 1;
      for (auto v : out.scope) {
        out_stride[std::lower_bound(joint.begin(), joint.end(), v) - joint.begin()] = s;
        s *= l;
      }
    }
    std::vector<unsigned> digit(width, 0);
    std::vector<std::uint64_t> idx(bucket.size(), 0);
    std::uint64_t out_idx = 0;
    while (true) {
      Count prod = 1;
      for (std::size_t b = 0; b < bucket.size() && prod; ++b) prod *= bucket[b].table[idx[b]];
      out.table[out_idx] += prod;
      std::size_t p = 0;
      while (p < width) {
        if (++digit[p] < l) {
          for (std::size_t b = 0; b < bucket.size(); ++b) idx[b] += stride[b][p];
          out_idx += out_stride[p];
          break;
        }
        digit[p] = 0;
        for (std::size_t b = 0; b < bucket.size(); ++b) idx[b] -= stride[b][p] * (l - 1);
        out_idx -= out_stride[p] * (l - 1);
        ++p;
      }
      if (p == width) break;
    }
    rest.push_back(std::move(out));
    factors = std::move(rest);
  }
  Count total = 1;
  for (const auto& fac : factors) total *= fac.table[0];
  return total;
}

inline BigInt to_bigint(detail::Count x) {
  BigInt out = static_cast<std::uint64_t>(x >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(x);
  return out;
}

// t(F, C): probability that a uniform (l,k)-map on V(F) is a homomorphism.
// Simplices outside Σ(F) are unconstrained and cancel.
inline Rational structure_density(const Hypergraph& f, const CombinatorialStructure& c) {
  auto count = structure_hom_count(f, c);
  auto vars = detail::simplices(f).size();
  return Rational(to_bigint(count), ipow(BigInt(c.l()), static_cast<unsigned>(vars)));
}

inline constexpr std::uint64_t kMaxStructureEnumeration = 10'000'000;

// Same value by plain enumeration of all labellings of Σ(F); capped at 10^7.
inline Rational structure_density_enumerate(const Hypergraph& f, const CombinatorialStructure& c) {
  detail::require_structure_arity(f, c);
  const auto vars = detail::simplices(f);
  const unsigned l = c.l();
  std::uint64_t total = checked_pow(l, static_cast<unsigned>(vars.size()));
  if (total > kMaxStructureEnumeration) throw CapExceeded("l^|simplices(F)| above 10^7");
  LabelMap g(std::size_t{1} << f.order(), 0);
  std::vector<unsigned> digit(vars.size(), 0);
  for (auto m : vars) g[m] = 1;
  std::uint64_t good = 0;
  for (std::uint64_t i = 0; i < total; ++i) {
    if (is_structure_homomorphism(f, c, g)) ++good;
    for (std::size_t p = 0; p < vars.size(); ++p) {
      if (++digit[p] < l) {
        g[vars[p]] = static_cast<Label>(digit[p] + 1);
        break;
      }
      digit[p] = 0;
      g[vars[p]] = 1;
    }
  }
  return Rational(BigInt(good), BigInt(total));
}

// A distribution P over (l,k)-maps on V = {0..v-1}: uniform, or a finite
// support with integer weights (probability = weight / total).
struct LKDistribution {
  unsigned v = 0, k = 0, l = 0;
  bool uniform = false;
  std::vector<std::pair<LabelMap, std::uint64_t>> support;
  std::uint64_t total = 0;

  static LKDistribution make_uniform(unsigned v, unsigned k, unsigned l) { return {v, k, l, true, {}, 0}; }
};

// t(F, C, P). Exact for uniform P; the weighted fraction of homomorphisms otherwise.
inline Rational structure_density(const Hypergraph& f, const CombinatorialStructure& c, const LKDistribution& p) {
  if (p.uniform) return structure_density(f, c);
  detail::require_structure_arity(f, c);
  require(p.k == c.k() && p.l == c.l(), "distribution shape does not match the structure");
  require(f.order() <= p.v, "F has more vertices than the distribution's V");
  require(p.total > 0, "distribution has no mass");
  std::uint64_t good = 0;
  for (const auto& [g, w] : p.support)
    if (is_structure_homomorphism(f, c, g)) good += w;
  return Rational(BigInt(good), BigInt(p.total));
}

namespace detail {
inline LabelMap induced_label_map(const Hyperpartition& hp, std::span<const Vertex> g) {
  const unsigned v = static_cast<unsigned>(g.size());
  LabelMap out(std::size_t{1} << v, 0);
  std::array<Vertex, 16> buf{};
  for (Mask m = 1; m < out.size(); ++m) {
    unsigned r = popcount(m);
    if (r > hp.arity()) continue;
    unsigned j = 0;
    for (unsigned i = 0; i < v; ++i)
      if (m >> i & 1u) buf[j++] = g[i];
    std::sort(buf.begin(), buf.begin() + r);
    out[m] = hp.label(std::span<const Vertex>(buf.data(), r));
  }
  return out;
}

inline LKDistribution collect(unsigned v, const Hyperpartition& hp, std::map<LabelMap, std::uint64_t>&& counts,
                              std::uint64_t total) {
  LKDistribution d{v, hp.arity(), hp.classes(), false, {}, total};
  for (auto& [g, w] : counts) d.support.emplace_back(g, w);
  return d;
}
}  // namespace detail

// D(V, HP) exactly: every injective g: V -> [n] with equal weight.
inline LKDistribution exhaustive_DVH(unsigned v, const Hyperpartition& hp) {
  require(v <= hp.order(), "V_size exceeds n");
  require(v <= 16, "V_size above 16");
  if (falling_factorial(hp.order(), v) > 50'000'000) throw CapExceeded("(n)_v injective maps above 5*10^7");
  std::map<LabelMap, std::uint64_t> counts;
  std::uint64_t total = 0;
  std::vector<Vertex> g(v);
  std::vector<bool> used(hp.order(), false);
  auto rec = [&](auto&& self, unsigned depth) -> void {
    if (depth == v) {
      ++counts[detail::induced_label_map(hp, g)];
      ++total;
      return;
    }
    for (Vertex x = 0; x < hp.order(); ++x) {
      if (used[x]) continue;
      used[x] = true;
      g[depth] = x;
      self(self, depth + 1);
      used[x] = false;
    }
  };
  rec(rec, 0);
  return detail::collect(v, hp, std::move(counts), total);
}

// Empirical D(V, HP) from `samples` uniform injective maps; sample i comes
// from the counter stream (seed, dvh, i).
inline LKDistribution empirical_DVH(unsigned v, const Hyperpartition& hp, std::uint64_t samples, std::uint64_t seed) {
  require(v <= hp.order(), "V_size exceeds n");
  require(v <= 16, "V_size above 16");
  require(samples > 0, "samples must be positive");
  std::vector<LabelMap> maps(samples);
  parallel_for(samples, [&](std::size_t i) {
    CounterRng rng(seed, Tag::dvh, i);
    std::vector<Vertex> g;
    g.reserve(v);
    while (g.size() < v) {  // rejection keeps the draw uniform over injective maps
      auto x = static_cast<Vertex>(rng.below(hp.order()));
      if (std::find(g.begin(), g.end(), x) == g.end()) g.push_back(x);
    }
    maps[i] = detail::induced_label_map(hp, g);
  });
  std::map<LabelMap, std::uint64_t> counts;
  for (auto& m : maps) ++counts[std::move(m)];
  return detail::collect(v, hp, std::move(counts), samples);
}

}  // namespace hgl
