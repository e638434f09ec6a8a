#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "hgl/cells.hpp"
#include "hgl/error.hpp"
#include "hgl/hypergraph.hpp"
#include "hgl/hypergraphon.hpp"
#include "hgl/hyperpartition.hpp"
#include "hgl/parallel.hpp"
#include "hgl/random.hpp"
#include "hgl/rational.hpp"

namespace hgl {

enum class DistanceKind { exact, lower_bound, upper_bound, estimate };

inline const char* to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::exact: return "exact";
    case DistanceKind::lower_bound: return "lower_bound";
    case DistanceKind::upper_bound: return "upper_bound";
    case DistanceKind::estimate: return "estimate";
  }
  return "?";
}

struct DistanceReport {
  DistanceKind kind = DistanceKind::exact;
  std::optional<Rational> exact;  // set when the value is rational
  double value = 0;
  double stderr_ = 0;  // Monte Carlo only
  std::optional<Hypergraph> witness_graph;
  std::vector<std::vector<unsigned>> witness_permutation;  // per arity 1..k, 0-based levels
  std::optional<std::uint64_t> seed;
  std::string budget;

  static DistanceReport rational(DistanceKind kind, Rational v) {
    DistanceReport r;
    r.kind = kind;
    r.value = to_double(v);
    r.exact = std::move(v);
    return r;
  }
};

namespace detail {
inline void require_same_arity(unsigned a, unsigned b) {
  require(a == b, "arity mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

inline std::pair<StepHypergraphon, StepHypergraphon> common_refinement(const StepHypergraphon& u,
                                                                       const StepHypergraphon& w) {
  require_same_arity(u.k(), w.k());
  unsigned big = std::lcm(u.l(), w.l());
  require(big <= 255, "common refinement needs more than 255 levels");
  return {u.l() == big ? u : refine_grid(u, big), w.l() == big ? w : refine_grid(w, big)};
}

inline std::uint64_t symmetric_difference(const CellSet& a, const CellSet& b) {
  std::uint64_t common = 0;
  auto i = a.codes().begin(), j = b.codes().begin();
  while (i != a.codes().end() && j != b.codes().end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      ++common;
      ++i;
      ++j;
    }
  }
  return a.size() + b.size() - 2 * common;
}
}  // namespace detail

// d1 exactly: box count of the symmetric difference on the common l-grid.
inline DistanceReport d1_exact(const StepHypergraphon& u, const StepHypergraphon& w) {
  auto [a, b] = detail::common_refinement(u, w);
  auto diff = detail::symmetric_difference(a.cells(), b.cells());
  return DistanceReport::rational(DistanceKind::exact, make_rational(BigInt(diff), BigInt(a.space().size())));
}

// d1 by uniform points; point i from the stream (seed, distance_mc, i).
template <class U, class W>
DistanceReport d1_montecarlo(const U& u, const W& w, std::uint64_t samples, std::uint64_t seed) {
  const unsigned k = detail::hypergraphon_arity(u);
  detail::require_same_arity(k, detail::hypergraphon_arity(w));
  require(samples > 0, "samples must be positive");
  auto hits = parallel_sum<std::uint64_t>(samples, [&](std::size_t i) -> std::uint64_t {
    CounterRng rng(seed, Tag::distance_mc, i);
    Point p(k);
    for (Mask m = 1; m < (Mask{1} << k); ++m) p[m] = Unit{rng()};
    return contains(u, p) != contains(w, p) ? 1 : 0;
  });
  DistanceReport r;
  r.kind = DistanceKind::estimate;
  r.value = static_cast<double>(hits) / static_cast<double>(samples);
  r.stderr_ = std::sqrt(r.value * (1 - r.value) / static_cast<double>(samples));
  r.seed = seed;
  r.budget = "samples=" + std::to_string(samples);
  return r;
}

// |E(H) Δ E(T)| / C(n,k).
inline Rational hamming_density(const Hypergraph& h, const Hypergraph& t) {
  require(h.order() == t.order() && h.arity() == t.arity(),
          "shape mismatch: (n,k)=(" + std::to_string(h.order()) + "," + std::to_string(h.arity()) + ") vs (" +
              std::to_string(t.order()) + "," + std::to_string(t.arity()) + ")");
  std::vector<std::uint64_t> diff;
  std::set_symmetric_difference(h.edge_ranks().begin(), h.edge_ranks().end(), t.edge_ranks().begin(),
                                t.edge_ranks().end(), std::back_inserter(diff));
  return make_rational(BigInt(diff.size()), BigInt(binomial(h.order(), h.arity())));
}

// max over the family of |t(F,U) - t(F,W)| / |E(F)|: a lower bound for δ_w.
inline DistanceReport delta_w_lower(const StepHypergraphon& u, const StepHypergraphon& w,
                                    const std::vector<Hypergraph>& family) {
  detail::require_same_arity(u.k(), w.k());
  require(!family.empty(), "family: must be nonempty");
  for (const auto& f : family) {
    require(f.size() > 0, "family: edgeless F is not allowed");
    detail::require_same_arity(f.arity(), u.k());
  }
  std::vector<Rational> gap(family.size());
  parallel_for(family.size(), [&](std::size_t i) {
    gap[i] = abs(density_exact(family[i], u) - density_exact(family[i], w)) /
             Rational(static_cast<unsigned long long>(family[i].size()));
  });
  auto best = std::max_element(gap.begin(), gap.end()) - gap.begin();  // first maximum
  auto r = DistanceReport::rational(DistanceKind::lower_bound, gap[best]);
  r.witness_graph = family[best];
  r.budget = "family=" + std::to_string(family.size());
  return r;
}

// Test graphs F with |V(F)| <= max_size: every isomorphism type up to 5
// vertices, seeded random ones above.
inline std::vector<Hypergraph> delta_family(unsigned k, unsigned max_size, std::uint64_t seed,
                                            unsigned random_per_size = 20) {
  std::vector<Hypergraph> out;
  for (unsigned v = 1; v <= max_size; ++v) {
    if (v <= 5) {
      auto all = canonical_hypergraphs(k, v);
      out.insert(out.end(), all.begin(), all.end());
    } else {
      for (unsigned i = 0; i < random_per_size; ++i) {
        CounterRng rng(seed, Tag::family, std::uint64_t{v} << 32 | i);
        out.push_back(random_hypergraph(k, v, rng));
      }
    }
  }
  return out;
}

// δ(H1,H2) on the grid {j/max_size}: the smallest grid ε with
// |t(F,H1) - t(F,H2)| <= ε for every family member with |V(F)| * ε <= 1.
// The witness is the F with the largest gap that rules out the next lower grid value.
inline DistanceReport delta_metric_estimate(const Hypergraph& h1, const Hypergraph& h2, unsigned max_size,
                                            std::uint64_t seed = 0) {
  detail::require_same_arity(h1.arity(), h2.arity());
  require(max_size >= h1.arity(), "max_size must be at least k");
  auto family = delta_family(h1.arity(), max_size, seed);
  std::vector<Rational> gap(family.size());
  parallel_for(family.size(), [&](std::size_t i) {
    gap[i] = abs(hom_density(family[i], h1) - hom_density(family[i], h2));
  });
  auto violators = [&](unsigned j) {
    // F with |V(F)| * j / max_size <= 1 and gap > j / max_size
    std::optional<std::size_t> worst;
    Rational eps = make_rational(BigInt(j), BigInt(max_size));
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (j > 0 && std::uint64_t{family[i].order()} * j > max_size) continue;
      if (gap[i] > eps && (!worst || gap[i] > gap[*worst])) worst = i;
    }
    return worst;
  };
  unsigned j = 0;
  while (j < max_size && violators(j)) ++j;
  auto r = DistanceReport::rational(DistanceKind::estimate, make_rational(BigInt(j), BigInt(max_size)));
  if (j > 0) r.witness_graph = family[*violators(j - 1)];
  r.budget = "max_size=" + std::to_string(max_size) + " family=" + std::to_string(family.size());
  r.seed = seed;
  return r;
}

namespace detail {

// |U Δ σW| where σ relabels levels per arity (sigma[r-1][old] = new, 0-based).
inline std::uint64_t relabeled_difference(const StepHypergraphon& u, const StepHypergraphon& w,
                                          const std::vector<std::vector<unsigned>>& sigma) {
  const auto& space = w.space();
  std::uint64_t common = 0;
  for (auto code : w.cells().codes()) {
    std::uint64_t moved = 0;
    for (Mask a = 1; a <= space.top(); ++a)
      moved += std::uint64_t{sigma[popcount(a) - 1][space.label(code, a) - 1u]} * space.place(a);
    if (u.contains(moved)) ++common;
  }
  return u.cells().size() + w.cells().size() - 2 * common;
}

}  // namespace detail

// min of d1(U, σW) over searched per-arity level permutations σ; an upper
// bound for δ1. Exhaustive when (L!)^k <= budget, otherwise hill climbing
// (adjacent transpositions, first improvement) from the identity and seeded
// random starts until the budget of evaluations is spent.
inline DistanceReport delta1_upper(const StepHypergraphon& u0, const StepHypergraphon& w0, std::uint64_t budget,
                                   std::uint64_t seed = 0) {
  auto [u, w] = detail::common_refinement(u0, w0);
  const unsigned k = u.k(), L = u.l();
  std::vector<unsigned> identity(L);
  std::iota(identity.begin(), identity.end(), 0u);
  std::vector<std::vector<unsigned>> best_sigma(k, identity);
  std::uint64_t best = detail::relabeled_difference(u, w, best_sigma);
  std::uint64_t spent = 1;

  std::uint64_t per_arity = 1;
  for (unsigned i = 2; i <= L && per_arity <= budget; ++i) per_arity *= i;
  bool exhaustive = per_arity <= budget && checked_pow(per_arity, k) <= budget;
  if (exhaustive) {
    // odometer over k permutations in lexicographic order
    std::vector<std::vector<unsigned>> sigma(k, identity);
    while (best > 0) {
      unsigned r = 0;
      while (r < k && !std::next_permutation(sigma[r].begin(), sigma[r].end())) ++r;
      if (r == k) break;
      auto d = detail::relabeled_difference(u, w, sigma);
      ++spent;
      if (d < best) {
        best = d;
        best_sigma = sigma;
      }
    }
  } else {
    for (std::uint64_t start = 0; spent < budget && best > 0; ++start) {
      std::vector<std::vector<unsigned>> sigma(k, identity);
      if (start > 0) {
        CounterRng rng(seed, Tag::search, start);
        for (auto& s : sigma) std::shuffle(s.begin(), s.end(), rng);
      }
      auto cur = detail::relabeled_difference(u, w, sigma);
      ++spent;
      bool improved = true;
      while (improved && spent < budget) {
        improved = false;
        for (unsigned r = 0; r < k && !improved; ++r)
          for (unsigned a = 0; a < L && !improved; ++a)
            for (unsigned b = a + 1; b < L && !improved && spent < budget; ++b) {
              std::swap(sigma[r][a], sigma[r][b]);
              auto d = detail::relabeled_difference(u, w, sigma);
              ++spent;
              if (d < cur) {
                cur = d;
                improved = true;
              } else {
                std::swap(sigma[r][a], sigma[r][b]);
              }
            }
      }
      if (cur < best) {
        best = cur;
        best_sigma = sigma;
      }
    }
  }
  auto r = DistanceReport::rational(DistanceKind::upper_bound,
                                    make_rational(BigInt(best), BigInt(u.space().size())));
  r.witness_permutation = best_sigma;
  r.seed = seed;
  r.budget = (exhaustive ? "exhaustive evaluations=" : "hill-climb evaluations=") + std::to_string(spent);
  return r;
}

struct Closeness {
  Rational eps;
  Rational delta;
  Rational equitability;
  Rational regularity;
  std::uint64_t seed = 0;
  unsigned cylinder_samples = 0;
};

inline constexpr unsigned kDefaultCylinderSamples = 100;

// eps = hamming_density(H, H(HP,C)); delta = max(equitability deficit,
// regularity level of every class P_r^j over sampled cylinders).
inline Closeness closeness(const Hypergraph& h, const CombinatorialStructure& c, const Hyperpartition& hp,
                           unsigned cylinder_samples = kDefaultCylinderSamples, std::uint64_t seed = 0) {
  detail::require_same_shape(hp, c);
  require(h.order() == hp.order() && h.arity() == hp.arity(), "shape mismatch: H vs hyperpartition");
  Closeness out;
  out.seed = seed;
  out.cylinder_samples = cylinder_samples;
  out.eps = hamming_density(h, cells_union(hp, c));
  out.equitability = equitability_deficit(hp);
  out.regularity = 0;
  for (unsigned r = 1; r <= hp.arity(); ++r)
    for (Label j = 1; j <= hp.classes(); ++j) {
      SampledCylinders family{cylinder_samples, derive_seed(seed, Tag::cylinder, r * 256 + j)};
      out.regularity = std::max(out.regularity, regularity_level(class_hypergraph(hp, r, j), family));
    }
  out.delta = std::max(out.equitability, out.regularity);
  return out;
}

}  // namespace hgl
