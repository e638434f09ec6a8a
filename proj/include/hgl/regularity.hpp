#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "hgl/cells.hpp"
#include "hgl/error.hpp"
#include "hgl/hypergraph.hpp"
#include "hgl/hyperpartition.hpp"
#include "hgl/metrics.hpp"
#include "hgl/random.hpp"
#include "hgl/rational.hpp"

namespace hgl {

struct TraceRow {
  unsigned iteration = 0;
  Rational eps;
  Rational equitability;
  std::uint64_t accepted = 0;
};

struct DecompositionReport {
  Hyperpartition hp;
  CombinatorialStructure c;
  Rational eps;
  Rational delta;
  Rational equitability;
  std::uint64_t seed = 0;
  std::vector<TraceRow> trace;
};

struct RefineOptions {
  unsigned l = 2;
  unsigned iterations = 20;  // full sweeps over all r-subsets
  unsigned cylinder_samples = kDefaultCylinderSamples;
  std::uint64_t seed = 0;
  Rational lambda = make_rational(1, 10);
};

namespace detail {

// fn(sup) for every k-subset of [n] containing the increasing set s.
template <class Fn>
void for_each_superset(unsigned n, unsigned k, std::span<const Vertex> s, Fn&& fn) {
  const unsigned r = static_cast<unsigned>(s.size());
  std::vector<Vertex> others;
  for (Vertex v = 0, i = 0; v < n; ++v) {
    if (i < r && s[i] == v) {
      ++i;
      continue;
    }
    others.push_back(v);
  }
  std::vector<Vertex> sup(k);
  for_each_subset(static_cast<unsigned>(others.size()), k - r, [&](std::span<const Vertex> pick) {
    std::size_t a = 0, b = 0, o = 0;
    while (a < r || b < pick.size()) {
      if (b == pick.size() || (a < r && s[a] < others[pick[b]])) sup[o++] = s[a++];
      else sup[o++] = others[pick[b++]];
    }
    fn(std::span<const Vertex>(sup));
  });
}

// Majority structure for a fixed hyperpartition, maintained incrementally:
// per S_k-orbit of cells, how many k-sets fall in it and how many are edges.
// An orbit belongs to C iff edges are a strict majority (ties excluded),
// which minimizes |H Δ H(HP,C)| for this HP.
class MajorityState {
 public:
  MajorityState(const Hypergraph& h, const Hyperpartition& hp) : h_(h), hp_(hp), space_(hp.arity(), hp.classes()) {
    require(h.order() == hp.order() && h.arity() == hp.arity(), "shape mismatch: H vs hyperpartition");
    orbit_.resize(binomial(h.order(), h.arity()));
    std::uint64_t q = 0;
    for_each_subset(h.order(), h.arity(), [&](std::span<const Vertex> s) {
      orbit_[q] = space_.orbit_representative(sorted_cell_code(hp_, space_, s));
      add(orbit_[q], h_.has_edge_rank(q), +1);
      ++q;
    });
    class_size_.assign(hp.arity(), std::vector<std::int64_t>(hp.classes() + 1, 0));
    for (unsigned r = 1; r <= hp.arity(); ++r)
      for (auto x : hp.labels(r)) ++class_size_[r - 1][x];
  }

  std::uint64_t mismatches() const { return mismatches_; }
  const Hyperpartition& hp() const { return hp_; }

  Rational eps() const { return make_rational(BigInt(mismatches_), BigInt(orbit_.size())); }

  Rational equitability() const {
    Rational worst = 0;
    for (unsigned r = 1; r <= hp_.arity(); ++r) {
      auto [lo, hi] = std::minmax_element(class_size_[r - 1].begin() + 1, class_size_[r - 1].end());
      auto total = binomial(hp_.order(), r);
      if (total) worst = std::max(worst, make_rational(BigInt(*hi - *lo), BigInt(total)));
    }
    return worst;
  }

  // Relabels the r-subset `s` (increasing) with colex rank `rank`.
  void relabel(std::span<const Vertex> s, std::uint64_t rank, Label value) {
    const unsigned r = static_cast<unsigned>(s.size()), k = hp_.arity(), n = hp_.order();
    Label old = hp_.labels(r)[rank];
    if (old == value) return;
    --class_size_[r - 1][old];
    ++class_size_[r - 1][value];
    hp_.set_label(r, rank, value);
    for_each_superset(n, k, s, [&](std::span<const Vertex> sup) {
      std::uint64_t q = colex_rank(sup);
      bool edge = h_.has_edge_rank(q);
      add(orbit_[q], edge, -1);
      orbit_[q] = space_.orbit_representative(sorted_cell_code(hp_, space_, sup));
      add(orbit_[q], edge, +1);
    });
  }

  CombinatorialStructure structure() const {
    std::vector<std::uint64_t> codes;
    for (const auto& [rep, tally] : tally_)
      if (2 * tally.edges > tally.total)
        for (auto c : space_.orbit(rep)) codes.push_back(c);
    return CombinatorialStructure(space_, CellSet(space_, std::move(codes)));
  }

 private:
  struct Tally {
    std::int64_t edges = 0, total = 0;
  };
  static std::int64_t cost(const Tally& t) { return 2 * t.edges > t.total ? t.total - t.edges : t.edges; }

  void add(std::uint64_t rep, bool edge, int sign) {
    auto& t = tally_[rep];
    mismatches_ -= cost(t);
    t.total += sign;
    t.edges += edge ? sign : 0;
    mismatches_ += cost(t);
    if (t.total == 0) tally_.erase(rep);
  }

  const Hypergraph& h_;
  Hyperpartition hp_;
  CellSpace space_;
  std::vector<std::uint64_t> orbit_;
  std::unordered_map<std::uint64_t, Tally> tally_;
  std::vector<std::vector<std::int64_t>> class_size_;
  std::int64_t mismatches_ = 0;
};

inline Rational regularity_estimate(const Hyperpartition& hp, unsigned samples, std::uint64_t seed) {
  Rational worst = 0;
  for (unsigned r = 1; r <= hp.arity(); ++r)
    for (Label j = 1; j <= hp.classes(); ++j) {
      SampledCylinders family{samples, derive_seed(seed, Tag::cylinder, r * 256 + j)};
      worst = std::max(worst, regularity_level(class_hypergraph(hp, r, j), family));
    }
  return worst;
}

inline DecompositionReport finish(const MajorityState& state, const RefineOptions& opt, std::vector<TraceRow> trace) {
  auto c = state.structure();
  DecompositionReport out{state.hp(), c, state.eps(), 0, state.equitability(), opt.seed, std::move(trace)};
  out.delta = std::max(out.equitability, regularity_estimate(state.hp(), opt.cylinder_samples, opt.seed));
  return out;
}

}  // namespace detail

// Heuristic l-step decomposition of H. Labels start iid uniform; each sweep
// visits every r-subset (arity 1..k, colex order) and tries each other label,
// keeping a move when eps does not grow and eps + lambda * equitability
// strictly drops. C is always the majority structure of the current HP.
inline DecompositionReport refine(const Hypergraph& h, const RefineOptions& opt) {
  require(opt.l >= 1 && opt.l <= 255, "l: must lie in 1..255");
  require(h.order() >= h.arity(), "refine: need n >= k");
  auto hp = random_hyperpartition(h.order(), h.arity(), opt.l, derive_seed(opt.seed, Tag::search, 0));
  detail::MajorityState state(h, hp);
  auto objective = [&] { return state.eps() + opt.lambda * state.equitability(); };
  std::vector<TraceRow> trace{{0, state.eps(), state.equitability(), 0}};
  for (unsigned it = 1; it <= opt.iterations && opt.l > 1; ++it) {
    std::uint64_t accepted = 0;
    for (unsigned r = 1; r <= h.arity(); ++r) {
      std::uint64_t q = 0;
      for_each_subset(h.order(), r, [&](std::span<const Vertex> s) {
        std::vector<Vertex> subset(s.begin(), s.end());
        for (Label j = 1; j <= opt.l; ++j) {
          Label current = state.hp().labels(r)[q];
          if (j == current) continue;
          auto eps0 = state.mismatches();
          auto obj0 = objective();
          state.relabel(subset, q, j);
          if (state.mismatches() <= eps0 && objective() < obj0) {
            ++accepted;
          } else {
            state.relabel(subset, q, current);
          }
        }
        ++q;
      });
    }
    trace.push_back({it, state.eps(), state.equitability(), accepted});
    if (accepted == 0) break;
  }
  return detail::finish(state, opt, std::move(trace));
}

inline constexpr std::uint64_t kMaxExhaustiveWork = std::uint64_t{1} << 31;

// Global minimum of |H Δ H(HP,C)| over all hyperpartitions HP and structures
// C. A top-arity label only affects its own k-set, so the search enumerates
// the labels of arity < k and every union of S_k-orbits of cells, and picks
// the best top label of each k-set independently (lowest label on ties).
// First optimum in enumeration order wins; C is then the majority structure.
inline DecompositionReport refine_exhaustive(const Hypergraph& h, const RefineOptions& opt) {
  require(opt.l >= 1 && opt.l <= 255, "l: must lie in 1..255");
  const unsigned n = h.order(), k = h.arity(), l = opt.l;
  require(n >= k, "refine: need n >= k");
  CellSpace space(k, l);
  std::vector<std::uint64_t> reps;
  for (std::uint64_t c = 0; c < space.size(); ++c)
    if (space.orbit_representative(c) == c) reps.push_back(c);
  require(reps.size() <= 20, "exhaustive refine: too many cell orbits");
  std::uint64_t slots = 0;
  for (unsigned r = 1; r < k; ++r) slots += binomial(n, r);
  const std::uint64_t ksets = binomial(n, k);
  double work = std::pow(double(l), double(slots)) * std::ldexp(1.0, int(reps.size())) * double(ksets) * l;
  if (work > double(kMaxExhaustiveWork)) throw CapExceeded("exhaustive refine work above 2^31");
  const std::uint64_t lower_total = checked_pow(l, static_cast<unsigned>(slots));
  const std::uint64_t structures = std::uint64_t{1} << reps.size();

  std::vector<std::vector<Label>> labels(k);
  for (unsigned r = 1; r <= k; ++r) labels[r - 1].assign(binomial(n, r), 1);
  std::vector<std::vector<Vertex>> sets;
  for_each_subset(n, k, [&](std::span<const Vertex> s) { sets.emplace_back(s.begin(), s.end()); });

  std::uint64_t best_cost = UINT64_MAX, best_lower = 0, best_structure = 0;
  std::vector<std::uint32_t> orbit_of(ksets * l);
  for (std::uint64_t lower = 0; lower < lower_total; ++lower) {
    std::uint64_t rest = lower;
    for (unsigned r = 1; r < k; ++r)
      for (auto& x : labels[r - 1]) {
        x = static_cast<Label>(rest % l + 1);
        rest /= l;
      }
    Hyperpartition hp(n, k, l, labels);
    for (std::uint64_t q = 0; q < ksets; ++q) {
      auto base = detail::sorted_cell_code(hp, space, sets[q]);  // top label 1
      for (unsigned t = 0; t < l; ++t) {
        auto rep = space.orbit_representative(base + t * space.place(space.top()));
        orbit_of[q * l + t] = static_cast<std::uint32_t>(std::lower_bound(reps.begin(), reps.end(), rep) - reps.begin());
      }
    }
    for (std::uint64_t m = 0; m < structures; ++m) {
      std::uint64_t cost = 0;
      for (std::uint64_t q = 0; q < ksets && cost < best_cost; ++q) {
        bool edge = h.has_edge_rank(q), fits = false;
        for (unsigned t = 0; t < l && !fits; ++t) fits = ((m >> orbit_of[q * l + t]) & 1u) == edge;
        cost += fits ? 0 : 1;
      }
      if (cost < best_cost) {
        best_cost = cost;
        best_lower = lower;
        best_structure = m;
      }
    }
  }
  // rebuild the optimum
  std::uint64_t rest = best_lower;
  for (unsigned r = 1; r < k; ++r)
    for (auto& x : labels[r - 1]) {
      x = static_cast<Label>(rest % l + 1);
      rest /= l;
    }
  Hyperpartition hp(n, k, l, labels);
  for (std::uint64_t q = 0; q < ksets; ++q) {
    auto base = detail::sorted_cell_code(hp, space, sets[q]);
    bool edge = h.has_edge_rank(q);
    for (unsigned t = 0; t < l; ++t) {
      auto rep = space.orbit_representative(base + t * space.place(space.top()));
      auto idx = std::lower_bound(reps.begin(), reps.end(), rep) - reps.begin();
      if (((best_structure >> idx) & 1u) == edge) {
        labels[k - 1][q] = static_cast<Label>(t + 1);
        break;
      }
    }
  }
  detail::MajorityState state(h, Hyperpartition(n, k, l, labels));
  return detail::finish(state, opt, {{0, state.eps(), state.equitability(), lower_total * structures}});
}

// Best hyperpartition for a FIXED structure C. A k-set is matched when some
// top label puts its cell in C exactly when it is an edge, so top labels are
// chosen per k-set (lowest matching label); the lower arities are improved
// by single-label moves, accepted when the number of unmatched k-sets drops.
inline DecompositionReport fit_structure(const Hypergraph& h, const CombinatorialStructure& c, const RefineOptions& opt) {
  require(h.arity() == c.k(), "arity mismatch: H vs structure");
  require(h.order() >= h.arity(), "refine: need n >= k");
  const unsigned n = h.order(), k = h.arity(), l = c.l();
  const auto& space = c.space();
  auto hp = random_hyperpartition(n, k, l, derive_seed(opt.seed, Tag::search, 1));
  const std::uint64_t ksets = binomial(n, k);

  // lowest admissible top label (0-based), or l when none
  auto best_top = [&](std::span<const Vertex> sup, std::uint64_t q) -> unsigned {
    auto base = detail::sorted_cell_code(hp, space, sup);
    base -= std::uint64_t{hp.labels(k)[q] - 1u} * space.place(space.top());
    bool edge = h.has_edge_rank(q);
    for (unsigned t = 0; t < l; ++t)
      if (c.contains(base + t * space.place(space.top())) == edge) return t;
    return l;
  };
  std::vector<std::uint8_t> bad(ksets);
  std::uint64_t mismatches = 0;
  {
    std::uint64_t q = 0;
    for_each_subset(n, k, [&](std::span<const Vertex> s) {
      bad[q] = best_top(s, q) == l;
      mismatches += bad[q];
      ++q;
    });
  }
  auto eps_of = [&](std::uint64_t m) { return make_rational(BigInt(m), BigInt(ksets)); };
  std::vector<TraceRow> trace{{0, eps_of(mismatches), equitability_deficit(hp), 0}};
  for (unsigned it = 1; it <= opt.iterations && l > 1 && k > 1; ++it) {
    std::uint64_t accepted = 0;
    for (unsigned r = 1; r < k; ++r) {
      std::uint64_t rank = 0;
      for_each_subset(n, r, [&](std::span<const Vertex> s) {
        std::vector<Vertex> subset(s.begin(), s.end());
        for (Label j = 1; j <= l; ++j) {
          Label current = hp.labels(r)[rank];
          if (j == current) continue;
          hp.set_label(r, rank, j);
          std::int64_t change = 0;
          std::vector<std::pair<std::uint64_t, std::uint8_t>> touched;
          detail::for_each_superset(n, k, subset, [&](std::span<const Vertex> sup) {
            auto q = colex_rank(sup);
            std::uint8_t now = best_top(sup, q) == l;
            change += std::int64_t{now} - bad[q];
            touched.push_back({q, now});
          });
          if (change < 0) {
            for (auto [q, now] : touched) bad[q] = now;
            mismatches = static_cast<std::uint64_t>(static_cast<std::int64_t>(mismatches) + change);
            ++accepted;
          } else {
            hp.set_label(r, rank, current);
          }
        }
        ++rank;
      });
    }
    trace.push_back({it, eps_of(mismatches), equitability_deficit(hp), accepted});
    if (accepted == 0) break;
  }
  std::vector<std::vector<Label>> labels(k);
  for (unsigned r = 1; r <= k; ++r) labels[r - 1] = hp.labels(r);
  {
    std::uint64_t q = 0;
    for_each_subset(n, k, [&](std::span<const Vertex> s) {
      auto t = best_top(s, q);
      if (t < l) labels[k - 1][q] = static_cast<Label>(t + 1);
      ++q;
    });
  }
  Hyperpartition fitted(n, k, l, std::move(labels));
  DecompositionReport out{fitted, c, hamming_density(h, cells_union(fitted, c)), 0, equitability_deficit(fitted),
                          opt.seed, std::move(trace)};
  out.delta = std::max(out.equitability, detail::regularity_estimate(fitted, opt.cylinder_samples, opt.seed));
  return out;
}

}  // namespace hgl
