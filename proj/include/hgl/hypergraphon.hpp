#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hgl/cells.hpp"
#include "hgl/error.hpp"
#include "hgl/hypergraph.hpp"
#include "hgl/hyperpartition.hpp"
#include "hgl/parallel.hpp"
#include "hgl/random.hpp"
#include "hgl/rational.hpp"

namespace hgl {

// A point of [0,1)^{r([k])}, one fixed-point coordinate per nonempty mask.
class Point {
 public:
  Point() = default;
  explicit Point(unsigned k) : coords_(std::size_t{1} << k) {}

  static Point from_doubles(unsigned k, const std::vector<double>& by_mask) {
    require(by_mask.size() == (std::size_t{1} << k), "point: expected 2^k entries indexed by mask");
    Point p(k);
    for (Mask m = 1; m < p.coords_.size(); ++m) p.coords_[m] = Unit::from_double(by_mask[m]);
    return p;
  }

  unsigned k() const { return static_cast<unsigned>(std::countr_zero(coords_.size())); }
  Unit operator[](Mask m) const { return coords_[m]; }
  Unit& operator[](Mask m) { return coords_[m]; }

  // p'(pi(A)) = p(A)
  Point permuted(std::span<const unsigned> perm) const {
    Point out(k());
    for (Mask m = 1; m < coords_.size(); ++m) out.coords_[permute_mask(m, perm)] = coords_[m];
    return out;
  }

 private:
  std::vector<Unit> coords_;
};

// Union of l-boxes prod_A [(f(A)-1)/l, f(A)/l), one per cell f; S_k-closed.
class StepHypergraphon : public SymmetricCellSystem {
 public:
  using SymmetricCellSystem::SymmetricCellSystem;

  Rational measure() const {
    return make_rational(BigInt(cells().size()), BigInt(space().size()));
  }

  std::uint64_t cell_of(const Point& p) const {
    std::uint64_t code = 0;
    for (Mask m = 1; m <= space().top(); ++m) code += std::uint64_t{p[m].level(l())} * space().place(m);
    return code;
  }
};

enum class Builtin { example1, example2, full, empty };

inline Builtin parse_builtin(const std::string& name) {
  if (name == "example1") return Builtin::example1;
  if (name == "example2") return Builtin::example2;
  if (name == "full") return Builtin::full;
  if (name == "empty") return Builtin::empty;
  throw InputError("builtin: unknown kind '" + name + "' (expected example1|example2|full|empty)");
}

// example1: x_[k] in the lower half. example2: every (k-1)-coordinate in the
// lower half. full/empty use a single level.
inline StepHypergraphon builtin(Builtin kind, unsigned k) {
  require(k >= 1, "k: must be positive");
  switch (kind) {
    case Builtin::full:
      return StepHypergraphon(k, 1, {0});
    case Builtin::empty:
      return StepHypergraphon(k, 1, {});
    case Builtin::example1: {
      CellSpace space(k, 2);
      std::vector<std::uint64_t> codes;
      for (std::uint64_t c = 0; c < space.size(); ++c)
        if (space.label(c, space.top()) == 1) codes.push_back(c);
      return StepHypergraphon(space, CellSet(space, std::move(codes)));
    }
    case Builtin::example2: {
      require(k >= 2, "builtin example2 requires k >= 2");
      CellSpace space(k, 2);
      std::vector<std::uint64_t> codes;
      for (std::uint64_t c = 0; c < space.size(); ++c) {
        bool ok = true;
        for (Mask m = 1; m <= space.top() && ok; ++m)
          if (popcount(m) == k - 1) ok = space.label(c, m) == 1;
        if (ok) codes.push_back(c);
      }
      return StepHypergraphon(space, CellSet(space, std::move(codes)));
    }
  }
  throw InputError("builtin: invalid kind");
}

// W_C: the boxes are the cells of C.
inline StepHypergraphon step_from_structure(const CombinatorialStructure& c) {
  return StepHypergraphon(c.space(), c.cells());
}

inline CombinatorialStructure structure_from_step(const StepHypergraphon& w) {
  return CombinatorialStructure(w.space(), w.cells());
}

// Same set on the finer grid L = m*l: fine level a lies in coarse level a / m.
inline StepHypergraphon refine_grid(const StepHypergraphon& w, unsigned fine_l) {
  require(fine_l % w.l() == 0, "refine_grid: target level count must be a multiple of l");
  CellSpace fine(w.k(), fine_l);
  if (fine.size() > (std::uint64_t{1} << 26)) throw CapExceeded("refined cell space above 2^26");
  const unsigned m = fine_l / w.l();
  std::vector<std::uint64_t> codes;
  for (std::uint64_t c = 0; c < fine.size(); ++c) {
    std::uint64_t coarse = 0;
    for (Mask a = 1; a <= fine.top(); ++a) coarse += std::uint64_t{(fine.label(c, a) - 1u) / m} * w.space().place(a);
    if (w.contains(coarse)) codes.push_back(c);
  }
  return StepHypergraphon(fine, CellSet(fine, std::move(codes)));
}

// A measurable W known only through a membership predicate.
struct GeneralHypergraphon {
  unsigned k = 0;
  std::function<bool(const Point&)> member;
  std::string name;
};

inline bool contains(const StepHypergraphon& w, const Point& p) {
  require(p.k() == w.k(), "point arity does not match W");
  return w.contains(w.cell_of(p));
}
inline bool contains(const GeneralHypergraphon& w, const Point& p) {
  require(p.k() == w.k, "point arity does not match W");
  return w.member(p);
}

namespace detail {

template <class W>
unsigned hypergraphon_arity(const W& w) {
  if constexpr (std::is_same_v<W, StepHypergraphon>)
    return w.k();
  else
    return w.k;
}

}  // namespace detail

// Statistical S_k-invariance check: `points` random points, all permutations.
inline bool looks_symmetric(const GeneralHypergraphon& w, unsigned points, std::uint64_t seed) {
  auto perms = all_permutations(w.k);
  for (unsigned i = 0; i < points; ++i) {
    CounterRng rng(seed, Tag::symmetry_check, i);
    Point p(w.k);
    for (Mask m = 1; m < (Mask{1} << w.k); ++m) p[m] = Unit{rng()};
    bool base = w.member(p);
    for (const auto& perm : perms)
      if (w.member(p.permuted(perm)) != base) return false;
  }
  return true;
}

// W~(q): measure of {x_[k] : (q, x_[k]) in W}, the number of admissible
// top levels over l. q[top] is ignored.
inline Rational projected_value(const StepHypergraphon& w, const Point& q) {
  require(q.k() == w.k(), "point arity does not match W");
  std::uint64_t lower = 0;
  const auto& space = w.space();
  for (Mask m = 1; m < space.top(); ++m) lower += std::uint64_t{q[m].level(w.l())} * space.place(m);
  std::uint64_t good = 0;
  for (unsigned t = 0; t < w.l(); ++t)
    if (w.contains(lower + t * space.place(space.top()))) ++good;
  return make_rational(BigInt(good), BigInt(w.l()));
}

namespace detail {

// The k-sets whose points enter t(F,W) (edges; plus non-edges when induced)
// and the lower simplices (size < k) they depend on.
struct EuclidLayout {
  struct Constraint {
    std::vector<unsigned> lower;  // variable of lift(A) for A = 1..top-1
    bool edge = true;
    unsigned last = 0;  // largest variable used
  };
  std::vector<Mask> lower_masks;
  std::vector<Constraint> constraints;
};

inline EuclidLayout euclid_layout(const Hypergraph& f, unsigned k, bool induced) {
  EuclidLayout out;
  std::vector<std::pair<Mask, bool>> ksets;
  if (induced) {
    for_each_subset(f.order(), k, [&](std::span<const Vertex> s) {
      Mask m = 0;
      for (auto v : s) m |= Mask{1} << v;
      ksets.push_back({m, f.has_edge(std::vector<Vertex>(s.begin(), s.end()))});
    });
  } else {
    for (Mask m : edge_masks(f)) ksets.push_back({m, true});
  }
  const Mask top = (Mask{1} << k) - 1;
  for (auto [e, is_edge] : ksets)
    for (Mask a = 1; a < top; ++a) out.lower_masks.push_back(lift_mask(e, a));
  std::sort(out.lower_masks.begin(), out.lower_masks.end());
  out.lower_masks.erase(std::unique(out.lower_masks.begin(), out.lower_masks.end()), out.lower_masks.end());
  for (auto [e, is_edge] : ksets) {
    EuclidLayout::Constraint c;
    c.edge = is_edge;
    for (Mask a = 1; a < top; ++a) {
      auto var = static_cast<unsigned>(
          std::lower_bound(out.lower_masks.begin(), out.lower_masks.end(), lift_mask(e, a)) - out.lower_masks.begin());
      c.lower.push_back(var);
      c.last = std::max(c.last, var);
    }
    out.constraints.push_back(std::move(c));
  }
  return out;
}

}  // namespace detail

inline constexpr std::uint64_t kMaxLowerGrid = std::uint64_t{1} << 26;

// Exact t(F,W) (or t_ind) for a step W. The top coordinate of every k-set
// appears in exactly one factor, so it integrates out to the projected value
// W~; what remains is a finite sum over the l-grid of the lower simplices,
// enumerated depth-first with a factor closed as soon as its lower
// coordinates are all fixed.
inline Rational density_exact(const Hypergraph& f, const StepHypergraphon& w, bool induced = false) {
  require(f.arity() == w.k(), "arity mismatch: F is " + std::to_string(f.arity()) + "-uniform, W has k=" +
                                  std::to_string(w.k()));
  require(f.order() <= 24, "F: at most 24 vertices supported");
  const unsigned k = w.k(), l = w.l();
  const auto& space = w.space();
  auto layout = detail::euclid_layout(f, k, induced);
  const std::size_t nvars = layout.lower_masks.size(), ncons = layout.constraints.size();
  detail::require_count_fits(l, nvars + ncons);
  if (checked_pow(l, static_cast<unsigned>(nvars)) > kMaxLowerGrid) throw CapExceeded("lower simplex grid above 2^26");

  // closing[v]: constraints whose last variable is v; k = 1 constraints close at once.
  std::vector<std::vector<std::size_t>> closing(nvars);
  std::vector<std::size_t> immediate;
  for (std::size_t i = 0; i < ncons; ++i)
    (layout.constraints[i].lower.empty() ? immediate : closing[layout.constraints[i].last]).push_back(i);

  std::vector<unsigned> level(nvars, 0);
  auto factor = [&](std::size_t i) -> unsigned {
    const auto& c = layout.constraints[i];
    std::uint64_t lower = 0;
    for (Mask a = 1; a < space.top(); ++a) lower += std::uint64_t{level[c.lower[a - 1]]} * space.place(a);
    unsigned good = 0;
    for (unsigned t = 0; t < l; ++t)
      if (w.contains(lower + t * space.place(space.top()))) ++good;
    return c.edge ? good : l - good;
  };

  detail::Count base = 1;
  for (auto i : immediate) base *= factor(i);
  detail::Count sum = 0;
  if (base != 0) {
    auto rec = [&](auto&& self, std::size_t var, detail::Count acc) -> void {
      if (var == nvars) {
        sum += acc;
        return;
      }
      for (unsigned x = 0; x < l; ++x) {
        level[var] = x;
        detail::Count next = acc;
        for (auto i : closing[var]) {
          next *= factor(i);
          if (next == 0) break;
        }
        if (next != 0) self(self, var + 1, next);
      }
    };
    rec(rec, 0, base);
  }
  BigInt den = ipow(BigInt(l), static_cast<unsigned>(nvars + ncons));
  return make_rational(to_bigint(sum), den);
}

struct MonteCarloEstimate {
  double estimate = 0;
  double stderr_ = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo t(F,W) / t_ind(F,W): sample s draws an independent uniform for
// every simplex of r(V(F),k) from the stream (seed, monte_carlo, s) in
// increasing mask order.
template <class W>
MonteCarloEstimate density_montecarlo(const Hypergraph& f, const W& w, std::uint64_t samples, std::uint64_t seed,
                                      bool induced = false) {
  const unsigned k = f.arity();
  require(samples > 0, "samples must be positive");
  require(f.order() <= 20, "F: at most 20 vertices for Monte Carlo");
  if constexpr (std::is_same_v<W, StepHypergraphon>)
    require(k == w.k(), "arity mismatch between F and W");
  else
    require(k == w.k, "arity mismatch between F and W");
  std::vector<std::pair<Mask, bool>> ksets;
  if (induced) {
    for_each_subset(f.order(), k, [&](std::span<const Vertex> s) {
      Mask m = 0;
      for (auto v : s) m |= Mask{1} << v;
      ksets.push_back({m, f.has_edge(std::vector<Vertex>(s.begin(), s.end()))});
    });
  } else {
    for (Mask m : detail::edge_masks(f)) ksets.push_back({m, true});
  }
  std::vector<Mask> used;
  for (auto [e, is_edge] : ksets)
    for (Mask a = e; a; a = (a - 1) & e) used.push_back(a);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());

  auto hits = parallel_sum<std::uint64_t>(samples, [&](std::size_t s) -> std::uint64_t {
    CounterRng rng(seed, Tag::monte_carlo, s);
    std::vector<Unit> x(std::size_t{1} << f.order());
    for (Mask m : used) x[m] = Unit{rng()};
    Point p(k);
    for (auto [e, is_edge] : ksets) {
      for (Mask a = 1; a < (Mask{1} << k); ++a) p[a] = x[detail::lift_mask(e, a)];
      if (contains(w, p) != is_edge) return 0;
    }
    return 1;
  });
  MonteCarloEstimate out;
  out.samples = samples;
  out.seed = seed;
  out.estimate = static_cast<double>(hits) / static_cast<double>(samples);
  out.stderr_ = std::sqrt(out.estimate * (1 - out.estimate) / static_cast<double>(samples));
  return out;
}

}  // namespace hgl
