#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgl/error.hpp"
#include "hgl/hypergraph.hpp"
#include "hgl/hypergraphon.hpp"
#include "hgl/hyperpartition.hpp"
#include "hgl/metrics.hpp"
#include "hgl/parallel.hpp"
#include "hgl/random.hpp"
#include "hgl/rational.hpp"
#include "hgl/regularity.hpp"
#include "hgl/sampling.hpp"

namespace hgl {

using ordered_json = nlohmann::ordered_json;

struct Verdict {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentReport {
  std::string name;
  std::uint64_t seed = 0;
  ordered_json parameters = ordered_json::object();
  ordered_json records = ordered_json::array();  // one flat object per trial
  ordered_json summary = ordered_json::object();
  std::vector<Verdict> verdicts;

  bool passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
  }
};

inline constexpr std::uint64_t kMaxExactMaps = 100'000'000;

namespace detail {

inline double median(std::vector<double> xs) {
  if (xs.empty()) return 0;
  std::sort(xs.begin(), xs.end());
  auto m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : (xs[m - 1] + xs[m]) / 2;
}

inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) { return derive_seed(seed, Tag::trial, trial); }

struct Estimate {
  double value = 0;
  double stderr_ = 0;
  bool exact = false;
  std::optional<Rational> rational;
};

// t0(F,H): exact when (n)_v <= 10^8, else `budget` uniform injective maps.
inline Estimate injective_density(const Hypergraph& f, const Hypergraph& h, std::uint64_t budget, std::uint64_t seed) {
  const unsigned v = f.order(), n = h.order();
  require(v <= n, "F has more vertices than H");
  Estimate out;
  if (falling_factorial(n, v) <= kMaxExactMaps) {
    Rational t0 = make_rational(BigInt(hom_injective_enumerate(f, h)), BigInt(falling_factorial(n, v)));
    out.value = to_double(t0);
    out.exact = true;
    out.rational = t0;
    return out;
  }
  require(budget > 0, "t0_sample_budget must be positive");
  auto edges = f.edges();
  auto hits = parallel_sum<std::uint64_t>(budget, [&](std::size_t i) -> std::uint64_t {
    CounterRng rng(seed, Tag::injective_map, i);
    std::vector<Vertex> g;
    while (g.size() < v) {
      auto x = static_cast<Vertex>(rng.below(n));
      if (std::find(g.begin(), g.end(), x) == g.end()) g.push_back(x);
    }
    std::vector<Vertex> image(f.arity());
    for (const auto& e : edges) {
      for (std::size_t j = 0; j < e.size(); ++j) image[j] = g[e[j]];
      if (!h.has_tuple(image)) return 0;
    }
    return 1;
  });
  out.value = static_cast<double>(hits) / static_cast<double>(budget);
  out.stderr_ = std::sqrt(out.value * (1 - out.value) / static_cast<double>(budget));
  return out;
}

// t(F,H): exact when n^v <= 10^8, else `budget` uniform maps.
inline Estimate map_density(const Hypergraph& f, const Hypergraph& h, std::uint64_t budget, std::uint64_t seed) {
  Estimate out;
  if (checked_pow(h.order(), f.order()) <= kMaxExactMaps) {
    Rational t = hom_density(f, h);
    out.value = to_double(t);
    out.exact = true;
    out.rational = t;
    return out;
  }
  auto edges = f.edges();
  auto hits = parallel_sum<std::uint64_t>(budget, [&](std::size_t i) -> std::uint64_t {
    CounterRng rng(seed, Tag::injective_map, i);
    std::vector<Vertex> g(f.order());
    for (auto& x : g) x = static_cast<Vertex>(rng.below(h.order()));
    std::vector<Vertex> image(f.arity());
    for (const auto& e : edges) {
      for (std::size_t j = 0; j < e.size(); ++j) image[j] = g[e[j]];
      if (!h.has_tuple(image)) return 0;
    }
    return 1;
  });
  out.value = static_cast<double>(hits) / static_cast<double>(budget);
  out.stderr_ = std::sqrt(out.value * (1 - out.value) / static_cast<double>(budget));
  return out;
}

inline ordered_json json_number_or_fraction(const Estimate& e) {
  if (e.rational) return to_fraction(*e.rational);
  return e.value;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Concentration of t0(F, G(W,n)) around t(F,W).

struct ConcentrationParams {
  unsigned n = 2000;
  double eps = 0.08;
  unsigned trials = 100;
  std::uint64_t t0_sample_budget = 100'000;
  std::uint64_t seed = 0;
};

inline double azuma_bound(double eps, unsigned n, unsigned v) {
  return 2 * std::exp(-eps * eps * n / (2.0 * v * v));
}

inline ExperimentReport concentration_experiment(const StepHypergraphon& w, const Hypergraph& f,
                                                 const ConcentrationParams& p) {
  require(f.arity() == w.k(), "arity mismatch: F vs W");
  require(p.trials > 0, "trials must be positive");
  require(p.eps > 0, "eps must be positive");
  require(p.n >= f.order(), "n must be at least |V(F)|");
  ExperimentReport rep;
  rep.name = "concentration";
  rep.seed = p.seed;
  Rational t_exact = density_exact(f, w);
  const double target = to_double(t_exact);
  const double bound = azuma_bound(p.eps, p.n, f.order());
  rep.parameters = {{"n", p.n}, {"eps", p.eps}, {"trials", p.trials}, {"t0_sample_budget", p.t0_sample_budget},
                    {"F_vertices", f.order()}, {"F_edges", f.size()}};
  std::uint64_t exceed = 0;
  for (unsigned i = 0; i < p.trials; ++i) {
    auto s = detail::trial_seed(p.seed, i);
    auto g = sample_w(w, p.n, s).sample;
    auto t0 = detail::injective_density(f, g, p.t0_sample_budget, derive_seed(s, Tag::injective_map, 0));
    double dev = std::abs(t0.value - target);
    bool hit = dev >= p.eps;
    exceed += hit;
    rep.records.push_back({{"trial", i},
                           {"sample_seed", s},
                           {"edges", g.size()},
                           {"t0", detail::json_number_or_fraction(t0)},
                           {"t0_value", t0.value},
                           {"t0_stderr", t0.stderr_},
                           {"deviation", dev},
                           {"exceeds", hit}});
  }
  const double tail = static_cast<double>(exceed) / p.trials;
  const bool vacuous = bound >= 1;
  const double slack = vacuous ? 0 : 3 * std::sqrt(bound * (1 - bound) / p.trials);
  rep.summary = {{"t_exact", to_fraction(t_exact)}, {"tail_frequency", tail},      {"azuma_bound", bound},
                 {"allowance", bound + slack},       {"exceedances", exceed},      {"vacuous", vacuous}};
  rep.verdicts.push_back({"azuma", vacuous || tail <= bound + slack,
                          vacuous ? "bound >= 1: check is vacuous" : "tail <= bound + 3*stderr"});
  return rep;
}

// ---------------------------------------------------------------------------
// Counting: t0(F, H(HP,C)) -> t(F,C) for random HP.

struct CountingParams {
  std::vector<unsigned> n_list{40, 80, 160};
  unsigned trials = 10;
  double tolerance = 0.05;
  std::uint64_t sample_budget = 100'000;
  std::uint64_t seed = 0;
};

inline ExperimentReport counting_experiment(const CombinatorialStructure& c, const Hypergraph& f,
                                            const CountingParams& p) {
  require(f.arity() == c.k(), "arity mismatch: F vs structure");
  require(!p.n_list.empty() && p.trials > 0, "n_list and trials must be nonempty");
  for (unsigned n : p.n_list) require(n >= f.order(), "n_list: every n must be at least |V(F)|");
  ExperimentReport rep;
  rep.name = "counting";
  rep.seed = p.seed;
  Rational t_c = structure_density(f, c);
  rep.parameters = {{"n_list", p.n_list}, {"trials", p.trials}, {"tolerance", p.tolerance},
                    {"sample_budget", p.sample_budget}, {"k", c.k()}, {"l", c.l()}};
  std::vector<double> medians;
  double worst_stderr = 0;
  for (std::size_t ni = 0; ni < p.n_list.size(); ++ni) {
    unsigned n = p.n_list[ni];
    std::vector<double> devs;
    for (unsigned i = 0; i < p.trials; ++i) {
      auto s = derive_seed(detail::trial_seed(p.seed, i), Tag::trial, n);
      auto hp = random_hyperpartition(n, c.k(), c.l(), s);
      auto t = cells_union(hp, c);
      auto est = detail::injective_density(f, t, p.sample_budget, derive_seed(s, Tag::monte_carlo, 0));
      double dev = std::abs(est.value - to_double(t_c));
      devs.push_back(dev);
      worst_stderr = std::max(worst_stderr, est.stderr_);
      rep.records.push_back({{"n", n},
                             {"trial", i},
                             {"hp_seed", s},
                             {"t_hat", detail::json_number_or_fraction(est)},
                             {"t_hat_value", est.value},
                             {"stderr", est.stderr_},
                             {"deviation", dev}});
    }
    medians.push_back(detail::median(devs));
  }
  bool monotone = std::is_sorted(medians.rbegin(), medians.rend());
  rep.summary = {{"t_C", to_fraction(t_c)}, {"median_deviation", medians}, {"monotone", monotone},
                 {"max_stderr", worst_stderr}};
  rep.verdicts.push_back({"trend", medians.back() <= medians.front(), "final median deviation <= first"});
  rep.verdicts.push_back({"tolerance", medians.back() <= p.tolerance, "final median deviation <= tolerance"});
  return rep;
}

// ---------------------------------------------------------------------------
// Structure alignment by per-arity level permutations.

inline Hyperpartition relabel_levels(const Hyperpartition& hp, const std::vector<std::vector<unsigned>>& sigma) {
  std::vector<std::vector<Label>> labels(hp.arity());
  for (unsigned r = 1; r <= hp.arity(); ++r) {
    labels[r - 1] = hp.labels(r);
    for (auto& x : labels[r - 1]) x = static_cast<Label>(sigma[r - 1][x - 1] + 1);
  }
  return Hyperpartition(hp.order(), hp.arity(), hp.classes(), std::move(labels));
}

struct Alignment {
  std::vector<std::vector<unsigned>> sigma;
  Hyperpartition hp;
  Rational eps;
};

inline constexpr std::uint64_t kMaxAlignments = 40'320;

// Relabels HP's levels so that H(σHP, target) is as close to H as possible.
// All (l!)^k relabelings when that is at most 40320, else identity only.
inline Alignment align_to(const Hypergraph& h, const Hyperpartition& hp, const CombinatorialStructure& target) {
  const unsigned k = hp.arity(), l = hp.classes();
  std::vector<unsigned> identity(l);
  std::iota(identity.begin(), identity.end(), 0u);
  std::vector<std::vector<unsigned>> sigma(k, identity);
  Alignment best{sigma, hp, hamming_density(h, cells_union(hp, target))};
  std::uint64_t per = 1;
  for (unsigned i = 2; i <= l && per <= kMaxAlignments; ++i) per *= i;
  if (per > kMaxAlignments || checked_pow(per, k) > kMaxAlignments) return best;
  while (best.eps > 0) {
    unsigned r = 0;
    while (r < k && !std::next_permutation(sigma[r].begin(), sigma[r].end())) ++r;
    if (r == k) break;
    auto moved = relabel_levels(hp, sigma);
    auto e = hamming_density(h, cells_union(moved, target));
    if (e < best.eps) best = {sigma, std::move(moved), e};
  }
  return best;
}

// ---------------------------------------------------------------------------
// Inverse counting: two samples of one W decompose with a shared structure.

struct InverseParams {
  unsigned n = 60;
  unsigned trials = 20;
  double threshold = 0.2;
  double required_fraction = 0.7;
  unsigned iterations = 20;
  unsigned cylinder_samples = 20;
  std::uint64_t seed = 0;
};

// Both samples are decomposed with refine (own structure), then fitted to
// the structure of W itself; a trial passes when both fits are within the
// threshold.
inline ExperimentReport inverse_counting_experiment(const StepHypergraphon& w, const InverseParams& p) {
  require(p.trials > 0, "trials must be positive");
  ExperimentReport rep;
  rep.name = "inverse";
  rep.seed = p.seed;
  rep.parameters = {{"n", p.n}, {"trials", p.trials}, {"threshold", p.threshold},
                    {"required_fraction", p.required_fraction}, {"iterations", p.iterations}, {"l", w.l()}};
  const auto target = structure_from_step(w);
  const Rational threshold = parse_rational(std::to_string(p.threshold));
  unsigned good = 0;
  for (unsigned i = 0; i < p.trials; ++i) {
    auto s = detail::trial_seed(p.seed, i);
    ordered_json row = {{"trial", i}};
    bool ok = true;
    for (unsigned side = 1; side <= 2; ++side) {
      auto h = sample_w(w, p.n, derive_seed(s, Tag::trial, side)).sample;
      RefineOptions opt;
      opt.l = w.l();
      opt.iterations = p.iterations;
      opt.cylinder_samples = p.cylinder_samples;
      opt.seed = derive_seed(s, Tag::search, side);
      auto own = refine(h, opt);
      auto fit = fit_structure(h, target, opt);
      ok = ok && fit.eps <= threshold;
      auto tag = std::to_string(side);
      row["eps" + tag] = to_fraction(own.eps);
      row["eps" + tag + "_shared"] = to_fraction(fit.eps);
      row["delta" + tag] = to_fraction(fit.delta);
    }
    row["passed"] = ok;
    good += ok;
    rep.records.push_back(std::move(row));
  }
  double fraction = static_cast<double>(good) / p.trials;
  rep.summary = {{"passed_trials", good}, {"fraction", fraction}};
  rep.verdicts.push_back({"shared_structure", fraction >= p.required_fraction,
                          "fraction of trials with both samples within threshold of W's structure"});
  return rep;
}

// ---------------------------------------------------------------------------
// Removal explorer: greedy edge deletion until no homomorphic copy of K remains.

inline constexpr std::uint64_t kMaxRemovalHoms = 10'000'000;

inline ExperimentReport removal_experiment(const Hypergraph& h, const Hypergraph& k_graph) {
  require(h.arity() == k_graph.arity(), "arity mismatch: H vs K");
  if (checked_pow(h.order(), k_graph.order()) > kMaxExactMaps * 10) throw CapExceeded("n^|V(K)| above 10^9");
  ExperimentReport rep;
  rep.name = "removal";
  rep.parameters = {{"n", h.order()}, {"k", h.arity()}, {"K_vertices", k_graph.order()}, {"K_edges", k_graph.size()}};
  // every homomorphism as the list of H-edge indices it uses
  std::vector<std::vector<std::uint32_t>> homs;
  const auto kedges = k_graph.edges();
  const auto& ranks = h.edge_ranks();
  std::vector<Vertex> image(k_graph.order());
  std::vector<Vertex> sub(h.arity());
  auto rec = [&](auto&& self, unsigned depth) -> void {
    if (depth == k_graph.order()) {
      std::vector<std::uint32_t> used;
      for (const auto& e : kedges) {
        for (std::size_t j = 0; j < e.size(); ++j) sub[j] = image[e[j]];
        std::vector<Vertex> sorted = sub;
        std::sort(sorted.begin(), sorted.end());
        auto q = h.rank_of(sorted);
        used.push_back(static_cast<std::uint32_t>(std::lower_bound(ranks.begin(), ranks.end(), q) - ranks.begin()));
      }
      std::sort(used.begin(), used.end());
      used.erase(std::unique(used.begin(), used.end()), used.end());
      homs.push_back(std::move(used));
      if (homs.size() > kMaxRemovalHoms) throw CapExceeded("more than 10^7 homomorphisms");
      return;
    }
    for (Vertex x = 0; x < h.order(); ++x) {
      image[depth] = x;
      bool ok = true;
      for (const auto& e : kedges) {
        if (e.back() != depth) continue;  // edges are increasing: checked once complete
        for (std::size_t j = 0; j < e.size(); ++j) sub[j] = image[e[j]];
        if (!h.has_tuple(sub)) {
          ok = false;
          break;
        }
      }
      if (ok) self(self, depth + 1);
    }
  };
  if (k_graph.order() > 0) rec(rec, 0);
  const std::uint64_t total_homs = homs.size();

  std::vector<std::vector<std::uint32_t>> covering(h.size());
  for (std::uint32_t i = 0; i < homs.size(); ++i)
    for (auto e : homs[i]) covering[e].push_back(i);
  std::vector<std::uint64_t> cover(h.size());
  for (std::size_t e = 0; e < h.size(); ++e) cover[e] = covering[e].size();
  std::vector<bool> dead(homs.size(), false), removed(h.size(), false);
  std::uint64_t alive = homs.size();
  std::vector<std::uint64_t> deleted;
  while (alive > 0) {
    std::size_t best = 0;
    for (std::size_t e = 1; e < h.size(); ++e)
      if (cover[e] > cover[best]) best = e;  // ties: lowest colex rank
    removed[best] = true;
    deleted.push_back(ranks[best]);
    rep.records.push_back({{"step", deleted.size()}, {"edge_rank", ranks[best]}, {"covered", cover[best]}});
    for (auto i : covering[best]) {
      if (dead[i]) continue;
      dead[i] = true;
      --alive;
      for (auto e : homs[i]) --cover[e];
    }
  }
  std::vector<std::uint64_t> kept;
  for (std::size_t e = 0; e < h.size(); ++e)
    if (!removed[e]) kept.push_back(ranks[e]);
  Hypergraph rest = Hypergraph::from_ranks(h.arity(), h.order(), std::move(kept));
  std::uint64_t remaining = hom(k_graph, rest);
  Rational t = make_rational(BigInt(total_homs), ipow(BigInt(h.order()), k_graph.order()));
  rep.summary = {{"t_K_H", to_fraction(t)},
                 {"homomorphisms", total_homs},
                 {"removed", deleted.size()},
                 {"removed_fraction", to_fraction(make_rational(BigInt(deleted.size()),
                                                                BigInt(binomial(h.order(), h.arity()))))},
                 {"removed_edges", deleted},
                 {"remaining_homomorphisms", remaining}};
  rep.verdicts.push_back({"removal_complete", remaining == 0, "hom(K, H \\ L) = 0 re-checked"});
  return rep;
}

// ---------------------------------------------------------------------------
// Hereditary zero-preservation under hyperpartition sampling.

struct HereditaryParams {
  unsigned n = 20;
  unsigned trials = 200;
  std::uint64_t seed = 0;
};

inline ExperimentReport hereditary_experiment(const StepHypergraphon& w, const std::vector<Hypergraph>& family,
                                              const HereditaryParams& p) {
  ExperimentReport rep;
  rep.name = "hereditary";
  rep.seed = p.seed;
  rep.parameters = {{"n", p.n}, {"trials", p.trials}, {"family_size", family.size()}, {"l", w.l()}};
  std::vector<bool> constrained;
  ordered_json per_f = ordered_json::array();
  for (const auto& f : family) {
    require(f.arity() == w.k(), "arity mismatch: F vs W");
    if (checked_pow(p.n, f.order()) > kMaxExactMaps) throw CapExceeded("n^|V(F)| above 10^8 for the induced scan");
    Rational t_ind = density_exact(f, w, true);
    constrained.push_back(t_ind == 0);
    per_f.push_back({{"vertices", f.order()}, {"edges", f.size()}, {"t_ind", to_fraction(t_ind)},
                     {"constrained", t_ind == 0}});
  }
  auto hp = round_robin_hyperpartition(p.n, w.k(), w.l());
  std::uint64_t total_hits = 0;
  for (unsigned i = 0; i < p.trials; ++i) {
    auto s = detail::trial_seed(p.seed, i);
    auto g = sample_w(w, p.n, s, &hp).sample;
    ordered_json row = {{"trial", i}, {"sample_seed", s}, {"edges", g.size()}};
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (!constrained[j]) continue;
      auto hits = induced_hom(family[j], g, HomMode::injective);
      total_hits += hits;
      row["hits_F" + std::to_string(j)] = hits;
    }
    rep.records.push_back(std::move(row));
  }
  rep.summary = {{"family", per_f}, {"constrained_hits", total_hits}};
  rep.verdicts.push_back({"zero_preserved", total_hits == 0, "no induced copy of any F with t_ind(F,W) = 0"});
  return rep;
}

// ---------------------------------------------------------------------------
// Finite check of the strong-convergence clauses on a given sequence.

struct SequenceParams {
  unsigned l = 2;
  double eps = 0.25;
  unsigned iterations = 20;
  unsigned cylinder_samples = 20;
  std::uint64_t seed = 0;
};

// Candidate shared structures are the refine structures of the members; the
// best candidate is the one whose worst fitted hamming distance is smallest.
inline ExperimentReport strong_convergence_report(const std::vector<Hypergraph>& sequence, const SequenceParams& p) {
  require(!sequence.empty(), "sequence must be nonempty");
  for (std::size_t i = 1; i < sequence.size(); ++i) {
    require(sequence[i].order() > sequence[i - 1].order(), "sequence: vertex counts must increase");
    require(sequence[i].arity() == sequence[0].arity(), "sequence: mixed arities");
  }
  ExperimentReport rep;
  rep.name = "sequence";
  rep.seed = p.seed;
  std::vector<unsigned> sizes;
  for (const auto& h : sequence) sizes.push_back(h.order());
  rep.parameters = {{"l", p.l}, {"eps", p.eps}, {"sizes", sizes}, {"iterations", p.iterations}};
  const Rational eps = parse_rational(std::to_string(p.eps));
  auto options = [&](std::size_t i) {
    RefineOptions opt;
    opt.l = p.l;
    opt.iterations = p.iterations;
    opt.cylinder_samples = p.cylinder_samples;
    opt.seed = detail::trial_seed(p.seed, i);
    return opt;
  };
  std::vector<DecompositionReport> own;
  std::vector<CombinatorialStructure> candidates;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    own.push_back(refine(sequence[i], options(i)));
    if (std::find(candidates.begin(), candidates.end(), own.back().c) == candidates.end())
      candidates.push_back(own.back().c);
  }
  std::vector<DecompositionReport> best;
  Rational best_worst = 2;
  std::size_t best_index = 0;
  for (std::size_t ci = 0; ci < candidates.size(); ++ci) {
    std::vector<DecompositionReport> fits;
    Rational worst = 0;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
      fits.push_back(fit_structure(sequence[i], candidates[ci], options(i)));
      worst = std::max(worst, fits.back().eps);
    }
    if (worst < best_worst) {
      best_worst = worst;
      best = std::move(fits);
      best_index = ci;
    }
  }
  const bool within = best_worst <= eps;
  bool deltas_down = true;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (i > 0 && best[i].delta > best[i - 1].delta) deltas_down = false;
    rep.records.push_back({{"index", i},
                           {"n", sequence[i].order()},
                           {"eps_own", to_fraction(own[i].eps)},
                           {"eps_shared", to_fraction(best[i].eps)},
                           {"delta", to_fraction(best[i].delta)}});
  }
  rep.summary = {{"candidates", candidates.size()},
                 {"shared_candidate", best_index},
                 {"shared_structure_cells", candidates[best_index].cells().size()},
                 {"worst_shared_eps", to_fraction(best_worst)},
                 {"clause_hamming", within},
                 {"clause_deltas_nonincreasing", deltas_down},
                 {"shared_structure_found", within}};
  rep.verdicts.push_back({"shared_structure", within, "one structure within eps for every member"});
  return rep;
}

}  // namespace hgl
