#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "support.hpp"

using namespace hgl;

namespace {

Rational R(long p, long q = 1) { return make_rational(BigInt(p), BigInt(q)); }

// Box-membership d1 on an explicit common grid, independent of refine_grid:
// a fine cell lies in W iff its coarse image does.
Rational d1_oracle(const StepHypergraphon& u, const StepHypergraphon& w) {
  const unsigned k = u.k(), L = std::lcm(u.l(), w.l());
  CellSpace fine(k, L);
  std::uint64_t diff = 0;
  for (std::uint64_t c = 0; c < fine.size(); ++c) {
    auto labels = fine.decode(c);
    auto coarse = [&](const StepHypergraphon& x) {
      CellCoordinate cell(k);
      for (Mask m = 1; m <= fine.top(); ++m) cell[m] = static_cast<Label>((labels[m] - 1) * x.l() / L + 1);
      return x.contains(cell);
    };
    diff += coarse(u) != coarse(w);
  }
  return make_rational(BigInt(diff), BigInt(fine.size()));
}

using support::relabel_levels;
using support::with_edges;

StepHypergraphon random_step_any(unsigned k, std::uint64_t seed) {
  unsigned l = 1 + seed % 3;
  return support::random_step(k, l, seed);
}

TEST(D1, Examples) {
  auto e1 = builtin(Builtin::example1, 2);
  EXPECT_EQ(*d1_exact(e1, e1).exact, 0);
  EXPECT_EQ(*d1_exact(e1, builtin(Builtin::full, 2)).exact, R(1, 2));
  EXPECT_EQ(*d1_exact(e1, builtin(Builtin::empty, 2)).exact, R(1, 2));
  EXPECT_EQ(d1_exact(e1, e1).kind, DistanceKind::exact);
  EXPECT_THROW(d1_exact(e1, builtin(Builtin::full, 3)), InputError);
}

TEST(D1, AgreesWithOracleAcrossGrids) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    auto u = random_step_any(2, s), w = random_step_any(2, s + 1000);
    EXPECT_EQ(*d1_exact(u, w).exact, d1_oracle(u, w));
  }
}

TEST(D1, MetricAxioms) {
  for (unsigned k = 2; k <= 3; ++k)
    for (std::uint64_t s = 0; s < 40; ++s) {
      auto a = random_step_any(k, 3 * s), b = random_step_any(k, 3 * s + 1), c = random_step_any(k, 3 * s + 2);
      auto ab = *d1_exact(a, b).exact, bc = *d1_exact(b, c).exact, ac = *d1_exact(a, c).exact;
      EXPECT_EQ(ab, *d1_exact(b, a).exact);
      EXPECT_LE(ac, ab + bc);
      EXPECT_EQ(*d1_exact(a, a).exact, 0);
      EXPECT_GE(ab, 0);
    }
}

TEST(D1, RefinementIsTheSameSet) {
  auto w = support::random_step(2, 2, 4);
  EXPECT_EQ(*d1_exact(w, refine_grid(w, 6)).exact, 0);
}

TEST(D1, MonteCarloNearExact) {
  auto u = support::random_step(2, 2, 1), w = support::random_step(2, 3, 2);
  double exact = to_double(*d1_exact(u, w).exact);
  auto est = d1_montecarlo(u, w, 50000, 3);
  EXPECT_EQ(est.kind, DistanceKind::estimate);
  EXPECT_LE(std::abs(est.value - exact), 4 * est.stderr_ + 1e-12);
  EXPECT_EQ(est.value, d1_montecarlo(u, w, 50000, 3).value);
}

TEST(Hamming, Examples) {
  auto h = support::random_h(3, 7, 1, 0);
  EXPECT_EQ(hamming_density(h, h), 0);
  EXPECT_EQ(hamming_density(h, complement(h)), 1);
  EXPECT_EQ(hamming_density(support::triangle(), support::graph(3, {{0, 1}})), R(2, 3));
  EXPECT_THROW(hamming_density(h, Hypergraph(3, 8)), InputError);
  auto g = support::random_h(3, 7, 1, 1);
  EXPECT_EQ(hamming_density(h, g), oracle::hamming(h, g));
}

// |t(F,H) - t(F,T)| <= |E(F)| * hamming(H,T): each edge of F lands on a
// differing k-set with probability at most k! |H Δ T| / n^k.
TEST(Hamming, BoundsDensityGap) {
  for (unsigned k = 2; k <= 3; ++k)
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto h = support::random_h(k, 6, 2, s), t = support::random_h(k, 6, 3, s);
      auto d = hamming_density(h, t);
      for (std::uint64_t i = 0; i < 4; ++i) {
        auto f = support::random_h(k, k + i % 3, 4, 10 * s + i);
        if (f.size() == 0) continue;
        EXPECT_LE(abs(hom_density(f, h) - hom_density(f, t)) / Rational(f.size()), d);
      }
    }
}

TEST(DeltaW, Examples) {
  auto e1 = builtin(Builtin::example1, 2);
  auto full = builtin(Builtin::full, 2);
  EXPECT_EQ(*delta_w_lower(e1, e1, {single_edge(2)}).exact, 0);
  auto r = delta_w_lower(e1, full, {single_edge(2)});
  EXPECT_EQ(*r.exact, R(1, 2));
  EXPECT_EQ(r.kind, DistanceKind::lower_bound);
  ASSERT_TRUE(r.witness_graph);
  EXPECT_EQ(*r.witness_graph, single_edge(2));
  EXPECT_THROW(delta_w_lower(e1, full, {Hypergraph(2, 3)}), InputError);
  EXPECT_THROW(delta_w_lower(e1, full, {}), InputError);
}

TEST(DeltaW, WitnessReproducesValue) {
  auto family = with_edges(2, 4, 5);
  auto u = support::random_step(2, 2, 10), w = support::random_step(2, 3, 11);
  auto r = delta_w_lower(u, w, family);
  ASSERT_TRUE(r.witness_graph);
  auto f = *r.witness_graph;
  EXPECT_EQ(abs(density_exact(f, u) - density_exact(f, w)) / Rational(f.size()), *r.exact);
}

TEST(DeltaW, AtMostD1) {
  std::vector<Hypergraph> family{single_edge(2), support::path3(), support::triangle(), support::c4()};
  for (std::uint64_t s = 0; s < 60; ++s) {
    auto u = random_step_any(2, s), w = random_step_any(2, s + 500);
    EXPECT_LE(*delta_w_lower(u, w, family).exact, *d1_exact(u, w).exact);
  }
}

TEST(DeltaMetric, Examples) {
  auto h = support::random_h(2, 4, 5, 0);
  EXPECT_EQ(*delta_metric_estimate(h, h, 4).exact, 0);
  EXPECT_EQ(*delta_metric_estimate(h, blowup(h, 2), 4).exact, 0);
  EXPECT_EQ(*delta_metric_estimate(support::triangle(), blowup(support::triangle(), 3), 5).exact, 0);
  // the edge gap 2/3 rules out eps = 1/3; at eps = 2/3 only one-vertex F remain
  auto r = delta_metric_estimate(support::triangle(), Hypergraph(2, 3), 3);
  EXPECT_EQ(*r.exact, R(2, 3));
  EXPECT_EQ(r.kind, DistanceKind::estimate);
  ASSERT_TRUE(r.witness_graph);
  EXPECT_EQ(r.witness_graph->size(), 1u);
  EXPECT_EQ(r.witness_graph->order(), 2u);
  EXPECT_THROW(delta_metric_estimate(h, h, 1), InputError);
  EXPECT_THROW(delta_metric_estimate(h, support::random_h(3, 4, 1, 1), 4), InputError);
}

// Direct check of the defining condition on the grid.
TEST(DeltaMetric, GridValueSatisfiesDefinition) {
  for (std::uint64_t s = 0; s < 6; ++s) {
    auto a = support::random_h(2, 4, 6, s), b = support::random_h(2, 5, 7, s);
    const unsigned m = 4;
    auto r = delta_metric_estimate(a, b, m);
    auto eps = *r.exact;
    auto family = delta_family(2, m, 0);
    auto ok = [&](const Rational& e) {
      for (const auto& f : family)
        if ((e == 0 || Rational(f.order()) * e <= 1) && abs(hom_density(f, a) - hom_density(f, b)) > e) return false;
      return true;
    };
    EXPECT_TRUE(ok(eps));
    if (eps > 0) {
      EXPECT_FALSE(ok(eps - R(1, m)));
    }
  }
}

TEST(Delta1, IdentityAndSwap) {
  auto u = support::random_step(2, 2, 13);
  auto same = delta1_upper(u, u, 1000);
  EXPECT_EQ(*same.exact, 0);
  EXPECT_EQ(same.kind, DistanceKind::upper_bound);
  for (unsigned k = 2; k <= 3; ++k) {
    auto base = support::random_step(k, 2, 20 + k);
    std::vector<std::vector<unsigned>> swap(k, {0, 1});
    swap[k - 1] = {1, 0};
    auto w = relabel_levels(base, swap);
    ASSERT_GT(*d1_exact(base, w).exact, 0);
    auto r = delta1_upper(base, w, 1000);
    EXPECT_EQ(*r.exact, 0);
    ASSERT_EQ(r.witness_permutation.size(), k);
    EXPECT_EQ(*d1_exact(base, relabel_levels(w, r.witness_permutation)).exact, 0);
  }
}

TEST(Delta1, HillClimbWhenBudgetIsSmall) {
  auto u = support::random_step(2, 3, 30);
  std::vector<std::vector<unsigned>> sigma{{2, 0, 1}, {1, 2, 0}};
  auto w = relabel_levels(u, sigma);
  auto r = delta1_upper(u, w, 20, 1);  // (3!)^2 = 36 > 20
  EXPECT_NE(r.budget.find("hill-climb"), std::string::npos);
  EXPECT_EQ(*d1_exact(u, relabel_levels(w, r.witness_permutation)).exact, *r.exact);
  EXPECT_LE(*r.exact, *d1_exact(u, w).exact);
}

TEST(Delta1, AtLeastDeltaWLower) {
  auto family = with_edges(2, 4, 9);
  for (std::uint64_t s = 0; s < 30; ++s) {
    auto u = random_step_any(2, 2 * s), w = random_step_any(2, 2 * s + 1);
    EXPECT_GE(*delta1_upper(u, w, 5000, s).exact, *delta_w_lower(u, w, family).exact);
  }
}

TEST(Closeness, Examples) {
  auto hp = random_hyperpartition(12, 2, 2, 3);
  auto c = support::random_structure(2, 2, 5);
  auto t = cells_union(hp, c);
  auto a = closeness(t, c, hp, 50, 1);
  EXPECT_EQ(a.eps, 0);
  EXPECT_GE(a.delta, a.equitability);
  EXPECT_GE(a.delta, a.regularity);
  EXPECT_EQ(closeness(complement(t), c, hp, 50, 1).eps, 1);
  EXPECT_THROW(closeness(Hypergraph(2, 13), c, hp), InputError);
  auto w = step_from_structure(c);
  auto g = sample_w(w, 12, 9, &hp).sample;
  EXPECT_EQ(closeness(g, c, hp, 50, 1).eps, 0);
}

TEST(Json, DistanceReportFields) {
  auto r = delta1_upper(support::random_step(2, 2, 1), support::random_step(2, 2, 2), 100, 4);
  auto j = io::to_json(r);
  EXPECT_EQ(j["kind"], "upper_bound");
  EXPECT_TRUE(j["value"].is_string());
  EXPECT_TRUE(j.contains("budget"));
}

}  // namespace
