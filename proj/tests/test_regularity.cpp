#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "support.hpp"

using namespace hgl;

namespace {

Rational R(long p, long q = 1) { return make_rational(BigInt(p), BigInt(q)); }

RefineOptions opts(unsigned l, std::uint64_t seed, unsigned iterations = 20) {
  RefineOptions o;
  o.l = l;
  o.seed = seed;
  o.iterations = iterations;
  o.cylinder_samples = 30;
  return o;
}

void expect_consistent(const Hypergraph& h, const DecompositionReport& r) {
  EXPECT_EQ(r.eps, oracle::hamming(h, oracle::cells_union(r.hp, r.c)));
  EXPECT_EQ(r.equitability, equitability_deficit(r.hp));
  EXPECT_GE(r.delta, r.equitability);
}

TEST(Refine, CompleteWithOneClass) {
  for (unsigned k = 2; k <= 3; ++k) {
    auto h = complete_hypergraph(k, 7);
    auto r = refine(h, opts(1, 1));
    EXPECT_EQ(r.eps, 0);
    EXPECT_EQ(r.c, CombinatorialStructure::all(k, 1));
    EXPECT_EQ(refine(Hypergraph(k, 7), opts(1, 1)).c, CombinatorialStructure::none(k, 1));
  }
}

TEST(Refine, OneClassMajority) {
  // 4 of 6 pairs present: the single cell is kept
  auto h = support::graph(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
  auto r = refine(h, opts(1, 0));
  EXPECT_EQ(r.c, CombinatorialStructure::all(2, 1));
  EXPECT_EQ(r.eps, R(2, 6));
  // a tie is excluded
  auto tie = support::graph(4, {{0, 1}, {0, 2}, {1, 2}});
  EXPECT_EQ(refine(tie, opts(1, 0)).c, CombinatorialStructure::none(2, 1));
}

TEST(Refine, ReportRechecksAndTraceIsMonotone) {
  for (unsigned k = 2; k <= 3; ++k)
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto h = support::random_h(k, 9, 40 + k, s);
      auto r = refine(h, opts(2, s, 6));
      expect_consistent(h, r);
      ASSERT_FALSE(r.trace.empty());
      EXPECT_EQ(r.trace.back().eps, r.eps);
      for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_LE(r.trace[i].eps, r.trace[i - 1].eps);
    }
}

TEST(Refine, PlantedRecovery) {
  int good = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto h = support::planted(24, s);
    auto r = refine(h, opts(2, s));
    expect_consistent(h, r);
    EXPECT_LE(r.eps, r.trace.front().eps);
    good += r.eps <= R(1, 20);
  }
  EXPECT_GE(good, 16);
}

TEST(Refine, Example1Baseline) {
  auto w = builtin(Builtin::example1, 2);
  std::vector<Rational> eps;
  for (std::uint64_t s = 0; s < 7; ++s) {
    auto h = sample_w(w, 40, s).sample;
    eps.push_back(refine(h, opts(2, s)).eps);
  }
  std::sort(eps.begin(), eps.end());
  EXPECT_LE(eps[eps.size() / 2], R(3, 10));
}

TEST(Refine, DeterministicAndSeedSensitive) {
  auto h = support::random_h(2, 14, 1, 1);
  auto a = refine(h, opts(2, 5)), b = refine(h, opts(2, 5));
  EXPECT_EQ(io::to_json(a).dump(), io::to_json(b).dump());
  set_default_threads(4);
  auto c = refine(h, opts(2, 5));
  set_default_threads(0);
  EXPECT_EQ(io::to_json(a).dump(), io::to_json(c).dump());
}

TEST(Refine, Errors) {
  EXPECT_THROW(refine(Hypergraph(3, 2), opts(2, 1)), InputError);
  EXPECT_THROW(refine(Hypergraph(2, 5), opts(0, 1)), InputError);
}

// Brute-force optimum of |H Δ H(HP,C)| over every HP and every union of cell orbits.
Rational best_possible(const Hypergraph& h, unsigned l) {
  const unsigned n = h.order(), k = h.arity();
  CellSpace space(k, l);
  std::vector<std::uint64_t> reps;
  for (std::uint64_t c = 0; c < space.size(); ++c)
    if (space.orbit_representative(c) == c) reps.push_back(c);
  unsigned slots = 0;
  for (unsigned r = 1; r <= k; ++r) slots += static_cast<unsigned>(binomial(n, r));
  Rational best = 1;
  oracle::for_each_map(slots, l, [&](const std::vector<unsigned>& g) {
    std::vector<std::vector<Label>> labels(k);
    std::size_t at = 0;
    for (unsigned r = 1; r <= k; ++r)
      for (std::uint64_t i = 0; i < binomial(n, r); ++i) labels[r - 1].push_back(static_cast<Label>(g[at++] + 1));
    Hyperpartition hp(n, k, l, labels);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << reps.size()); ++m) {
      std::vector<std::uint64_t> codes;
      for (std::size_t i = 0; i < reps.size(); ++i)
        if (m >> i & 1u) codes.push_back(reps[i]);
      auto c = CombinatorialStructure::symmetrized(k, l, codes);
      best = std::min(best, oracle::hamming(h, oracle::cells_union(hp, c)));
    }
  });
  return best;
}

TEST(RefineExhaustive, MatchesBruteForceOptimum) {
  for (std::uint64_t s = 0; s < 6; ++s) {
    auto h = support::random_h(2, 4, 60, s);
    auto r = refine_exhaustive(h, opts(2, s));
    EXPECT_EQ(r.eps, best_possible(h, 2));
    expect_consistent(h, r);
  }
}

TEST(RefineExhaustive, PlantedSmallInstancesReachZero) {
  for (unsigned n = 4; n <= 8; ++n) {
    auto h = support::planted(n, n);
    auto r = refine_exhaustive(h, opts(2, 1));
    EXPECT_EQ(r.eps, 0) << "n=" << n;
    expect_consistent(h, r);
  }
}

TEST(RefineExhaustive, RejectsLargeInstances) {
  EXPECT_THROW(refine_exhaustive(support::random_h(2, 30, 1, 1), opts(2, 1)), CapExceeded);
  EXPECT_THROW(refine_exhaustive(support::random_h(3, 5, 1, 1), opts(2, 1)), InputError);  // too many cell orbits
}

TEST(Json, DecompositionReportRoundTrip) {
  auto h = support::planted(10, 3);
  auto r = refine(h, opts(2, 3));
  auto j = io::to_json(r);
  auto hp = io::hyperpartition_from_json(j["HP"]);
  auto c = io::structure_from_json(j["C"]);
  EXPECT_EQ(hamming_density(h, cells_union(hp, c)), r.eps);
  EXPECT_EQ(j["seed"], 3);
}

}  // namespace
