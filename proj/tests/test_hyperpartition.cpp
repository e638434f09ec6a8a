#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"

using namespace hgl;

namespace {

Rational R(long p, long q = 1) { return make_rational(BigInt(p), BigInt(q)); }

// n=4, k=2, l=2: vertices 1,1,2,2; pairs (colex order 01,02,12,03,13,23).
Hyperpartition small_hp(std::vector<Label> pairs) { return Hyperpartition(4, 2, 2, {{1, 1, 2, 2}, std::move(pairs)}); }

CombinatorialStructure top_is_2() {
  return CombinatorialStructure::where(2, 2, [](const CellCoordinate& c) { return c[3] == 2; });
}

TEST(Hyperpartition, ValidatesShape) {
  EXPECT_THROW(Hyperpartition(4, 2, 2, {{1, 1, 2, 2}}), InputError);
  EXPECT_THROW(Hyperpartition(4, 2, 2, {{1, 1, 2}, {1, 1, 1, 1, 1, 1}}), InputError);
  EXPECT_THROW(Hyperpartition(4, 2, 2, {{1, 1, 2, 3}, {1, 1, 1, 1, 1, 1}}), InputError);
  EXPECT_THROW(Hyperpartition(4, 2, 2, {{1, 1, 2, 0}, {1, 1, 1, 1, 1, 1}}), InputError);
}

TEST(Hyperpartition, EveryLabelInRange) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto hp = random_hyperpartition(9, 3, 3, seed);
    for (unsigned r = 1; r <= 3; ++r) {
      ASSERT_EQ(hp.labels(r).size(), binomial(9, r));
      for (auto x : hp.labels(r)) {
        EXPECT_GE(x, 1);
        EXPECT_LE(x, 3);
      }
    }
  }
}

TEST(Equitability, Examples) {
  EXPECT_EQ(equitability_deficit(random_hyperpartition(7, 3, 1, 4)), 0);
  EXPECT_EQ(equitability_deficit(small_hp({1, 2, 1, 2, 1, 2})), 0);
  EXPECT_EQ(equitability_deficit(small_hp({1, 1, 1, 1, 1, 1})), 1);
  EXPECT_EQ(equitability_deficit(Hyperpartition(4, 2, 2, {{1, 1, 1, 2}, {1, 2, 1, 2, 1, 2}})), R(1, 2));
}

TEST(CellCoordinate, Examples) {
  auto ones = Hyperpartition(4, 2, 2, {{1, 1, 1, 1}, {1, 1, 1, 1, 1, 1}});
  auto c = cell_coordinate(ones, std::vector<Vertex>{2, 0});
  for (Mask m = 1; m <= 3; ++m) EXPECT_EQ(c[m], 1);

  auto hp = small_hp({1, 2, 2, 1, 1, 2});
  auto ab = cell_coordinate(hp, std::vector<Vertex>{0, 2});
  auto ba = cell_coordinate(hp, std::vector<Vertex>{2, 0});
  EXPECT_EQ(ab[1], ba[2]);
  EXPECT_EQ(ab[2], ba[1]);
  EXPECT_EQ(ab[3], ba[3]);

  // n=3, k=2, l=2 hand table: vertices 1,2,2; pairs 01->2, 02->1, 12->2.
  Hyperpartition t(3, 2, 2, {{1, 2, 2}, {2, 1, 2}});
  auto x = cell_coordinate(t, std::vector<Vertex>{0, 1});
  EXPECT_EQ(x[1], 1);
  EXPECT_EQ(x[2], 2);
  EXPECT_EQ(x[3], 2);
  auto y = cell_coordinate(t, std::vector<Vertex>{2, 0});
  EXPECT_EQ(y[1], 2);
  EXPECT_EQ(y[2], 1);
  EXPECT_EQ(y[3], 1);
  EXPECT_THROW(cell_coordinate(t, std::vector<Vertex>{1, 1}), InputError);
}

TEST(CellCoordinate, Equivariance) {
  for (unsigned k = 2; k <= 4; ++k) {
    auto hp = random_hyperpartition(7, k, 3, k);
    CounterRng rng(5, Tag::search, k);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Vertex> tuple(7);
      std::iota(tuple.begin(), tuple.end(), 0u);
      std::shuffle(tuple.begin(), tuple.end(), rng);
      tuple.resize(k);
      auto base = cell_coordinate(hp, tuple);
      for (const auto& pi : all_permutations(k)) {
        // tuple^pi: position pi(i) holds x_i
        std::vector<Vertex> moved(k);
        for (unsigned i = 0; i < k; ++i) moved[pi[i]] = tuple[i];
        EXPECT_EQ(cell_coordinate(hp, moved), base.permuted(pi));
      }
    }
  }
}

TEST(Structure, SkClosure) {
  CellSpace space(2, 2);
  std::vector<Label> cell{0, 1, 2, 1};
  EXPECT_THROW(CombinatorialStructure(space, CellSet(space, {space.encode(cell)})), InputError);
  for (unsigned k = 1; k <= 3; ++k)
    for (unsigned l = 1; l <= 3; ++l) {
      auto c = support::random_structure(k, l, k * 10 + l);
      EXPECT_TRUE(is_symmetric(c.space(), c.cells()));
      for (auto code : c.cells().codes())
        for (const auto& p : c.space().permutations()) EXPECT_TRUE(c.contains(c.space().act(code, p)));
    }
}

TEST(CellsUnion, Examples) {
  auto hp = random_hyperpartition(6, 3, 2, 1);
  EXPECT_EQ(cells_union(hp, CombinatorialStructure::all(3, 2)), complete_hypergraph(3, 6));
  EXPECT_EQ(cells_union(hp, CombinatorialStructure::none(3, 2)).size(), 0u);
  auto small = small_hp({1, 2, 2, 1, 1, 2});
  auto t = cells_union(small, top_is_2());
  EXPECT_EQ(t, support::graph(4, {{0, 2}, {1, 2}, {2, 3}}));
  EXPECT_THROW(cells_union(small, CombinatorialStructure::all(2, 3)), InputError);
}

TEST(CellsUnion, AgreesWithDefinition) {
  for (unsigned k = 2; k <= 3; ++k)
    for (std::uint64_t s = 0; s < 10; ++s) {
      auto hp = random_hyperpartition(7, k, 2 + s % 2, s);
      auto c = support::random_structure(k, hp.classes(), s + 100);
      EXPECT_EQ(cells_union(hp, c), oracle::cells_union(hp, c));
    }
}

TEST(Regularity, Examples) {
  SampledCylinders family{200, 3};
  EXPECT_EQ(regularity_deficit(complete_hypergraph(2, 12), family, R(1, 10)), 0);
  EXPECT_EQ(regularity_deficit(Hypergraph(2, 12), family, R(1, 10)), 0);
  EXPECT_EQ(regularity_deficit(complete_hypergraph(3, 9), family, R(1, 10)), 0);
  int good = 0;
  auto w = builtin(Builtin::example1, 2);
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    auto g = sample_w(w, 30, seed).sample;
    good += regularity_deficit(g, SampledCylinders{200, seed}, R(1, 10)) <= R(1, 4);
  }
  EXPECT_GE(good, 5);
}

TEST(Regularity, ExhaustivePoolAndDeviationBound) {
  // pool: all vertex subsets of [5]; every cylinder of two of them
  std::vector<Hypergraph> pool;
  for (unsigned m = 1; m < 32; ++m) {
    std::vector<std::vector<Vertex>> vs;
    for (Vertex v = 0; v < 5; ++v)
      if (m >> v & 1u) vs.push_back({v});
    pool.emplace_back(1, 5, vs);
  }
  auto star = support::graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  auto d = regularity_deficit(star, ExhaustiveCylinders{pool}, R(1, 10));
  // L = {0} x {1..4} is a cylinder with density 1 against global 4/10
  EXPECT_EQ(d, R(3, 5));
  EXPECT_THROW(regularity_deficit(star, ExhaustiveCylinders{{}}, R(1, 10)), InputError);
}

TEST(StructureDensity, Examples) {
  auto c = top_is_2();
  EXPECT_EQ(structure_density(single_edge(2), c), R(1, 2));
  EXPECT_EQ(structure_density(support::triangle(), c), R(1, 8));
  EXPECT_EQ(structure_density(support::triangle(), CombinatorialStructure::all(2, 3)), 1);
  EXPECT_EQ(structure_density(single_edge(3), CombinatorialStructure::all(3, 2)), 1);
  EXPECT_THROW(structure_density(single_edge(3), c), InputError);
}

TEST(StructureDensity, AgreesWithBruteForce) {
  for (unsigned k = 2; k <= 3; ++k)
    for (std::uint64_t s = 0; s < 12; ++s) {
      unsigned l = k == 2 ? 2 + s % 2 : 2;
      auto c = support::random_structure(k, l, s + 7);
      auto f = support::random_h(k, k == 2 ? 2 + s % 3 : 3 + s % 2, 8, s);
      auto expect = oracle::structure_density(f, l, oracle::cell_list(c));
      EXPECT_EQ(structure_density(f, c), expect);
      EXPECT_EQ(structure_density_enumerate(f, c), expect);
    }
}

TEST(StructureDensity, IsHomomorphismPredicate) {
  auto c = top_is_2();
  auto f = single_edge(2);
  LabelMap g(4, 1);
  EXPECT_FALSE(is_structure_homomorphism(f, c, g));
  g[3] = 2;
  EXPECT_TRUE(is_structure_homomorphism(f, c, g));
}

TEST(DVH, ConstantLabels) {
  auto ones = Hyperpartition(6, 2, 2, {std::vector<Label>(6, 1), std::vector<Label>(15, 1)});
  auto p = empirical_DVH(3, ones, 1000, 1);
  ASSERT_EQ(p.support.size(), 1u);
  EXPECT_EQ(p.total, 1000u);
  for (Mask m = 1; m < p.support[0].first.size(); ++m)
    if (popcount(m) <= 2) {
      EXPECT_EQ(p.support[0].first[m], 1);
    }
  EXPECT_THROW(empirical_DVH(7, ones, 10, 1), InputError);
}

double total_variation(const LKDistribution& a, const LKDistribution& b) {
  std::map<LabelMap, double> pa, pb;
  for (const auto& [g, w] : a.support) pa[g] += double(w) / a.total;
  for (const auto& [g, w] : b.support) pb[g] += double(w) / b.total;
  double tv = 0;
  for (const auto& [g, x] : pa) tv += std::abs(x - (pb.count(g) ? pb[g] : 0.0));
  for (const auto& [g, x] : pb)
    if (!pa.count(g)) tv += x;
  return tv / 2;
}

TEST(DVH, SampledMatchesExhaustive) {
  Hyperpartition hp(6, 2, 2, {{1, 2, 1, 2, 2, 1}, {1, 2, 2, 1, 1, 2, 2, 2, 1, 1, 2, 1, 1, 2, 1}});
  auto exact = exhaustive_DVH(3, hp);
  EXPECT_EQ(exact.total, 120u);
  auto sampled = empirical_DVH(3, hp, 100'000, 9);
  EXPECT_LT(total_variation(exact, sampled), 0.05);
}

TEST(DVH, RandomLabelsApproachUniform) {
  // vertex-label imbalance is O(1/sqrt(n)), so n must be large
  auto hp = random_hyperpartition(400, 2, 2, 3);
  auto p = empirical_DVH(3, hp, 200'000, 1);
  // uniform over the 2^6 label maps of r([3],2)
  double tv = 0;
  std::map<LabelMap, double> freq;
  for (const auto& [g, w] : p.support) freq[g] += double(w) / p.total;
  EXPECT_EQ(freq.size(), 64u);
  for (const auto& [g, x] : freq) tv += std::abs(x - 1.0 / 64);
  EXPECT_LT(tv / 2, 0.1);
}

// t0(F, H(HP,C)) = t(F, C, D(V,HP)) for every HP on n <= 7.
TEST(DVH, RemovalIdentityExact) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    unsigned k = 2 + s % 2, n = 5 + s % 3, l = 2;
    auto hp = random_hyperpartition(n, k, l, s);
    auto c = support::random_structure(k, l, s + 50);
    auto f = support::random_h(k, k + 1, 60, s);
    auto t0 = densities(f, cells_union(hp, c)).t0;
    ASSERT_TRUE(t0);
    EXPECT_EQ(*t0, structure_density(f, c, exhaustive_DVH(f.order(), hp)));
  }
}

TEST(Json, HyperpartitionAndStructure) {
  auto hp = random_hyperpartition(6, 3, 3, 2);
  EXPECT_EQ(io::hyperpartition_from_json(io::to_json(hp)), hp);
  auto c = support::random_structure(3, 2, 4);
  EXPECT_EQ(io::structure_from_json(io::to_json(c)), c);

  auto asym = io::parse(R"({"k":2,"l":2,"cells":[{"1":1,"2":2,"3":1}]})");
  try {
    io::structure_from_json(asym);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("not S_k-closed"), std::string::npos);
  }
  EXPECT_EQ(io::structure_from_json(asym, true).cells().size(), 2u);
  EXPECT_THROW(io::structure_from_json(io::parse(R"({"k":2,"l":2,"cells":[{"1":1,"2":2}]})")), InputError);
  EXPECT_THROW(io::structure_from_json(io::parse(R"({"k":2,"l":2,"cells":[{"1":1,"2":1,"4":1}]})")), InputError);
  EXPECT_THROW(io::hyperpartition_from_json(io::parse(R"({"n":3,"k":1,"l":2,"labels":{"1":[1,2]}})")), InputError);
  EXPECT_THROW(io::hyperpartition_from_json(io::parse(R"({"n":3,"k":1,"l":2,"labels":{"1":[1,2,3]}})")), InputError);
}

}  // namespace
