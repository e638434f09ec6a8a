#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "hgl/hgl.hpp"

namespace support {

inline hgl::Hypergraph graph(unsigned n, std::vector<std::vector<hgl::Vertex>> edges, unsigned k = 2) {
  return hgl::Hypergraph(k, n, edges);
}

inline hgl::Hypergraph triangle() { return graph(3, {{0, 1}, {0, 2}, {1, 2}}); }
inline hgl::Hypergraph path3() { return graph(3, {{0, 1}, {1, 2}}); }
inline hgl::Hypergraph c4() { return graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}); }

inline hgl::Hypergraph random_h(unsigned k, unsigned v, std::uint64_t seed, std::uint64_t item) {
  hgl::CounterRng rng(seed, hgl::Tag::family, item);
  return hgl::random_hypergraph(k, v, rng);
}

// Random S_k-closed structure: each cell orbit kept with probability 1/2.
inline hgl::CombinatorialStructure random_structure(unsigned k, unsigned l, std::uint64_t seed) {
  hgl::CellSpace space(k, l);
  hgl::CounterRng rng(seed, hgl::Tag::search, 99);
  std::vector<std::uint64_t> codes;
  for (std::uint64_t c = 0; c < space.size(); ++c)
    if (space.orbit_representative(c) == c && (rng() >> 63)) codes.push_back(c);
  return hgl::CombinatorialStructure::symmetrized(k, l, codes);
}

inline hgl::StepHypergraphon random_step(unsigned k, unsigned l, std::uint64_t seed) {
  return hgl::step_from_structure(random_structure(k, l, seed));
}

// Planted balanced instance (k=2, l=2): vertex classes of equal size from a
// seeded shuffle, pair labels iid; C0 = cells whose two vertex labels agree.
inline hgl::CombinatorialStructure planted_structure() {
  return hgl::CombinatorialStructure::where(2, 2, [](const hgl::CellCoordinate& c) { return c[1] == c[2]; });
}

inline hgl::Hyperpartition planted_hp(unsigned n, std::uint64_t seed) {
  std::vector<hgl::Label> vertex(n);
  for (unsigned i = 0; i < n; ++i) vertex[i] = static_cast<hgl::Label>(i % 2 + 1);
  hgl::CounterRng rng(seed, hgl::Tag::labels, 7);
  std::shuffle(vertex.begin(), vertex.end(), rng);
  auto pairs = hgl::random_hyperpartition(n, 2, 2, seed).labels(2);
  return hgl::Hyperpartition(n, 2, 2, {vertex, pairs});
}

inline hgl::Hypergraph planted(unsigned n, std::uint64_t seed) {
  return hgl::cells_union(planted_hp(n, seed), planted_structure());
}

// σW for per-arity level maps sigma[r-1][old] = new (0-based).
inline hgl::StepHypergraphon relabel_levels(const hgl::StepHypergraphon& w,
                                            const std::vector<std::vector<unsigned>>& sigma) {
  const auto& space = w.space();
  std::vector<std::uint64_t> codes;
  for (auto code : w.cells().codes()) {
    hgl::CellCoordinate cell(w.k());
    for (hgl::Mask m = 1; m <= space.top(); ++m)
      cell[m] = static_cast<hgl::Label>(sigma[hgl::popcount(m) - 1][space.label(code, m) - 1] + 1);
    codes.push_back(cell.code(space));
  }
  return hgl::StepHypergraphon(w.k(), w.l(), codes);
}

inline std::vector<hgl::Hypergraph> with_edges(unsigned k, unsigned max_vertices, std::uint64_t seed) {
  std::vector<hgl::Hypergraph> out;
  for (auto& f : hgl::test_family(k, max_vertices, 3, seed))
    if (f.size() > 0) out.push_back(std::move(f));
  return out;
}

}  // namespace support
