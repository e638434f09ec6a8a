#pragma once

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hgl/cells.hpp"
#include "hgl/error.hpp"
#include "hgl/experiments.hpp"
#include "hgl/hypergraph.hpp"
#include "hgl/hypergraphon.hpp"
#include "hgl/hyperpartition.hpp"
#include "hgl/metrics.hpp"
#include "hgl/rational.hpp"
#include "hgl/regularity.hpp"

// JSON formats. Subset masks are integers with bit i-1 <-> element i of [k];
// rationals are "p/q" strings.
namespace hgl::io {

using json = nlohmann::ordered_json;

inline json parse(const std::string& text, const std::string& what = "input") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(what + ": malformed JSON (" + std::string(e.what()) + ")");
  }
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse(text, path);
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot write");
  out << text;
}

namespace detail {

inline const json& field(const json& j, const std::string& key) {
  if (!j.is_object()) throw InputError("document: expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(key + ": missing field");
  return *it;
}

inline unsigned uint_field(const json& j, const std::string& key, unsigned lo, unsigned hi) {
  const auto& v = field(j, key);
  if (!v.is_number_integer()) throw InputError(key + ": expected an integer");
  auto x = v.get<long long>();
  if (x < lo || x > hi)
    throw InputError(key + ": " + std::to_string(x) + " outside " + std::to_string(lo) + ".." + std::to_string(hi));
  return static_cast<unsigned>(x);
}

}  // namespace detail

// ---- Hypergraph: {"k","n","edges":[[v,...],...]}

inline json to_json(const Hypergraph& h) {
  json edges = json::array();
  for (std::size_t i = 0; i < h.size(); ++i) edges.push_back(h.edge(i));
  return json{{"k", h.arity()}, {"n", h.order()}, {"edges", edges}};
}

inline Hypergraph hypergraph_from_json(const json& j) {
  unsigned k = detail::uint_field(j, "k", 1, 16);
  unsigned n = detail::uint_field(j, "n", 0, 1u << 24);
  const auto& e = detail::field(j, "edges");
  if (!e.is_array()) throw InputError("edges: expected an array");
  std::vector<std::vector<Vertex>> edges;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!e[i].is_array()) throw InputError("edges[" + std::to_string(i) + "]: expected an array of vertices");
    std::vector<Vertex> edge;
    for (const auto& v : e[i]) {
      if (!v.is_number_integer() || v.get<long long>() < 0)
        throw InputError("edges[" + std::to_string(i) + "]: vertices must be nonnegative integers");
      edge.push_back(v.get<Vertex>());
    }
    edges.push_back(std::move(edge));
  }
  return Hypergraph(k, n, edges);
}

// ---- Hyperpartition: {"n","k","l","labels":{"1":[...],...}}

inline json to_json(const Hyperpartition& hp) {
  json labels = json::object();
  for (unsigned r = 1; r <= hp.arity(); ++r) labels[std::to_string(r)] = hp.labels(r);
  return json{{"n", hp.order()}, {"k", hp.arity()}, {"l", hp.classes()}, {"labels", labels}};
}

inline Hyperpartition hyperpartition_from_json(const json& j) {
  unsigned n = detail::uint_field(j, "n", 0, 1u << 24);
  unsigned k = detail::uint_field(j, "k", 1, 5);
  unsigned l = detail::uint_field(j, "l", 1, 255);
  const auto& lab = detail::field(j, "labels");
  if (!lab.is_object()) throw InputError("labels: expected an object keyed by arity");
  std::vector<std::vector<Label>> labels(k);
  for (unsigned r = 1; r <= k; ++r) {
    auto key = std::to_string(r);
    if (!lab.contains(key)) throw InputError("labels." + key + ": missing");
    const auto& row = lab[key];
    if (!row.is_array()) throw InputError("labels." + key + ": expected an array");
    for (const auto& x : row) {
      if (!x.is_number_integer()) throw InputError("labels." + key + ": labels must be integers");
      auto v = x.get<long long>();
      if (v < 1 || v > l) throw InputError("labels." + key + ": label " + std::to_string(v) + " outside 1..l");
      labels[r - 1].push_back(static_cast<Label>(v));
    }
  }
  return Hyperpartition(n, k, l, std::move(labels));
}

// ---- cells / boxes: [{"<mask>": label, ...}, ...]

inline json cells_to_json(const CellSpace& space, const CellSet& cells) {
  json out = json::array();
  for (auto code : cells.codes()) {
    json cell = json::object();
    for (Mask m = 1; m <= space.top(); ++m) cell[std::to_string(m)] = space.label(code, m);
    out.push_back(cell);
  }
  return out;
}

inline std::vector<std::uint64_t> cells_from_json(const json& arr, const CellSpace& space, const std::string& key) {
  if (!arr.is_array()) throw InputError(key + ": expected an array of cells");
  std::vector<std::uint64_t> codes;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& cell = arr[i];
    const std::string where = key + "[" + std::to_string(i) + "]";
    if (!cell.is_object()) throw InputError(where + ": expected an object {mask: label}");
    std::vector<Label> labels(std::size_t{1} << space.k(), 0);
    for (auto it = cell.begin(); it != cell.end(); ++it) {
      unsigned long mask = 0;
      try {
        std::size_t used = 0;
        mask = std::stoul(it.key(), &used);
        if (used != it.key().size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw InputError(where + ": mask '" + it.key() + "' is not an integer");
      }
      if (mask < 1 || mask > space.top()) throw InputError(where + ": mask " + it.key() + " outside 1..2^k-1");
      if (!it.value().is_number_integer()) throw InputError(where + ": label for mask " + it.key() + " not an integer");
      auto v = it.value().get<long long>();
      if (v < 1 || v > space.l()) throw InputError(where + ": label for mask " + it.key() + " outside 1..l");
      labels[mask] = static_cast<Label>(v);
    }
    for (Mask m = 1; m <= space.top(); ++m)
      if (labels[m] == 0) throw InputError(where + ": mask " + std::to_string(m) + " missing");
    codes.push_back(space.encode(labels));
  }
  return codes;
}

inline json to_json(const CombinatorialStructure& c) {
  return json{{"k", c.k()}, {"l", c.l()}, {"cells", cells_to_json(c.space(), c.cells())}};
}

inline json to_json(const StepHypergraphon& w) {
  return json{{"k", w.k()}, {"l", w.l()}, {"boxes", cells_to_json(w.space(), w.cells())}};
}

namespace detail {
template <class T>
T cell_system_from_json(const json& j, const std::string& key, bool symmetrize_cells) {
  unsigned k = uint_field(j, "k", 1, 5);
  unsigned l = uint_field(j, "l", 1, 255);
  CellSpace space(k, l);
  CellSet cells(space, cells_from_json(field(j, key), space, key));
  if (symmetrize_cells) cells = symmetrize(space, cells);
  return T(space, std::move(cells));
}
}  // namespace detail

inline CombinatorialStructure structure_from_json(const json& j, bool symmetrize_cells = false) {
  return detail::cell_system_from_json<CombinatorialStructure>(j, "cells", symmetrize_cells);
}

inline StepHypergraphon step_from_json(const json& j, bool symmetrize_cells = false) {
  return detail::cell_system_from_json<StepHypergraphon>(j, "boxes", symmetrize_cells);
}

// ---- reports

inline json to_json(const DistanceReport& r) {
  json out{{"kind", to_string(r.kind)}};
  if (r.exact)
    out["value"] = to_fraction(*r.exact);
  else
    out["value"] = r.value;
  if (r.kind == DistanceKind::estimate && !r.exact) out["stderr"] = r.stderr_;
  if (r.witness_graph) out["witness"] = to_json(*r.witness_graph);
  if (!r.witness_permutation.empty()) {
    json perm = json::object();
    for (std::size_t i = 0; i < r.witness_permutation.size(); ++i) {
      std::vector<unsigned> one_based;
      for (auto x : r.witness_permutation[i]) one_based.push_back(x + 1);
      perm[std::to_string(i + 1)] = one_based;
    }
    out["witness"] = json{{"level_permutation", perm}};
  }
  if (r.seed) out["seed"] = *r.seed;
  if (!r.budget.empty()) out["budget"] = r.budget;
  return out;
}

inline json to_json(const DecompositionReport& r) {
  json trace = json::array();
  for (const auto& row : r.trace)
    trace.push_back({{"iteration", row.iteration},
                     {"eps", to_fraction(row.eps)},
                     {"equitability", to_fraction(row.equitability)},
                     {"accepted", row.accepted}});
  return json{{"eps", to_fraction(r.eps)},
              {"delta", to_fraction(r.delta)},
              {"equitability", to_fraction(r.equitability)},
              {"seed", r.seed},
              {"HP", to_json(r.hp)},
              {"C", to_json(r.c)},
              {"trace", trace}};
}

inline json to_json(const Closeness& c) {
  return json{{"eps", to_fraction(c.eps)},
              {"delta", to_fraction(c.delta)},
              {"equitability", to_fraction(c.equitability)},
              {"regularity", to_fraction(c.regularity)},
              {"seed", c.seed},
              {"cylinder_samples", c.cylinder_samples}};
}

inline json to_json(const ExperimentReport& r) {
  json verdicts = json::array();
  for (const auto& v : r.verdicts) verdicts.push_back({{"name", v.name}, {"passed", v.passed}, {"detail", v.detail}});
  return json{{"experiment", r.name},   {"seed", r.seed},         {"parameters", r.parameters},
              {"summary", r.summary},   {"verdicts", verdicts},   {"passed", r.passed()},
              {"records", r.records}};
}

inline std::string csv_cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return quoted + "\"";
}

// Per-trial records as CSV; columns are the union of keys in first-seen order.
inline std::string records_csv(const json& records) {
  std::vector<std::string> columns;
  for (const auto& rec : records)
    for (auto it = rec.begin(); it != rec.end(); ++it)
      if (std::find(columns.begin(), columns.end(), it.key()) == columns.end()) columns.push_back(it.key());
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << "\n";
  for (const auto& rec : records) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out << ",";
      if (rec.contains(columns[i])) out << csv_cell(rec[columns[i]]);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace hgl::io
