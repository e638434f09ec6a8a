#pragma once

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hgl/hgl.hpp"

namespace hgl::cli {

using io::json;

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kInvalid = 2;

inline constexpr const char* kOutDirEnv = "HGL_OUT_DIR";

struct Streams {
  std::ostream& out;
  std::ostream& err;
  std::istream& in;
};

namespace detail {

struct Flags {
  std::vector<std::string> F, H, W;
  std::string HP, C, out, mode, kind, experiment;
  std::optional<std::uint64_t> samples, seed, budget;
  std::optional<unsigned> trials, l, threads, iterations, max_size;
  std::vector<unsigned> n;
  std::optional<double> eps;
  std::string lambda;
  unsigned k = 2;
  bool exact = false, symmetrize = false;
};

inline json load(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return io::parse(text, "stdin");
  }
  return io::read_file(path);
}

// Prefixes a library diagnostic with the flag whose file it came from.
template <class Fn>
auto with_field(const std::string& flag, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const InputError& e) {
    throw InputError(flag + ": " + e.what());
  }
}

inline Hypergraph load_h(const std::string& flag, const std::string& path, std::istream& in) {
  return with_field(flag, [&] { return io::hypergraph_from_json(load(path, in)); });
}
inline StepHypergraphon load_w(const std::string& path, std::istream& in, bool sym) {
  return with_field("--W", [&] { return io::step_from_json(load(path, in), sym); });
}
inline CombinatorialStructure load_c(const std::string& path, std::istream& in, bool sym) {
  return with_field("--C", [&] { return io::structure_from_json(load(path, in), sym); });
}
inline Hyperpartition load_hp(const std::string& path, std::istream& in) {
  return with_field("--HP", [&] { return io::hyperpartition_from_json(load(path, in)); });
}

inline const std::string& one(const std::vector<std::string>& v, const std::string& flag) {
  if (v.empty()) throw InputError(flag + ": required");
  if (v.size() > 1) throw InputError(flag + ": given more than once");
  return v.front();
}

inline unsigned one_n(const Flags& f, std::optional<unsigned> fallback = std::nullopt) {
  if (f.n.empty()) {
    if (fallback) return *fallback;
    throw InputError("--n: required");
  }
  if (f.n.size() > 1) throw InputError("--n: given more than once");
  return f.n.front();
}

inline std::uint64_t seed_or_fresh(const Flags& f, std::ostream& err) {
  if (f.seed) return *f.seed;
  std::random_device rd;
  std::uint64_t s = (std::uint64_t{rd()} << 32) | rd();
  err << "seed=" << s << "\n";
  return s;
}

inline std::string decimal(double x) {
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

inline std::string estimate_line(double value, double stderr_) {
  return decimal(value) + " stderr=" + decimal(stderr_);
}

inline void emit(const json& doc, const std::string& path, std::ostream& out) {
  std::string text = doc.dump(2) + "\n";
  if (path.empty())
    out << text;
  else
    io::write_file(path, text);
}

inline std::string out_dir(const Flags& f) {
  if (!f.out.empty()) return f.out;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return ".";
}

// ---- subcommands

inline int density(const Flags& f, Streams s) {
  Hypergraph F = load_h("--F", one(f.F, "--F"), s.in);
  const std::string mode = f.mode.empty() ? "hom" : f.mode;
  if (!f.H.empty()) {
    Hypergraph H = load_h("--H", one(f.H, "--H"), s.in);
    auto d = densities(F, H);
    auto opt = [](const std::optional<Rational>& r) { return r ? to_fraction(*r) : std::string("undefined"); };
    if (mode == "hom") s.out << to_fraction(d.t) << "\n";
    else if (mode == "injective") s.out << opt(d.t0) << "\n";
    else if (mode == "induced") s.out << to_fraction(d.t_ind) << "\n";
    else if (mode == "induced-injective") s.out << opt(d.t0_ind) << "\n";
    else if (mode == "all")
      s.out << "t=" << to_fraction(d.t) << "\nt0=" << opt(d.t0) << "\nt_ind=" << to_fraction(d.t_ind)
            << "\nt0_ind=" << opt(d.t0_ind) << "\n";
    else throw InputError("--mode: expected hom|injective|induced|induced-injective|all for --H");
    return kOk;
  }
  if (!f.C.empty()) {
    if (mode != "hom") throw InputError("--mode: only hom is defined for --C");
    s.out << to_fraction(structure_density(F, load_c(f.C, s.in, f.symmetrize))) << "\n";
    return kOk;
  }
  // W from --W, or stdin when nothing else was given.
  const std::string path = f.W.empty() ? std::string("-") : one(f.W, "--W");
  StepHypergraphon w = load_w(path, s.in, f.symmetrize);
  if (mode != "hom" && mode != "induced") throw InputError("--mode: expected hom|induced for --W");
  const bool induced = mode == "induced";
  if (f.samples && !f.exact) {
    auto est = density_montecarlo(F, w, *f.samples, seed_or_fresh(f, s.err), induced);
    s.out << estimate_line(est.estimate, est.stderr_) << "\n";
  } else {
    s.out << to_fraction(density_exact(F, w, induced)) << "\n";
  }
  return kOk;
}

inline int sample(const Flags& f, Streams s) {
  const unsigned n = one_n(f);
  const std::uint64_t seed = seed_or_fresh(f, s.err);
  Hypergraph g(1, 0);
  json meta;
  if (!f.H.empty()) {
    const auto& path = one(f.H, "--H");
    g = sample_vertex(load_h("--H", path, s.in), n, seed);
    meta = {{"seed", seed}, {"source", path}, {"n", n}, {"model", "vertex"}};
  } else {
    const auto& path = one(f.W, "--W");
    StepHypergraphon w = load_w(path, s.in, f.symmetrize);
    std::optional<Hyperpartition> hp;
    if (!f.HP.empty()) hp = load_hp(f.HP, s.in);
    auto rec = with_field("--HP", [&] { return sample_w(w, n, seed, hp ? &*hp : nullptr, path); });
    g = std::move(rec.sample);
    meta = {{"seed", seed}, {"source", path}, {"n", n}, {"model", "W"}, {"hyperpartition", f.HP}};
  }
  emit(io::to_json(g), f.out, s.out);
  if (!f.out.empty()) io::write_file(f.out + ".meta.json", meta.dump(2) + "\n");
  return kOk;
}

inline void print_distance(const DistanceReport& r, const Flags& f, std::ostream& out) {
  std::string value = r.exact ? to_fraction(*r.exact)
                              : (r.kind == DistanceKind::estimate ? estimate_line(r.value, r.stderr_) : decimal(r.value));
  out << to_string(r.kind) << "=" << value << "\n";
  if (!f.out.empty()) io::write_file(f.out, io::to_json(r).dump(2) + "\n");
}

inline int distance(const Flags& f, Streams s) {
  const std::string mode = f.mode.empty() ? "d1" : f.mode;
  auto two_w = [&] {
    if (f.W.size() != 2) throw InputError("--W: give exactly two hypergraphons");
    return std::pair{load_w(f.W[0], s.in, f.symmetrize), load_w(f.W[1], s.in, f.symmetrize)};
  };
  auto two_h = [&] {
    if (f.H.size() != 2) throw InputError("--H: give exactly two hypergraphs");
    return std::pair{load_h("--H", f.H[0], s.in), load_h("--H", f.H[1], s.in)};
  };
  if (mode == "d1") {
    auto [u, w] = two_w();
    print_distance(d1_exact(u, w), f, s.out);
  } else if (mode == "d1-mc") {
    auto [u, w] = two_w();
    print_distance(d1_montecarlo(u, w, f.samples.value_or(100'000), seed_or_fresh(f, s.err)), f, s.out);
  } else if (mode == "delta-w") {
    auto [u, w] = two_w();
    std::uint64_t seed = seed_or_fresh(f, s.err);
    auto family = delta_family(u.k(), f.max_size.value_or(3), seed);
    std::erase_if(family, [](const Hypergraph& g) { return g.size() == 0; });
    print_distance(delta_w_lower(u, w, family), f, s.out);
  } else if (mode == "delta1") {
    auto [u, w] = two_w();
    print_distance(delta1_upper(u, w, f.budget.value_or(1'000'000), seed_or_fresh(f, s.err)), f, s.out);
  } else if (mode == "delta") {
    auto [a, b] = two_h();
    print_distance(delta_metric_estimate(a, b, f.max_size.value_or(3), seed_or_fresh(f, s.err)), f, s.out);
  } else if (mode == "hamming") {
    auto [a, b] = two_h();
    print_distance(DistanceReport::rational(DistanceKind::exact, hamming_density(a, b)), f, s.out);
  } else {
    throw InputError("--mode: expected d1|d1-mc|delta-w|delta1|delta|hamming");
  }
  return kOk;
}

inline int structure_density_cmd(const Flags& f, Streams s) {
  Hypergraph F = load_h("--F", one(f.F, "--F"), s.in);
  CombinatorialStructure c = load_c(f.C, s.in, f.symmetrize);
  if (f.HP.empty()) {
    s.out << to_fraction(structure_density(F, c)) << "\n";
    return kOk;
  }
  Hyperpartition hp = load_hp(f.HP, s.in);
  with_field("--HP", [&] { hgl::detail::require_same_shape(hp, c); return 0; });
  LKDistribution p = f.samples ? empirical_DVH(F.order(), hp, *f.samples, seed_or_fresh(f, s.err))
                               : exhaustive_DVH(F.order(), hp);
  s.out << to_fraction(structure_density(F, c, p)) << "\n";
  return kOk;
}

inline int regularize(const Flags& f, Streams s) {
  Hypergraph h = load_h("--H", one(f.H, "--H"), s.in);
  RefineOptions opt;
  opt.l = f.l.value_or(2);
  opt.iterations = f.iterations.value_or(opt.iterations);
  opt.cylinder_samples = f.samples ? static_cast<unsigned>(*f.samples) : opt.cylinder_samples;
  if (!f.lambda.empty()) opt.lambda = with_field("--lambda", [&] { return parse_rational(f.lambda); });
  opt.seed = seed_or_fresh(f, s.err);
  const std::string mode = f.mode.empty() ? "local" : f.mode;
  if (mode != "local" && mode != "exhaustive") throw InputError("--mode: expected local|exhaustive");
  DecompositionReport rep = mode == "local" ? refine(h, opt) : refine_exhaustive(h, opt);
  emit(io::to_json(rep), f.out, s.out);
  return kOk;
}

inline int closeness_cmd(const Flags& f, Streams s) {
  Hypergraph h = load_h("--H", one(f.H, "--H"), s.in);
  CombinatorialStructure c = load_c(f.C, s.in, f.symmetrize);
  Hyperpartition hp = load_hp(f.HP, s.in);
  unsigned samples = f.samples ? static_cast<unsigned>(*f.samples) : kDefaultCylinderSamples;
  auto r = with_field("--HP", [&] { return closeness(h, c, hp, samples, seed_or_fresh(f, s.err)); });
  emit(io::to_json(r), f.out, s.out);
  return kOk;
}

inline int experiment(const Flags& f, Streams s) {
  const std::string& name = f.experiment;
  ExperimentReport rep;
  if (name == "concentration") {
    ConcentrationParams p;
    p.n = one_n(f, p.n);
    p.eps = f.eps.value_or(p.eps);
    p.trials = f.trials.value_or(p.trials);
    p.t0_sample_budget = f.samples.value_or(p.t0_sample_budget);
    p.seed = seed_or_fresh(f, s.err);
    rep = concentration_experiment(load_w(one(f.W, "--W"), s.in, f.symmetrize),
                                   load_h("--F", one(f.F, "--F"), s.in), p);
  } else if (name == "counting") {
    CountingParams p;
    if (!f.n.empty()) p.n_list = f.n;
    p.trials = f.trials.value_or(p.trials);
    p.tolerance = f.eps.value_or(p.tolerance);
    p.sample_budget = f.samples.value_or(p.sample_budget);
    p.seed = seed_or_fresh(f, s.err);
    rep = counting_experiment(load_c(f.C, s.in, f.symmetrize), load_h("--F", one(f.F, "--F"), s.in), p);
  } else if (name == "inverse") {
    InverseParams p;
    p.n = one_n(f, p.n);
    p.trials = f.trials.value_or(p.trials);
    p.threshold = f.eps.value_or(p.threshold);
    p.iterations = f.iterations.value_or(p.iterations);
    if (f.samples) p.cylinder_samples = static_cast<unsigned>(*f.samples);
    p.seed = seed_or_fresh(f, s.err);
    rep = inverse_counting_experiment(load_w(one(f.W, "--W"), s.in, f.symmetrize), p);
  } else if (name == "removal") {
    rep = removal_experiment(load_h("--H", one(f.H, "--H"), s.in), load_h("--F", one(f.F, "--F"), s.in));
    rep.seed = f.seed.value_or(0);  // deterministic; the seed only names the files
  } else if (name == "hereditary") {
    HereditaryParams p;
    p.n = one_n(f, p.n);
    p.trials = f.trials.value_or(p.trials);
    p.seed = seed_or_fresh(f, s.err);
    if (f.F.empty()) throw InputError("--F: required");
    std::vector<Hypergraph> family;
    for (const auto& path : f.F) family.push_back(load_h("--F", path, s.in));
    rep = hereditary_experiment(load_w(one(f.W, "--W"), s.in, f.symmetrize), family, p);
  } else if (name == "sequence") {
    SequenceParams p;
    p.l = f.l.value_or(p.l);
    p.eps = f.eps.value_or(p.eps);
    p.iterations = f.iterations.value_or(p.iterations);
    if (f.samples) p.cylinder_samples = static_cast<unsigned>(*f.samples);
    p.seed = seed_or_fresh(f, s.err);
    if (f.H.empty()) throw InputError("--H: required (one per sequence member)");
    std::vector<Hypergraph> seq;
    for (const auto& path : f.H) seq.push_back(load_h("--H", path, s.in));
    rep = strong_convergence_report(seq, p);
  } else {
    throw InputError("experiment: unknown name '" + name + "'");
  }
  namespace fs = std::filesystem;
  fs::path dir = out_dir(f);
  fs::create_directories(dir);
  const std::string stem = rep.name + "-" + std::to_string(rep.seed);
  io::write_file((dir / (stem + ".json")).string(), io::to_json(rep).dump(2) + "\n");
  io::write_file((dir / (stem + ".csv")).string(), io::records_csv(rep.records));
  s.out << (rep.passed() ? "PASS " : "FAIL ") << (dir / (stem + ".json")).string() << "\n";
  for (const auto& v : rep.verdicts) s.out << "  " << v.name << ": " << (v.passed ? "pass" : "fail") << " " << v.detail << "\n";
  return kOk;
}

inline int builtin_w(const Flags& f, Streams s) {
  if (f.kind.empty()) throw InputError("--kind: required");
  emit(io::to_json(builtin(parse_builtin(f.kind), f.k)), f.out, s.out);
  return kOk;
}

inline int validate(const Flags& f, Streams s) {
  std::size_t checked = 0;
  for (const auto& p : f.H) load_h("--H", p, s.in), ++checked;
  for (const auto& p : f.F) load_h("--F", p, s.in), ++checked;
  for (const auto& p : f.W) load_w(p, s.in, f.symmetrize), ++checked;
  if (!f.C.empty()) load_c(f.C, s.in, f.symmetrize), ++checked;
  if (!f.HP.empty()) load_hp(f.HP, s.in), ++checked;
  if (checked == 0) throw InputError("validate: nothing to check (give --H, --F, --W, --C or --HP)");
  s.out << "ok\n";
  return kOk;
}

}  // namespace detail

// Runs one invocation; args excludes the program name.
inline int execute(const std::vector<std::string>& args, Streams s) {
  using namespace detail;
  Flags f;
  CLI::App app{"Dense hypergraph limits: densities, sampling, distances, decompositions, experiments", "hgl"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  app.add_option("--threads", f.threads, "worker threads (default: all cores)");

  auto seed = [&](CLI::App* c) { c->add_option("--seed", f.seed, "master seed"); };
  auto out = [&](CLI::App* c, const std::string& what) { c->add_option("--out", f.out, what); };
  auto sym = [&](CLI::App* c) { c->add_flag("--symmetrize", f.symmetrize, "close input cells under S_k"); };

  auto* dens = app.add_subcommand("density", "t(F,H), t(F,W) or t(F,C)");
  dens->add_option("--F", f.F, "F hypergraph JSON")->required();
  dens->add_option("--H", f.H, "H hypergraph JSON");
  dens->add_option("--W", f.W, "step hypergraphon JSON (default: stdin)");
  dens->add_option("--C", f.C, "combinatorial structure JSON");
  dens->add_option("--mode", f.mode, "hom|injective|induced|induced-injective|all");
  dens->add_flag("--exact", f.exact, "exact rational (default for W)");
  dens->add_option("--samples", f.samples, "Monte Carlo samples instead of exact");
  seed(dens), sym(dens);

  auto* samp = app.add_subcommand("sample", "G(W,n), G(W,HP,n) or G(H,n)");
  samp->add_option("--W", f.W, "step hypergraphon JSON");
  samp->add_option("--H", f.H, "hypergraph JSON (vertex sampling)");
  samp->add_option("--HP", f.HP, "hyperpartition JSON");
  samp->add_option("--n", f.n, "vertices")->required();
  seed(samp), out(samp, "output path (sidecar <out>.meta.json)"), sym(samp);

  auto* dist = app.add_subcommand("distance", "d1, delta_w, delta1, delta, hamming");
  dist->add_option("--W", f.W, "two step hypergraphons");
  dist->add_option("--H", f.H, "two hypergraphs");
  dist->add_option("--mode", f.mode, "d1|d1-mc|delta-w|delta1|delta|hamming");
  dist->add_option("--samples", f.samples, "Monte Carlo samples (d1-mc)");
  dist->add_option("--budget", f.budget, "relabel evaluations (delta1)");
  dist->add_option("--max-size", f.max_size, "largest test graph (delta, delta-w)");
  seed(dist), out(dist, "JSON report path"), sym(dist);

  auto* sd = app.add_subcommand("structure-density", "t(F,C) or t(F,C,D(V,HP))");
  sd->add_option("--F", f.F, "F hypergraph JSON")->required();
  sd->add_option("--C", f.C, "combinatorial structure JSON")->required();
  sd->add_option("--HP", f.HP, "hyperpartition JSON");
  sd->add_option("--samples", f.samples, "sampled D(V,HP) instead of exhaustive");
  seed(sd), sym(sd);

  auto* reg = app.add_subcommand("regularize", "decompose H into (HP, C)");
  reg->add_option("--H", f.H, "hypergraph JSON")->required();
  reg->add_option("--l", f.l, "classes per arity");
  reg->add_option("--mode", f.mode, "local|exhaustive");
  reg->add_option("--iterations", f.iterations, "sweeps (local)");
  reg->add_option("--samples", f.samples, "cylinder samples per class");
  reg->add_option("--lambda", f.lambda, "weight of the equitability deficit, as p/q (default 1/10)");
  seed(reg), out(reg, "JSON report path");

  auto* clo = app.add_subcommand("closeness", "(eps, delta) of H against (HP, C)");
  clo->add_option("--H", f.H, "hypergraph JSON")->required();
  clo->add_option("--C", f.C, "combinatorial structure JSON")->required();
  clo->add_option("--HP", f.HP, "hyperpartition JSON")->required();
  clo->add_option("--samples", f.samples, "cylinder samples per class");
  seed(clo), out(clo, "JSON report path"), sym(clo);

  auto* exp = app.add_subcommand("experiment", "run an experiment harness");
  exp->add_option("name", f.experiment, "concentration|counting|inverse|removal|hereditary|sequence")->required();
  exp->add_option("--W", f.W, "step hypergraphon JSON");
  exp->add_option("--H", f.H, "hypergraph JSON (repeat for sequence)");
  exp->add_option("--F", f.F, "F hypergraph JSON (repeat for hereditary)");
  exp->add_option("--C", f.C, "combinatorial structure JSON");
  exp->add_option("--n", f.n, "vertices (repeat for counting)");
  exp->add_option("--trials", f.trials, "trials");
  exp->add_option("--eps", f.eps, "deviation / tolerance / threshold");
  exp->add_option("--samples", f.samples, "sample budget");
  exp->add_option("--l", f.l, "classes per arity (sequence)");
  exp->add_option("--iterations", f.iterations, "refine sweeps");
  seed(exp), out(exp, "output directory (default $" + std::string(kOutDirEnv) + " or .)"), sym(exp);

  auto* bw = app.add_subcommand("builtin-w", "print a built-in step hypergraphon");
  bw->add_option("--kind", f.kind, "example1|example2|full|empty")->required();
  bw->add_option("--k", f.k, "arity");
  out(bw, "output path");

  auto* val = app.add_subcommand("validate", "check input files");
  val->add_option("--H", f.H, "hypergraph JSON");
  val->add_option("--F", f.F, "hypergraph JSON");
  val->add_option("--W", f.W, "step hypergraphon JSON");
  val->add_option("--C,--structure", f.C, "combinatorial structure JSON");
  val->add_option("--HP", f.HP, "hyperpartition JSON");
  sym(val);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    s.out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    s.out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    s.err << "error: " << e.what() << "\n";
    return kInvalid;
  }

  try {
    if (f.threads) {
      if (*f.threads == 0) throw InputError("--threads: must be positive");
      set_default_threads(*f.threads);
    }
    if (*dens) return density(f, s);
    if (*samp) return sample(f, s);
    if (*dist) return distance(f, s);
    if (*sd) return structure_density_cmd(f, s);
    if (*reg) return regularize(f, s);
    if (*clo) return closeness_cmd(f, s);
    if (*exp) return experiment(f, s);
    if (*bw) return builtin_w(f, s);
    if (*val) return validate(f, s);
  } catch (const InputError& e) {
    s.err << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    s.err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}

}  // namespace hgl::cli
