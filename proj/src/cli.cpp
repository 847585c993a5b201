#include "localp1/cli.hpp"

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "localp1/canonical.hpp"
#include "localp1/error.hpp"
#include "localp1/gamma2.hpp"
#include "localp1/io.hpp"
#include "localp1/library.hpp"
#include "localp1/pachner.hpp"
#include "localp1/pontryagin.hpp"

namespace localp1 {

namespace {

using Json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  std::uint64_t seed = 1;
  long budget = ReduceOptions{}.budget;
  std::string xi_cache;
  std::string format = "json";
  bool trace = false;
  int jobs = 1;

  ReduceOptions reduce() const {
    ReduceOptions r;
    r.seed = seed;
    r.budget = budget;
    return r;
  }
};

std::string rational_string(const Rational& r) { return to_string(r); }

Json simplex_json(const Simplex& s) { return s.to_vector(); }

Json chain_json(const SimplicialChain& z) {
  Json terms = Json::array();
  for (const auto& [s, c] : z.terms()) terms.push_back({{"simplex", simplex_json(s)}, {"coefficient", rational_string(c)}});
  return terms;
}

std::string verdict_string(SphereVerdict v) {
  switch (v) {
    case SphereVerdict::Yes:
      return "yes";
    case SphereVerdict::No:
      return "no";
    case SphereVerdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

// A path to a facet file, or the name of a bundled library entry.
LoadedComplex resolve_input(const std::string& input) {
  if (std::filesystem::exists(input)) return load_complex_file(input);
  if (auto e = library_entry(input)) return LoadedComplex{e->complex, std::nullopt};
  throw UsageError("no such file or library entry: " + input);
}

// Text rendering of a report: one "key: value" line per scalar, arrays of
// scalars on one line, arrays of objects as indented records.
void render_text(const Json& j, std::ostream& out, const std::string& indent = {}) {
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      out << indent << key << ":\n";
      render_text(value, out, indent + "  ");
    } else if (value.is_array() && !value.empty() && value.front().is_object()) {
      out << indent << key << ":\n";
      for (const auto& item : value) {
        out << indent << "  -";
        for (const auto& [k, v] : item.items()) out << ' ' << k << '=' << scalar(v);
        out << '\n';
      }
    } else {
      out << indent << key << ": " << scalar(value) << '\n';
    }
  }
}

void emit(const Json& report, const GlobalFlags& flags, std::ostream& out) {
  if (flags.format == "text") {
    render_text(report, out);
  } else {
    out << report.dump(2) << '\n';
  }
}

class Tracer {
 public:
  Tracer(bool on, std::ostream& err) : on_(on), err_(err), start_(std::chrono::steady_clock::now()) {}
  void operator()(const std::string& message) const {
    if (!on_) return;
    double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    err_ << "[" << std::fixed << std::setprecision(2) << t << "s] " << message << '\n';
  }

 private:
  bool on_;
  std::ostream& err_;
  std::chrono::steady_clock::time_point start_;
};

Json cmd_check(const std::string& input, const GlobalFlags& flags) {
  LoadedComplex loaded = resolve_input(input);
  const Complex& k = loaded.complex;
  Json r;
  r["command"] = "check";
  r["input"] = input;
  r["dimension"] = k.dimension();
  r["vertices"] = k.num_vertices();
  r["f_vector"] = k.f_vector();
  r["euler_characteristic"] = k.euler_characteristic();
  bool closed = is_closed_pseudomanifold(k);
  r["closed_pseudomanifold"] = closed;
  r["orientable"] = closed ? Json(orient(k).has_value()) : Json(nullptr);
  auto verdict = [](const SphereCheck& c) { return Json{{"verdict", verdict_string(c.verdict)}, {"reason", c.reason}}; };
  r["sphere"] = verdict(is_combinatorial_sphere(k, flags.reduce()));
  r["manifold"] = verdict(is_combinatorial_manifold(k, flags.reduce()));
  return r;
}

Json cmd_reduce(const std::string& input, const GlobalFlags& flags) {
  OrientedComplex k = as_oriented(resolve_input(input));
  Reduction red = reduce_to_boundary(k, flags.reduce());
  replay(red.start, red.sequence);
  Json r;
  r["command"] = "reduce";
  r["input"] = input;
  r["seed"] = flags.seed;
  r["length"] = red.sequence.moves.size();
  r["start"] = Json::parse(format_facets_json(red.start));
  r["sequence"] = Json::parse(move_sequence_to_json(red.sequence));
  return r;
}

Json cmd_sw(const std::string& input) {
  Complex k = resolve_input(input).complex;
  StiefelWhitneyDuals duals = sw_duals(k);
  Json r;
  r["command"] = "sw";
  r["input"] = input;
  r["subdivision_vertices"] = duals.subdivision.num_vertices();
  Json chains = Json::array();
  for (const Mod2Chain& c : duals.chains) {
    bool boundary = is_mod2_boundary(duals.subdivision, c);
    chains.push_back({{"degree", c.degree},
                      {"simplices", c.simplices.size()},
                      {"cycle", mod2_boundary(c).simplices.empty()},
                      {"class", boundary ? "zero" : "nonzero"}});
  }
  r["chains"] = std::move(chains);
  return r;
}

Json cmd_p1(const std::string& mode, const std::string& input, const GlobalFlags& flags, const Tracer& trace) {
  if (mode != "local" && mode != "direct") throw UsageError("p1 mode must be local or direct");
  OrientedComplex k = as_oriented(resolve_input(input));
  Gamma2 g;
  XiCache cache(g);
  if (!flags.xi_cache.empty()) {
    cache.load(flags.xi_cache);
    trace("loaded " + std::to_string(cache.size()) + " cached xi pairings");
  }
  DualOptions opt;
  opt.reduce = flags.reduce();
  opt.jobs = flags.jobs;
  trace("computing the " + mode + " dual cycle");
  SimplicialChain z = mode == "local" ? p1_dual_local(cache, k, opt) : p1_dual_direct(cache, k, opt);
  trace("done: " + std::to_string(g.edge_count()) + " edge classes, " + std::to_string(g.rule_count()) + " rules");
  if (!flags.xi_cache.empty()) cache.save(flags.xi_cache);
  Json r;
  r["command"] = "p1";
  r["mode"] = mode;
  r["input"] = input;
  r["dimension"] = k.dimension();
  r["chain_degree"] = z.degree();
  r["chain"] = chain_json(z);
  r["cycle"] = z.boundary().is_zero();
  r["rational_boundary"] = is_rational_boundary(k.complex(), z);
  if (k.dimension() == 4) r["p1_number"] = rational_string(z.total());
  return r;
}

MoveLoop read_loop(const std::string& path) {
  Json doc;
  try {
    doc = Json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
  if (!doc.contains("moves")) throw Error(ErrorKind::ParseError, path + ": missing \"moves\"");
  Json facets_only = doc;
  facets_only.erase("moves");
  MoveLoop loop{as_oriented(load_complex_string(facets_only.dump())), {}};
  for (const auto& m : doc.at("moves")) {
    loop.moves.push_back({Simplex::from_unsorted(m.at("face").get<std::vector<Vertex>>()),
                          Simplex::from_unsorted(m.at("complement").get<std::vector<Vertex>>())});
  }
  return loop;
}

Json cmd_decompose(const std::string& input, const std::string& policy_name, int steps, int max_complexity,
                   const GlobalFlags& flags, const Tracer& trace) {
  DecompositionPolicy policy;
  if (policy_name == "primary") {
    policy = DecompositionPolicy::Primary;
  } else if (policy_name == "alternate") {
    policy = DecompositionPolicy::Alternate;
  } else {
    throw UsageError("policy must be primary or alternate");
  }
  MoveLoop loop = input.empty() ? random_move_loop(flags.seed, 6L * max_complexity, steps) : read_loop(input);
  Gamma2 g(policy);
  Gamma2Chain chain = loop_chain(g, loop);
  trace("loop of " + std::to_string(loop.moves.size()) + " moves, " + std::to_string(chain.size()) + " edge classes");
  auto terms = g.decompose(chain);
  Gamma2Chain sum;
  Rational value = 0;
  Json list = Json::array();
  for (const auto& t : terms) {
    sum += t.cycle.chain * t.coefficient;
    value += t.coefficient * t.cycle.value();
    Json params = Json::array();
    for (long p : t.cycle.params) params.push_back(p);
    list.push_back({{"coefficient", rational_string(t.coefficient)},
                    {"kind", std::string(to_string(t.cycle.kind))},
                    {"params", params},
                    {"sign", t.cycle.sign},
                    {"value", rational_string(t.cycle.value())}});
  }
  Json r;
  r["command"] = "gamma2 decompose";
  r["policy"] = policy_name;
  r["source"] = input.empty() ? "random" : input;
  if (input.empty()) r["seed"] = flags.seed;
  r["loop_length"] = loop.moves.size();
  r["edge_classes"] = chain.size();
  r["terms"] = std::move(list);
  r["residual_terms"] = (chain - sum).size();
  r["value"] = rational_string(value);
  return r;
}

Json cmd_enumerate(int max_vertices, const Tracer& trace) {
  if (max_vertices < 4) throw UsageError("--max-vertices must be at least 4");
  auto spheres = enumerate_oriented_spheres(max_vertices);
  trace(std::to_string(spheres.size()) + " oriented classes");
  std::map<std::size_t, std::size_t> oriented;
  std::map<std::size_t, std::set<std::string>> unoriented;
  for (const OrientedComplex& s : spheres) {
    ++oriented[s.num_vertices()];
    unoriented[s.num_vertices()].insert(canonical_form(s.complex()).key);
  }
  Json counts = Json::array();
  for (const auto& [n, c] : oriented) counts.push_back({{"vertices", n}, {"oriented", c}, {"unoriented", unoriented[n].size()}});
  Json r;
  r["command"] = "enumerate-spheres";
  r["max_vertices"] = max_vertices;
  r["counts"] = std::move(counts);
  return r;
}

Json cmd_export(const std::string& dir) {
  std::filesystem::create_directories(dir);
  Json files = Json::array();
  for (const LibraryEntry& e : library_entries()) {
    std::filesystem::path p = std::filesystem::path(dir) / (e.name + ".facets");
    write_file(p.string(), format_facets_text(e.complex, e.name));
    files.push_back({{"name", e.name}, {"path", p.string()}, {"facets", e.complex.facets().size()}});
  }
  Json r;
  r["command"] = "library export";
  r["files"] = std::move(files);
  return r;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Combinatorial Pontryagin class computations", "localp1"};
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_option("--seed", flags.seed, "Seed of the reduction search and random loops");
  app.add_option("--budget", flags.budget, "Move budget of each reduction")->check(CLI::PositiveNumber);
  app.add_option("--xi-cache", flags.xi_cache, "JSON file holding cached gauge and xi values");
  app.add_option("--format", flags.format, "Report format")->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--trace", flags.trace, "Progress messages on stderr");
  app.add_option("--jobs", flags.jobs, "Concurrent local formula workers")->check(CLI::Range(1, 256));

  std::string input, mode, policy = "primary", out_dir = "data";
  int max_vertices = 7, steps = 12, max_complexity = 9;

  auto* check = app.add_subcommand("check", "Sphere and manifold verdicts")->fallthrough();
  check->add_option("input", input, "Facet file or library name")->required();
  auto* reduce = app.add_subcommand("reduce", "Reduce a sphere to the boundary of a simplex")->fallthrough();
  reduce->add_option("input", input, "Facet file or library name")->required();
  auto* sw = app.add_subcommand("sw", "Mod 2 Stiefel-Whitney chains of the barycentric subdivision")->fallthrough();
  sw->add_option("input", input, "Facet file or library name")->required();
  auto* p1 = app.add_subcommand("p1", "Cycle dual to the first Pontryagin class")->fallthrough();
  p1->add_option("mode", mode, "local or direct")->required()->check(CLI::IsMember({"local", "direct"}));
  p1->add_option("input", input, "Facet file or library name")->required();
  auto* gamma2 = app.add_subcommand("gamma2", "Move graph of 2-spheres")->fallthrough()->require_subcommand(1);
  auto* decompose = gamma2->add_subcommand("decompose", "Decompose a loop into elementary cycles")->fallthrough();
  decompose->add_option("loop", input, "JSON loop {facets, orientation, moves}; random when omitted");
  decompose->add_option("--policy", policy, "primary or alternate")->check(CLI::IsMember({"primary", "alternate"}));
  decompose->add_option("--steps", steps, "Random moves before the descent")->check(CLI::NonNegativeNumber);
  decompose->add_option("--max-complexity", max_complexity, "Complexity bound of random loops")->check(CLI::Range(4, 20));
  auto* enumerate = app.add_subcommand("enumerate-spheres", "Oriented classes of 2-spheres")->fallthrough();
  enumerate->add_option("--max-vertices", max_vertices, "Largest vertex count")->check(CLI::Range(4, 11));
  auto* library = app.add_subcommand("library", "Bundled complexes")->fallthrough()->require_subcommand(1);
  auto* exporter = library->add_subcommand("export", "Write every bundled complex as a facet file")->fallthrough();
  exporter->add_option("--out", out_dir, "Target directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  Tracer trace(flags.trace, err);
  std::string command = app.get_subcommands().front()->get_name();
  try {
    Json report;
    if (check->parsed()) {
      report = cmd_check(input, flags);
    } else if (reduce->parsed()) {
      report = cmd_reduce(input, flags);
    } else if (sw->parsed()) {
      report = cmd_sw(input);
    } else if (p1->parsed()) {
      report = cmd_p1(mode, input, flags, trace);
    } else if (decompose->parsed()) {
      command = "gamma2 decompose";
      report = cmd_decompose(input, policy, steps, max_complexity, flags, trace);
    } else if (enumerate->parsed()) {
      report = cmd_enumerate(max_vertices, trace);
    } else if (exporter->parsed()) {
      command = "library export";
      report = cmd_export(out_dir);
    }
    emit(report, flags, out);
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    Json report;
    report["command"] = command;
    report["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    emit(report, flags, out);
    err << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    Json report;
    report["command"] = command;
    report["error"] = {{"kind", "Internal"}, {"message", e.what()}};
    emit(report, flags, out);
    err << e.what() << '\n';
    return 1;
  }
}

}  // namespace localp1
