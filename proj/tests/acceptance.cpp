// Acceptance checks: one PASS/FAIL line per criterion. Each check produces
// a deterministic report (timings excluded) so that the last criterion can
// rerun the others and compare byte for byte.
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "localp1/cli.hpp"
#include "localp1/error.hpp"
#include "localp1/gamma2.hpp"
#include "localp1/library.hpp"
#include "localp1/pontryagin.hpp"
#include "support.hpp"

using namespace localp1;

namespace {

// Pinned tolerances: all numeric comparisons are exact rational equality;
// these are the wall-clock limits in seconds.
constexpr double kCalibrationLimit = 1800;
constexpr double kDualLimit = 600;
constexpr double kLoopSuiteLimit = 300;
constexpr double kStiefelWhitneyLimit = 60;
constexpr double kEnumerationLimit = 300;

// Fixed workload sizes.
constexpr int kSeedsPerLink = 5;
constexpr int kLoops = 100;
constexpr long kLoopMaxSixths = 6 * 9;
constexpr int kLoopSteps = 12;
constexpr int kBoundarySamples = 200;
constexpr int kLeibnizSamples = 50;
constexpr int kMoveSamples = 50;
constexpr int kDeltaSquaredSamples = 20;
constexpr int kMaxPolygon = 12;

struct Outcome {
  bool pass = false;
  std::string summary;  // printed on the criterion line
  std::string report;   // deterministic content compared by the rerun
  double seconds = 0;
  double limit = 0;
};

OrientedComplex cp2() { return oriented(cp2_9()); }

std::string str(const Rational& r) { return to_string(r); }

Outcome calibration() {
  Gamma2 g;
  XiCache cache(g);
  SimplicialChain z = p1_dual_local(cache, cp2());
  Outcome o;
  o.pass = z.total() == 3;
  std::ostringstream report;
  for (const auto& [s, c] : z.terms()) report << s.to_string() << ' ' << str(c) << '\n';
  o.report = report.str();
  o.summary = "p1(CP2_9) = " + str(z.total()) + " (expected 3)";
  o.limit = kCalibrationLimit;
  return o;
}

Outcome dual_procedures() {
  Gamma2 g;
  XiCache cache(g);
  OrientedComplex d5 = simplex_boundary(5);
  OrientedComplex k = cp2();
  SimplicialChain d5_local = p1_dual_local(cache, d5);
  SimplicialChain d5_direct = p1_dual_direct(cache, d5);
  SimplicialChain local = p1_dual_local(cache, k);
  SimplicialChain direct = p1_dual_direct(cache, k);
  SimplicialChain diff = local;
  diff -= direct;
  bool cycles = local.boundary().is_zero() && direct.boundary().is_zero();
  bool class_equal = is_rational_boundary(k.complex(), diff);
  Outcome o;
  o.pass = d5_local.total() == 0 && d5_direct.total() == 0 && cycles && class_equal;
  std::ostringstream report;
  report << "d5 " << str(d5_local.total()) << ' ' << str(d5_direct.total()) << '\n';
  for (const auto& [s, c] : direct.terms()) report << s.to_string() << ' ' << str(c) << '\n';
  o.report = report.str();
  o.summary = "boundary of the 5-simplex: local " + str(d5_local.total()) + ", direct " + str(d5_direct.total()) +
              "; CP2_9 direct total " + str(direct.total()) + ", difference is a boundary: " +
              (class_equal ? "yes" : "no");
  o.limit = kDualLimit;
  return o;
}

Outcome well_definedness() {
  Gamma2 g;
  XiCache cache(g);
  OrientedComplex k = cp2();
  bool all_equal = true;
  int distinct_total = 0;
  std::ostringstream report;
  for (Vertex v : k.complex().vertices()) {
    OrientedComplex lk = link(k, Simplex{v});
    std::set<Rational> values;
    std::set<std::vector<Move>> sequences;
    for (int seed = 1; seed <= kSeedsPerLink; ++seed) {
      LocalFormulaResult r = local_formula(cache, lk, ReduceOptions{static_cast<std::uint64_t>(seed)});
      values.insert(r.value);
      sequences.insert(r.reduction.sequence.moves);
      report << v << ' ' << seed << ' ' << r.reduction.sequence.moves.size() << ' ' << str(r.value) << '\n';
    }
    all_equal = all_equal && values.size() == 1;
    distinct_total += static_cast<int>(sequences.size());
  }
  Outcome o;
  o.pass = all_equal;
  o.report = report.str();
  o.summary = std::string("9 vertex links x ") + std::to_string(kSeedsPerLink) + " seeds agree: " +
              (all_equal ? "yes" : "no") + " (" + std::to_string(distinct_total) + " distinct reduction sequences out of " +
              std::to_string(9 * kSeedsPerLink) + ")";
  o.limit = kDualLimit;
  return o;
}

Outcome loop_suite() {
  Gamma2 primary(DecompositionPolicy::Primary);
  Gamma2 alternate(DecompositionPolicy::Alternate);
  int exact = 0, agree = 0, nonzero = 0;
  std::ostringstream report;
  for (int i = 1; i <= kLoops; ++i) {
    MoveLoop loop = random_move_loop(static_cast<std::uint64_t>(i), kLoopMaxSixths, kLoopSteps);
    Gamma2Chain z = loop_chain(primary, loop);
    Gamma2Chain z2 = loop_chain(alternate, loop);
    auto a = primary.decompose(z);
    auto b = alternate.decompose(z2);
    Gamma2Chain sa, sb;
    Rational va = 0, vb = 0;
    for (const auto& t : a) {
      sa += t.cycle.chain * t.coefficient;
      va += t.coefficient * t.cycle.value();
    }
    for (const auto& t : b) {
      sb += t.cycle.chain * t.coefficient;
      vb += t.coefficient * t.cycle.value();
    }
    exact += (z - sa).is_zero() && (z2 - sb).is_zero() ? 1 : 0;
    agree += va == vb ? 1 : 0;
    nonzero += va != 0 ? 1 : 0;
    report << i << ' ' << loop.moves.size() << ' ' << a.size() << ' ' << b.size() << ' ' << str(va) << '\n';
  }
  Outcome o;
  o.pass = exact == kLoops && agree == kLoops;
  o.report = report.str();
  o.summary = std::to_string(exact) + "/" + std::to_string(kLoops) + " zero residual, " + std::to_string(agree) + "/" +
              std::to_string(kLoops) + " policies agree, " + std::to_string(nonzero) + " nonzero values";
  o.limit = kLoopSuiteLimit;
  return o;
}

Outcome algebraic_identities() {
  using testing::chiral_2_sphere;
  using testing::random_sphere;
  int failures = 0, nontrivial = 0;
  std::ostringstream report;

  std::mt19937_64 rng(21);
  for (int trial = 0; trial < kBoundarySamples; ++trial) {
    int dim = 1 + trial % 4;
    OrientedComplex s = random_sphere(dim, 4 + trial % 9, rng, dim == 4 ? 8 : 10);
    SphereChain b = boundary_t(SphereChain::of(s, trial + 1));
    nontrivial += b.is_zero() ? 0 : 1;
    failures += boundary_t(b).is_zero() ? 0 : 1;
  }
  report << "boundary " << failures << ' ' << nontrivial << '\n';

  rng.seed(5);
  int leibniz_failures = 0;
  for (int trial = 0; trial < kLeibnizSamples; ++trial) {
    // A chiral 2-sphere joined with a random 1-, 2- or 3-sphere class.
    SphereChain a = SphereChain::of(chiral_2_sphere(rng, 7), 1);
    OrientedComplex other = trial % 2 == 0 ? chiral_2_sphere(rng, 7) : random_sphere(3, 6 + trial % 4, rng, 7);
    SphereChain b = SphereChain::of(other, 1 + trial % 3);
    SphereChain lhs = boundary_t(join_product_t(a, b));
    SphereChain rhs = join_product_t(boundary_t(a), b);
    SphereChain second = join_product_t(a, boundary_t(b));
    if (a.grade() % 2 == 1) second *= -1;
    rhs += second;
    leibniz_failures += lhs == rhs ? 0 : 1;
  }
  report << "leibniz " << leibniz_failures << '\n';

  rng.seed(99);
  int move_failures = 0, move_nontrivial = 0;
  for (int samples = 0; samples < kMoveSamples; ++samples) {
    OrientedComplex host = random_sphere(2, 5 + samples % 5, rng, 8);
    auto moves = enumerate_moves(host.complex());
    Move m = moves[rng() % moves.size()];
    OrientedComplex after = apply_move(host, m);
    MoveSphere ms = sphere_from_move(host, m);
    LocalCochain f(3);
    auto touch = [&](const OrientedComplex& s) {
      if (f(s) == 0) f.set(s, Rational(static_cast<long>(rng() % 9) + 1, 1 + static_cast<long>(rng() % 3)));
    };
    touch(host);
    touch(after);
    for (Vertex v : ms.sphere.complex().vertices()) touch(link(ms.sphere, Simplex{v}));
    for (const auto& im : induced_vertex_moves(m)) {
      touch(sphere_from_move(link(host, Simplex{im.vertex}), im.move, false).sphere);
    }
    CochainFn fn = f.fn();
    Rational d = fn(after) - fn(host);
    EdgeCochainFn sf = [&](const OrientedComplex& h, const Move& mv) { return s_eval(fn, 3, h, mv); };
    Rational rhs = delta_edge_eval(sf, host, m) - s_eval(delta(fn, 3), 4, host, m);
    move_failures += d == rhs ? 0 : 1;
    move_nontrivial += d != 0 ? 1 : 0;
  }
  report << "d " << move_failures << ' ' << move_nontrivial << '\n';

  rng.seed(17);
  LocalCochain f(3);
  std::vector<OrientedComplex> spheres;
  for (int i = 0; i < kDeltaSquaredSamples; ++i) spheres.push_back(random_sphere(4, 14 + i % 6, rng, 12));
  for (const auto& s : spheres) {
    for (Vertex v : s.complex().vertices()) {
      OrientedComplex l1 = link(s, Simplex{v});
      for (Vertex w : l1.complex().vertices()) {
        OrientedComplex l2 = link(l1, Simplex{w});
        if (f(l2) == 0) f.set(l2, Rational(static_cast<long>(rng() % 7) + 1));
      }
    }
  }
  CochainFn ddf = delta(delta(f.fn(), 3), 4);
  int dd_failures = 0;
  for (const auto& s : spheres) dd_failures += ddf(s) == 0 ? 0 : 1;
  report << "dd " << dd_failures << '\n';

  Outcome o;
  o.pass = failures == 0 && nontrivial > 0 && leibniz_failures == 0 && move_failures == 0 && move_nontrivial > 0 &&
           dd_failures == 0;
  o.report = report.str();
  o.summary = "boundary^2 failures " + std::to_string(failures) + "/" + std::to_string(kBoundarySamples) +
              ", Leibniz " + std::to_string(leibniz_failures) + "/" + std::to_string(kLeibnizSamples) +
              ", d = delta s - s delta " + std::to_string(move_failures) + "/" + std::to_string(kMoveSamples) +
              ", delta^2 " + std::to_string(dd_failures) + "/" + std::to_string(kDeltaSquaredSamples);
  return o;
}

Outcome stiefel_whitney() {
  std::vector<std::pair<std::string, Complex>> inputs = {{"boundary_simplex_3", simplex_boundary(3).complex()},
                                                         {"boundary_simplex_4", simplex_boundary(4).complex()},
                                                         {"octahedron", octahedron()},
                                                         {"rp2_6", rp2_6()}};
  bool cycles = true;
  bool sphere_w1_zero = false, rp2_w1_nonzero = false;
  std::ostringstream report;
  for (const auto& [name, k] : inputs) {
    StiefelWhitneyDuals d = sw_duals(k);
    report << name;
    for (const Mod2Chain& c : d.chains) {
      bool cycle = mod2_boundary(c).simplices.empty();
      bool zero = is_mod2_boundary(d.subdivision, c);
      cycles = cycles && cycle;
      report << ' ' << c.simplices.size() << (zero ? "z" : "n");
      if (c.degree == 1 && name == "boundary_simplex_3") sphere_w1_zero = zero;
      if (c.degree == 1 && name == "rp2_6") rp2_w1_nonzero = !zero;
    }
    report << '\n';
  }
  Outcome o;
  o.pass = cycles && sphere_w1_zero && rp2_w1_nonzero;
  o.report = report.str();
  o.summary = std::string("all W_k are mod 2 cycles: ") + (cycles ? "yes" : "no") + ", W_1 zero on the 2-sphere: " +
              (sphere_w1_zero ? "yes" : "no") + ", W_1 nonzero on RP2_6: " + (rp2_w1_nonzero ? "yes" : "no");
  o.limit = kStiefelWhitneyLimit;
  return o;
}

Outcome enumeration() {
  std::map<std::size_t, std::set<std::string>> unoriented;
  for (const OrientedComplex& s : enumerate_oriented_spheres(7)) {
    unoriented[s.num_vertices()].insert(canonical_form(s.complex()).key);
  }
  std::vector<std::size_t> bistellar;
  for (const auto& [n, keys] : unoriented) bistellar.push_back(keys.size());
  std::vector<std::size_t> brute = testing::brute_force_sphere_counts(7);
  std::vector<std::size_t> expected{1, 1, 2, 5};
  auto join = [](const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
  };
  Outcome o;
  o.pass = bistellar == expected && brute == expected;
  o.report = join(bistellar) + " " + join(brute) + "\n";
  o.summary = "bistellar " + join(bistellar) + ", brute force " + join(brute) + " (expected 1,1,2,5)";
  o.limit = kEnumerationLimit;
  return o;
}

Outcome gamma1_path() {
  bool ok = true;
  std::ostringstream report;
  std::vector<std::string> up(kMaxPolygon + 1);
  for (int k = 3; k <= kMaxPolygon; ++k) {
    OrientedComplex p = testing::polygon(k);
    std::set<std::pair<std::string, int>> ups, downs;
    for (const Move& m : enumerate_moves(p.complex())) {
      EdgeKey e = edge_key(p, m);
      OrientedComplex q = apply_move(p, m);
      int delta = static_cast<int>(q.num_vertices()) - k;
      ok = ok && e.essential() && (delta == 1 || delta == -1);
      (delta == 1 ? ups : downs).insert({e.key, e.sign});
    }
    ok = ok && ups.size() == 1;
    up[k] = ups.begin()->first;
    ok = ok && ups.begin()->second == 1;
    if (k == 3) {
      ok = ok && downs.empty();
    } else {
      ok = ok && downs.size() == 1 && downs.begin()->first == up[k - 1] && downs.begin()->second == -1;
    }
    report << k << ' ' << ups.size() << ' ' << downs.size() << '\n';
  }
  std::set<std::string> distinct(up.begin() + 3, up.end());
  ok = ok && distinct.size() == static_cast<std::size_t>(kMaxPolygon - 2);
  Outcome o;
  o.pass = ok;
  o.report = report.str();
  o.summary = std::string("polygons 3..") + std::to_string(kMaxPolygon) +
              ": one edge class from k to k+1 and no other edges: " + (ok ? "yes" : "no");
  return o;
}

std::string cli_output(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_command(args, out, err);
  return std::to_string(code) + "\n" + out.str();
}

struct Criterion {
  int number;
  std::string name;
  std::function<Outcome()> run;
};

Outcome timed(const Criterion& c) {
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.pass = false;
    o.summary = std::string("exception: ") + e.what();
    o.report = o.summary;
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (o.limit > 0 && o.seconds > o.limit) {
    o.pass = false;
    o.summary += " [over the time limit]";
  }
  return o;
}

void print(int number, const std::string& name, const Outcome& o) {
  std::cout << "criterion " << number << " (" << name << "): " << (o.pass ? "PASS" : "FAIL") << "  " << o.summary
            << "  [" << std::fixed << std::setprecision(1) << o.seconds << " s";
  if (o.limit > 0) std::cout << ", limit " << o.limit << " s";
  std::cout << "]" << std::endl;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "calibration on CP2_9", calibration},
      {2, "local and direct dual cycles", dual_procedures},
      {3, "seed independence of the local formula", well_definedness},
      {4, "cycle decomposition suite", loop_suite},
      {5, "algebraic identities", algebraic_identities},
      {6, "Stiefel-Whitney chains", stiefel_whitney},
      {7, "enumeration oracle", enumeration},
      {8, "move graph of 1-spheres", gamma1_path},
  };
  bool all = true;
  std::vector<std::string> reports;
  for (const Criterion& c : criteria) {
    Outcome o = timed(c);
    print(c.number, c.name, o);
    all = all && o.pass;
    reports.push_back(o.report);
  }

  Criterion rerun{9, "determinism", [&] {
                    Outcome o;
                    int same = 0;
                    for (std::size_t i = 0; i < criteria.size(); ++i) {
                      same += timed(criteria[i]).report == reports[i] ? 1 : 0;
                    }
                    std::vector<std::vector<std::string>> commands = {
                        {"p1", "local", "cp2_9", "--format", "json"},
                        {"gamma2", "decompose", "--seed", "5", "--policy", "alternate"},
                        {"reduce", "cross_polytope_4", "--seed", "3"},
                        {"enumerate-spheres", "--max-vertices", "8"}};
                    int same_cli = 0;
                    for (const auto& args : commands) same_cli += cli_output(args) == cli_output(args) ? 1 : 0;
                    o.pass = same == static_cast<int>(criteria.size()) && same_cli == static_cast<int>(commands.size());
                    o.summary = std::to_string(same) + "/" + std::to_string(criteria.size()) +
                                " criterion reports identical on rerun, " + std::to_string(same_cli) + "/" +
                                std::to_string(commands.size()) + " CLI reports byte-identical";
                    return o;
                  }};
  Outcome o = timed(rerun);
  print(rerun.number, rerun.name, o);
  all = all && o.pass;
  std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL") << std::endl;
  return all ? 0 : 1;
}
