// The graph of oriented 2-spheres and their move classes: complexity
// stratification, elementary cycles, the cocycle values on them, and the
// decomposition of arbitrary cycles into elementary ones.
//
// Complexities are handled in sixths of a unit: a sphere with k vertices has
// complexity 6k, 6k+2 or 6k+4 (minimal degree 3, 4, at least 5); an edge
// joining spheres of different complexity sits at the larger value, an edge
// joining spheres of equal complexity a sits at a+1.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "localp1/canonical.hpp"
#include "localp1/complex.hpp"
#include "localp1/pachner.hpp"
#include "localp1/rational.hpp"

namespace localp1 {

Rational sphere_complexity(const Complex& sphere);
Rational move_complexity(const OrientedComplex& host, const Move& m);
long edge_level_sixths(long tail_sixths, long head_sixths);

// A 1-chain of the move graph: edge key -> coefficient. Inessential moves are
// silently dropped by add().
class Gamma2Chain {
 public:
  void add(const EdgeKey& edge, const Rational& c);
  void add(const std::string& key, const Rational& c);
  Rational coefficient(const std::string& key) const;
  const std::map<std::string, Rational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  Gamma2Chain& operator+=(const Gamma2Chain& o);
  Gamma2Chain& operator-=(const Gamma2Chain& o);
  Gamma2Chain& operator*=(const Rational& s);
  friend Gamma2Chain operator+(Gamma2Chain a, const Gamma2Chain& b) { return a += b; }
  friend Gamma2Chain operator-(Gamma2Chain a, const Gamma2Chain& b) { return a -= b; }
  friend Gamma2Chain operator*(Gamma2Chain a, const Rational& s) { return a *= s; }
  friend bool operator==(const Gamma2Chain&, const Gamma2Chain&) = default;

 private:
  std::map<std::string, Rational> terms_;
};

enum class CycleKind { CommA, CommB, CommC, CommD, CommE, CommF, CommG, CommH, CommI, SpecA, SpecB, SpecC };
std::string_view to_string(CycleKind kind);

Rational pair_weight(long p, long q);
Rational corner_weight(long p);
// Tabulated cocycle value; throws InvalidParams on negative or missing counts.
Rational c_value(CycleKind kind, const std::vector<long>& params);

struct ElementaryCycle {
  CycleKind kind = CycleKind::CommA;
  std::vector<long> params;
  int sign = 1;  // the chain is sign times the tabulated configuration
  Gamma2Chain chain;
  OrientedComplex base;     // where the loop starts
  std::vector<Move> moves;  // consecutive moves of the loop, starting at base
  Rational value() const { return sign * c_value(kind, params); }
};

// Classifies the commutation of two independent moves at the sphere by
// locating the standard corner of the square. Returns (kind, params, sign).
struct Classification {
  CycleKind kind = CycleKind::CommA;
  std::vector<long> params;
  int sign = 1;
};
Classification classify_commutation(const OrientedComplex& sphere, const Move& first, const Move& second);

enum class DecompositionPolicy { Primary, Alternate };

struct DecompositionTerm {
  Rational coefficient;
  ElementaryCycle cycle;
};

// Registry of sphere and edge classes together with the memoized
// decomposition rules. Each essential edge class gets one rule: either an
// elementary cycle in which it is the only edge at its level, or (for edges
// leaving the top sphere of their level) an elementary cycle tying it to
// another edge at the same sphere, forming a spanning tree rooted at a
// chosen edge. The rules define a gauge value per edge whose pairing with
// any cycle equals the cocycle value obtained from the explicit
// decomposition. All methods are thread safe (serialized).
class Gamma2 {
 public:
  explicit Gamma2(DecompositionPolicy policy = DecompositionPolicy::Primary);
  Gamma2(const Gamma2&) = delete;
  Gamma2& operator=(const Gamma2&) = delete;

  DecompositionPolicy policy() const noexcept { return policy_; }

  struct EdgeInfo {
    OrientedComplex tail;  // canonical representative of the tail sphere
    Move move;             // the move on tail in canonical direction
    std::string tail_key, head_key;
    long tail_sixths = 0, head_sixths = 0, level = 0;
  };

  // Registers the edge class of the move and returns its key.
  EdgeKey edge(const OrientedComplex& host, const Move& m);
  const EdgeInfo& info(const std::string& key);
  long sphere_sixths(const std::string& sphere_key);
  OrientedComplex sphere_representative(const std::string& sphere_key);
  std::string sphere_key(const OrientedComplex& sphere);
  // Image of an edge under orientation reversal: (key, sign).
  std::pair<std::string, int> mirror_edge(const std::string& key);

  // Boundary as a 0-chain: head minus tail per unit of coefficient.
  std::map<std::string, Rational> boundary(const Gamma2Chain& chain);

  ElementaryCycle commutation_cycle(const OrientedComplex& sphere, const Simplex& first, const Simplex& second);
  // Insertion into the triangle at degree-3 vertex w, a flip, and removal of w.
  ElementaryCycle special_a(const OrientedComplex& root, Vertex w, int start, bool mirrored);
  // Rotation of the star of a degree-4 vertex in five moves.
  ElementaryCycle special_b(const OrientedComplex& root, Vertex m, int start, bool mirrored);
  // The five flips of a pentagon triangulated as a fan around center.
  ElementaryCycle special_c(const OrientedComplex& root, Vertex center, int start);

  // Gauge value of an edge class (memoized rule evaluation).
  Rational gauge(const std::string& edge_key);
  Rational pair_with_gauge(const Gamma2Chain& chain);

  // Explicit decomposition; the result sums exactly to the input chain.
  std::vector<DecompositionTerm> decompose(const Gamma2Chain& cycle);
  // <c, cycle> through the decomposition.
  Rational evaluate(const Gamma2Chain& cycle);

  std::size_t edge_count() const;
  std::size_t rule_count() const;

  // Gauge values for persistence.
  std::map<std::string, Rational> gauge_table() const;
  void preload_gauge(const std::map<std::string, Rational>& table);

 private:
  struct Rule {
    ElementaryCycle cycle;
    Rational multiplicity;      // coefficient of the edge itself in the cycle
    std::string parent;  // partner edge at the same sphere (empty otherwise)
    Rational parent_multiplicity;
    int depth = 0;       // tree depth for sphere rules, 0 for roots and odd rules
    bool root = false;
  };

  const OrientedCanonical& canonical_locked(const OrientedComplex& k);
  EdgeKey edge_locked(const OrientedComplex& host, const Move& m);
  long sixths_of_locked(const OrientedComplex& k);
  const Rule& rule_locked(const std::string& key);
  void build_edge_rule(const std::string& key);
  void build_sphere_rules(const std::string& sphere_key);
  Rational gauge_locked(const std::string& key);
  bool all_lower(const Gamma2Chain& chain, long level, const std::vector<std::string>& allowed);

  ElementaryCycle commutation_locked(const OrientedComplex& sphere, const Simplex& first, const Simplex& second);
  ElementaryCycle special_a_locked(const OrientedComplex& root, Vertex w, int start, bool mirrored);
  ElementaryCycle special_b_locked(const OrientedComplex& root, Vertex m, int start, bool mirrored);
  ElementaryCycle special_c_locked(const OrientedComplex& root, Vertex center, int start);
  ElementaryCycle loop_cycle(const OrientedComplex& base, const std::vector<Move>& moves, bool exact_closure);

  DecompositionPolicy policy_;
  mutable std::recursive_mutex mutex_;
  std::unordered_map<std::string, std::unique_ptr<OrientedCanonical>> canon_;
  std::map<std::string, EdgeInfo> edges_;
  std::map<std::string, long> sphere_sixths_;
  std::map<std::string, OrientedComplex> sphere_rep_;
  std::map<std::string, Rule> rules_;
  std::map<std::string, Rational> gauge_;
  std::map<std::string, std::pair<std::string, int>> mirror_;
};

// A closed walk in the move graph: consecutive moves starting at base.
struct MoveLoop {
  OrientedComplex base;
  std::vector<Move> moves;
};
// Random moves from the tetrahedron boundary staying at complexity at most
// max_sixths, then a random complexity-decreasing walk back down.
MoveLoop random_move_loop(std::uint64_t seed, long max_sixths, int steps);
// The 1-chain of a loop; throws NotClosedCycle when it does not close up.
Gamma2Chain loop_chain(Gamma2& g, const MoveLoop& loop);

// Free-function forms.
std::vector<DecompositionTerm> decompose_cycle(Gamma2& g, const Gamma2Chain& cycle);
Rational c_of_cycle(Gamma2& g, const Gamma2Chain& cycle);

}  // namespace localp1
