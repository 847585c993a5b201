// The first rational Pontryagin class of combinatorial manifolds through
// the cocycle on the move graph of 2-spheres: the averaged chains xi_chain, the
// local formula on 3-spheres, the two dual-cycle procedures, and the
// mod-2 Stiefel-Whitney chains of the barycentric subdivision.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "localp1/gamma2.hpp"
#include "localp1/pachner.hpp"
#include "localp1/talgebra.hpp"

namespace localp1 {

// Memoized averaged chains: xi_chain(L) has boundary {L} - {tetrahedron
// boundary} and equals (1/r) sum_j (xi_chain(L_j) - {m_j}) over the r moves
// m_j decreasing the complexity of L. Both the explicit chains and their
// pairings with the gauge of the registry are cached; the pairings are
// persisted to disk together with the gauge table. Thread safe.
class XiCache {
 public:
  explicit XiCache(Gamma2& registry) : registry_(registry) {}
  XiCache(const XiCache&) = delete;
  XiCache& operator=(const XiCache&) = delete;

  Gamma2& registry() noexcept { return registry_; }

  // Explicit chain; computed on the lesser orientation and mirrored.
  Gamma2Chain xi_chain(const OrientedComplex& sphere);
  // Pairing of xi_chain(sphere) with the gauge (no explicit chains needed).
  Rational xi_pairing(const OrientedComplex& sphere);

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return gauge_.size();
  }

  // JSON persistence of the gauge table and the pairings. load() ignores
  // a missing file and throws ParseError on a malformed one.
  void load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  Gamma2Chain xi_chain_key(const std::string& key);
  Rational xi_pairing_key(const std::string& key);

  Gamma2& registry_;
  mutable std::recursive_mutex mutex_;
  std::map<std::string, Gamma2Chain> chains_;
  std::map<std::string, Rational> gauge_;
};

// h({m}) = <c, {m} + xi_chain(L) - xi_chain(m(L))> for a move m on L.
Rational h_value(XiCache& cache, const OrientedComplex& sphere, const Move& m);

struct LocalFormulaResult {
  Rational value;
  Reduction reduction;       // the certificate from the link to the simplex boundary
  Gamma2Chain induced;       // induced: induced vertex moves along the reversed sequence
  std::vector<std::string> link_keys;  // sphere keys of the vertex links of the start
};

// f(<L>) for an oriented combinatorial 3-sphere.
LocalFormulaResult local_formula(XiCache& cache, const OrientedComplex& sphere, const ReduceOptions& opt = {});
Rational local_f(XiCache& cache, const OrientedComplex& sphere, const ReduceOptions& opt = {});
// The full cycle: induced minus the sum over vertices v of xi_chain(link v).
Gamma2Chain local_cycle(XiCache& cache, const LocalFormulaResult& result);

struct DualOptions {
  ReduceOptions reduce;
  int jobs = 1;
};

// Sum over codimension-4 simplices s of f(<link s>) s; asserted to be a cycle.
SimplicialChain p1_dual_local(XiCache& cache, const OrientedComplex& manifold, const DualOptions& opt = {});
// Non-local variant: one reduction per codimension-3 and -4 simplex.
SimplicialChain p1_dual_direct(XiCache& cache, const OrientedComplex& manifold, const DualOptions& opt = {});
// Coefficient sum of the dual 0-cycle of a 4-manifold.
Rational p1_number(XiCache& cache, const OrientedComplex& manifold, const DualOptions& opt = {});

// Exact linear algebra over the rationals: is the chain (of degree d on the
// manifold) the boundary of some (d+1)-chain?
bool is_rational_boundary(const Complex& k, const SimplicialChain& chain);

// Signature of the cup-product pairing on H^2 of an oriented 4-manifold.
int signature(const OrientedComplex& manifold);

// Mod-2 chains: sets of simplices.
struct Mod2Chain {
  int degree = 0;
  std::vector<Simplex> simplices;  // sorted
};
Mod2Chain mod2_boundary(const Mod2Chain& c);
bool is_mod2_boundary(const Complex& k, const Mod2Chain& c);

struct StiefelWhitneyDuals {
  Complex subdivision;              // K'
  std::vector<Simplex> vertex_face;  // face of K at each vertex of K'
  std::vector<Mod2Chain> chains;     // W_0 .. W_n
};
// Throws NotClosedManifold when K is not a closed pseudomanifold.
StiefelWhitneyDuals sw_duals(const Complex& k);

}  // namespace localp1
