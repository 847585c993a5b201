// The graded algebra of oriented combinatorial spheres over the rationals:
// chains of sphere classes, the vertex-link differential, the join product,
// local cochains and the simplicial chains they produce on manifolds.
//
// Grading: a class <L> of an oriented (g-1)-sphere L has grade g.
#pragma once

#include <functional>
#include <map>
#include <string>

#include "localp1/canonical.hpp"
#include "localp1/complex.hpp"
#include "localp1/pachner.hpp"
#include "localp1/rational.hpp"

namespace localp1 {

// Normal form of an oriented sphere class: the lesser of the keys of L and
// -L, with sign -1 when that is the key of -L. sign 0 when L admits an
// orientation reversing automorphism (the class is 2-torsion).
struct NormalClass {
  std::string key;
  int sign = 0;
  OrientedComplex representative;  // canonical representative of the stored class
};
NormalClass normal_class(const OrientedComplex& sphere);

class SphereChain {
 public:
  explicit SphereChain(int grade = 0) : grade_(grade) {}
  static SphereChain of(const OrientedComplex& sphere, const Rational& coefficient = 1);

  int grade() const noexcept { return grade_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  void add(const OrientedComplex& sphere, const Rational& coefficient);
  // Coefficient of the class of the sphere (sign-adjusted).
  Rational coefficient(const OrientedComplex& sphere) const;

  struct Term {
    Rational coefficient;
    OrientedComplex representative;
  };
  const std::map<std::string, Term>& terms() const noexcept { return terms_; }

  SphereChain& operator+=(const SphereChain& other);
  SphereChain& operator-=(const SphereChain& other);
  SphereChain& operator*=(const Rational& s);
  friend SphereChain operator+(SphereChain a, const SphereChain& b) { return a += b; }
  friend SphereChain operator-(SphereChain a, const SphereChain& b) { return a -= b; }
  friend bool operator==(const SphereChain& a, const SphereChain& b);

 private:
  void add_normal(const std::string& key, const Rational& c, const OrientedComplex& rep);

  int grade_;
  std::map<std::string, Term> terms_;
};

SphereChain boundary_t(const SphereChain& x);
SphereChain join_product_t(const SphereChain& x, const SphereChain& y);

// A cochain is any function on oriented spheres of one dimension; tables are
// the finitely supported case.
using CochainFn = std::function<Rational(const OrientedComplex&)>;

class LocalCochain {
 public:
  explicit LocalCochain(int grade = 0) : grade_(grade) {}
  int grade() const noexcept { return grade_; }
  // Sets f(<L>) = value (and so f(<-L>) = -value). Ignored for torsion classes.
  void set(const OrientedComplex& sphere, const Rational& value);
  Rational operator()(const OrientedComplex& sphere) const;
  const std::map<std::string, Rational>& table() const noexcept { return table_; }
  CochainFn fn() const;

 private:
  int grade_;
  std::map<std::string, Rational> table_;
};

// (delta f)(<L>) = (-1)^g sum over vertices of f(<link v>), for f of grade g
// and L a g-sphere.
Rational delta_eval(const CochainFn& f, int grade, const OrientedComplex& sphere);
CochainFn delta(const CochainFn& f, int grade);

// Chain on a manifold: coefficient of each simplex in ascending orientation.
class SimplicialChain {
 public:
  SimplicialChain() = default;
  explicit SimplicialChain(int degree) : degree_(degree) {}
  int degree() const noexcept { return degree_; }
  // Adds c times the simplex written in the given vertex order.
  void add(std::span<const Vertex> ordered, const Rational& c);
  void add(const Simplex& s, const Rational& c);
  Rational coefficient(const Simplex& s) const;
  const std::map<Simplex, Rational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Rational total() const;
  SimplicialChain boundary() const;
  SimplicialChain& operator+=(const SimplicialChain& o);
  SimplicialChain& operator-=(const SimplicialChain& o);
  friend bool operator==(const SimplicialChain& a, const SimplicialChain& b) {
    return a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

 private:
  int degree_ = 0;
  std::map<Simplex, Rational> terms_;
};

// f_sharp(K) = sum over simplices s of dimension m-g of f(<link s>) s.
SimplicialChain f_sharp(const CochainFn& f, int grade, const OrientedComplex& manifold);

// The sphere L_m for a move m on an (n-1)-sphere: the vertex set of the
// move plus two new vertices u1, u2, oriented so that link(u2) = +L2.
struct MoveSphere {
  OrientedComplex sphere;
  Vertex u1 = 0;
  Vertex u2 = 0;
};
MoveSphere sphere_from_move(const OrientedComplex& host, const Move& m, bool verify = true);

// s(f)({m}) = (-1)^(g-2) f(<L_m>) for f of grade g and m a move of
// (g-2)-spheres.
Rational s_eval(const CochainFn& f, int grade, const OrientedComplex& host, const Move& m);

// Cochains on moves: h(host, move).
using EdgeCochainFn = std::function<Rational(const OrientedComplex&, const Move&)>;
// (delta h)({m}) = (-1)^(n-1) sum over v in U(m) of h({m_v}) for
// m a move of n-spheres.
Rational delta_edge_eval(const EdgeCochainFn& h, const OrientedComplex& host, const Move& m);

// Sum over vertices of <link v>; throws NotClosedCycle if its boundary is nonzero.
SphereChain alpha_cycle(const OrientedComplex& manifold);

}  // namespace localp1
