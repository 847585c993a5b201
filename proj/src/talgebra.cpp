#include "localp1/talgebra.hpp"

#include "localp1/error.hpp"

namespace localp1 {

NormalClass normal_class(const OrientedComplex& sphere) {
  OrientedCanonical c(sphere, true);
  if (c.self_mirror()) return {c.key(), 0, c.representative(sphere)};
  if (c.key() < c.mirror_key()) return {c.key(), 1, c.representative(sphere)};
  OrientedComplex rev = sphere.reversed();
  OrientedCanonical r(rev, false);
  return {r.key(), -1, r.representative(rev)};
}

SphereChain SphereChain::of(const OrientedComplex& sphere, const Rational& coefficient) {
  SphereChain out(sphere.dimension() + 1);
  out.add(sphere, coefficient);
  return out;
}

void SphereChain::add_normal(const std::string& key, const Rational& c, const OrientedComplex& rep) {
  if (c == 0) return;
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(key, Term{c, rep});
    return;
  }
  it->second.coefficient += c;
  if (it->second.coefficient == 0) terms_.erase(it);
}

void SphereChain::add(const OrientedComplex& sphere, const Rational& coefficient) {
  if (sphere.dimension() + 1 != grade_) throw Error(ErrorKind::InvalidParams, "sphere grade differs from chain grade");
  if (coefficient == 0) return;
  NormalClass nc = normal_class(sphere);
  if (nc.sign == 0) return;
  add_normal(nc.key, coefficient * nc.sign, nc.representative);
}

Rational SphereChain::coefficient(const OrientedComplex& sphere) const {
  NormalClass nc = normal_class(sphere);
  if (nc.sign == 0) return 0;
  auto it = terms_.find(nc.key);
  return it == terms_.end() ? Rational(0) : Rational(it->second.coefficient * nc.sign);
}

SphereChain& SphereChain::operator+=(const SphereChain& other) {
  for (const auto& [key, t] : other.terms_) add_normal(key, t.coefficient, t.representative);
  return *this;
}

SphereChain& SphereChain::operator-=(const SphereChain& other) {
  for (const auto& [key, t] : other.terms_) add_normal(key, -t.coefficient, t.representative);
  return *this;
}

SphereChain& SphereChain::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, t] : terms_) t.coefficient *= s;
  return *this;
}

bool operator==(const SphereChain& a, const SphereChain& b) {
  if (a.grade_ != b.grade_ || a.terms_.size() != b.terms_.size()) return false;
  for (const auto& [key, t] : a.terms_) {
    auto it = b.terms_.find(key);
    if (it == b.terms_.end() || it->second.coefficient != t.coefficient) return false;
  }
  return true;
}

SphereChain boundary_t(const SphereChain& x) {
  if (x.grade() < 1) throw Error(ErrorKind::InvalidParams, "boundary needs grade at least 1");
  SphereChain out(x.grade() - 1);
  if (x.grade() == 1) return out;
  for (const auto& [key, t] : x.terms()) {
    for (Vertex v : t.representative.complex().vertices()) out.add(link(t.representative, Simplex{v}), t.coefficient);
  }
  return out;
}

SphereChain join_product_t(const SphereChain& x, const SphereChain& y) {
  SphereChain out(x.grade() + y.grade());
  for (const auto& [kx, tx] : x.terms()) {
    for (const auto& [ky, ty] : y.terms()) {
      out.add(join(tx.representative, ty.representative), tx.coefficient * ty.coefficient);
    }
  }
  return out;
}

void LocalCochain::set(const OrientedComplex& sphere, const Rational& value) {
  if (sphere.dimension() + 1 != grade_) throw Error(ErrorKind::InvalidParams, "sphere grade differs from cochain grade");
  NormalClass nc = normal_class(sphere);
  if (nc.sign == 0) return;
  if (value == 0) {
    table_.erase(nc.key);
  } else {
    table_[nc.key] = value * nc.sign;
  }
}

Rational LocalCochain::operator()(const OrientedComplex& sphere) const {
  if (table_.empty()) return 0;
  NormalClass nc = normal_class(sphere);
  if (nc.sign == 0) return 0;
  auto it = table_.find(nc.key);
  return it == table_.end() ? Rational(0) : Rational(it->second * nc.sign);
}

CochainFn LocalCochain::fn() const {
  LocalCochain copy = *this;
  return [copy](const OrientedComplex& s) { return copy(s); };
}

Rational delta_eval(const CochainFn& f, int grade, const OrientedComplex& sphere) {
  if (sphere.dimension() != grade) throw Error(ErrorKind::InvalidParams, "delta of a grade g cochain evaluates g-spheres");
  Rational sum = 0;
  for (Vertex v : sphere.complex().vertices()) sum += f(link(sphere, Simplex{v}));
  return grade % 2 == 0 ? sum : Rational(-sum);
}

CochainFn delta(const CochainFn& f, int grade) {
  return [f, grade](const OrientedComplex& s) { return delta_eval(f, grade, s); };
}

void SimplicialChain::add(const Simplex& s, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(s, c);
  if (inserted) return;
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

void SimplicialChain::add(std::span<const Vertex> ordered, const Rational& c) {
  add(Simplex::from_unsorted(ordered), permutation_sign(ordered) > 0 ? c : Rational(-c));
}

Rational SimplicialChain::coefficient(const Simplex& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational SimplicialChain::total() const {
  Rational sum = 0;
  for (const auto& [s, c] : terms_) sum += c;
  return sum;
}

SimplicialChain SimplicialChain::boundary() const {
  SimplicialChain out(degree_ - 1);
  if (degree_ == 0) return out;
  for (const auto& [s, c] : terms_) {
    for (std::size_t i = 0; i < s.size(); ++i) out.add(s.without_index(i), i % 2 == 0 ? c : Rational(-c));
  }
  return out;
}

SimplicialChain& SimplicialChain::operator+=(const SimplicialChain& o) {
  for (const auto& [s, c] : o.terms_) add(s, c);
  return *this;
}

SimplicialChain& SimplicialChain::operator-=(const SimplicialChain& o) {
  for (const auto& [s, c] : o.terms_) add(s, -c);
  return *this;
}

SimplicialChain f_sharp(const CochainFn& f, int grade, const OrientedComplex& manifold) {
  int m = manifold.dimension();
  if (m < grade - 1 + 0 || m - grade < 0) throw Error(ErrorKind::DimensionTooSmall, "manifold dimension below cochain grade");
  SimplicialChain out(m - grade);
  for (const Simplex& s : manifold.complex().faces_of_dim(m - grade)) out.add(s, f(link(manifold, s)));
  return out;
}

MoveSphere sphere_from_move(const OrientedComplex& host, const Move& m, bool verify) {
  OrientedComplex l2 = apply_move(host, m);
  Vertex top = std::max(host.complex().max_vertex(), l2.complex().max_vertex());
  MoveSphere out;
  out.u1 = top + 1;
  out.u2 = top + 2;
  std::vector<Simplex> facets;
  for (const Simplex& f : host.facets()) facets.push_back(f.with(out.u1));
  for (const Simplex& f : l2.facets()) facets.push_back(f.with(out.u2));
  facets.push_back(m.face.unite(m.complement));
  Complex k(std::move(facets));
  auto o = orient(k);
  if (!o) throw Error(ErrorKind::SphereCheckFailed, "L_beta is not orientable");
  const Simplex& rest = l2.facets().front();
  int want = l2.signs().front() * concatenation_sign(Simplex{out.u2}, rest);
  out.sphere = (o->sign_of(rest.with(out.u2)) == want) ? *o : o->reversed();
  if (!(link(out.sphere, Simplex{out.u2}) == l2) || !(link(out.sphere, Simplex{out.u1}) == host.reversed())) {
    throw Error(ErrorKind::SphereCheckFailed, "links of u1, u2 do not match the move endpoints");
  }
  if (verify && out.sphere.dimension() <= 3) {
    if (is_combinatorial_sphere(out.sphere.complex()).verdict != SphereVerdict::Yes) {
      throw Error(ErrorKind::SphereCheckFailed, "L_beta failed the sphere check");
    }
  }
  return out;
}

Rational s_eval(const CochainFn& f, int grade, const OrientedComplex& host, const Move& m) {
  if (host.dimension() != grade - 2) throw Error(ErrorKind::InvalidParams, "s of a grade g cochain evaluates moves of (g-2)-spheres");
  Rational v = f(sphere_from_move(host, m, false).sphere);
  return grade % 2 == 0 ? v : Rational(-v);
}

Rational delta_edge_eval(const EdgeCochainFn& h, const OrientedComplex& host, const Move& m) {
  Rational sum = 0;
  for (const InducedMove& im : induced_vertex_moves(m)) sum += h(link(host, Simplex{im.vertex}), im.move);
  return host.dimension() % 2 == 1 ? sum : Rational(-sum);
}

SphereChain alpha_cycle(const OrientedComplex& manifold) {
  SphereChain out(manifold.dimension());
  for (Vertex v : manifold.complex().vertices()) out.add(link(manifold, Simplex{v}), 1);
  if (out.grade() >= 1 && !boundary_t(out).is_zero()) throw Error(ErrorKind::NotClosedCycle, "sum of vertex links has nonzero boundary");
  return out;
}

}  // namespace localp1
