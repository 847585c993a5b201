#include "localp1/gamma2.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <set>

#include "localp1/error.hpp"

namespace localp1 {

namespace {

constexpr long kUnit = 6;

std::string fingerprint(const OrientedComplex& k) {
  std::string out;
  out.reserve(k.facets().size() * 8);
  for (std::size_t i = 0; i < k.facets().size(); ++i) {
    for (Vertex v : k.facets()[i]) {
      out.push_back(static_cast<char>((v >> 8) & 0xFF));
      out.push_back(static_cast<char>(v & 0xFF));
    }
    out.push_back(k.signs()[i] > 0 ? '+' : '-');
  }
  return out;
}

bool is_soft_failure(const Error& e) {
  return e.kind() == ErrorKind::NotApplicable || e.kind() == ErrorKind::UnrecognizedConfiguration ||
         e.kind() == ErrorKind::InvalidMove;
}

// The move with the given face on k, if any; an insertion gets the fresh vertex.
std::optional<Move> move_at(const OrientedComplex& k, const Simplex& face) {
  if (!k.complex().has_face(face)) return std::nullopt;
  if (static_cast<int>(face.size()) == k.dimension() + 1) return Move{face, Simplex{fresh_vertex(k.complex())}};
  Complex lk = link(k.complex(), face);
  std::set<Vertex> verts(lk.vertices().begin(), lk.vertices().end());
  if (verts.size() + face.size() != static_cast<std::size_t>(k.dimension() + 2)) return std::nullopt;
  Simplex complement = Simplex::from_unsorted(std::vector<Vertex>(verts.begin(), verts.end()));
  Move m{face, complement};
  if (!is_valid_move(k.complex(), m)) return std::nullopt;
  return m;
}

// Successor map of the positively oriented link cycle of v in a 2-sphere.
std::map<Vertex, Vertex> link_successor(const OrientedComplex& k, Vertex v) {
  std::map<Vertex, Vertex> next;
  for (std::size_t i = 0; i < k.facets().size(); ++i) {
    const Simplex& f = k.facets()[i];
    int pos = f.index_of(v);
    if (pos < 0) continue;
    Simplex rest = f.without(v);
    int orientation = k.signs()[i] * (pos % 2 == 0 ? 1 : -1);
    if (orientation > 0) {
      next[rest[0]] = rest[1];
    } else {
      next[rest[1]] = rest[0];
    }
  }
  return next;
}

// Positive link cycle of v, starting at its least neighbor.
std::vector<Vertex> link_cycle(const OrientedComplex& k, Vertex v) {
  auto next = link_successor(k, v);
  std::vector<Vertex> out;
  if (next.empty()) return out;
  Vertex start = next.begin()->first;
  Vertex cur = start;
  do {
    out.push_back(cur);
    cur = next.at(cur);
  } while (cur != start && out.size() <= next.size());
  return out;
}

int degree(const OrientedComplex& k, Vertex v) { return k.complex().facet_degree(v); }

enum class MoveType { Insertion, Flip, Removal };

MoveType type_of(const Move& m) {
  if (m.face.size() == 3) return MoveType::Insertion;
  if (m.face.size() == 2) return MoveType::Flip;
  return MoveType::Removal;
}

std::vector<Simplex> region_of(const Move& m) {
  if (type_of(m) == MoveType::Insertion) return {m.face};
  return {m.face.with(m.complement[0]), m.face.with(m.complement[1])};
}

std::set<Vertex> vertices_of(const std::vector<Simplex>& region) {
  std::set<Vertex> out;
  for (const Simplex& s : region) out.insert(s.begin(), s.end());
  return out;
}

// The arc (first, last) of the link cycle of v covered by region triangles.
std::pair<Vertex, Vertex> arc_at(const OrientedComplex& k, Vertex v, const std::vector<Simplex>& region) {
  std::map<Vertex, Vertex> edges;
  for (const Simplex& t : region) {
    if (!t.contains(v)) continue;
    Simplex rest = t.without(v);
    std::vector<Vertex> ordered{v, rest[0], rest[1]};
    if (k.sign_of_ordered(ordered) > 0) {
      edges[rest[0]] = rest[1];
    } else {
      edges[rest[1]] = rest[0];
    }
  }
  std::set<Vertex> heads;
  for (auto [a, b] : edges) heads.insert(b);
  std::optional<Vertex> first, last;
  for (auto [a, b] : edges) {
    if (!heads.count(a)) first = a;
  }
  std::set<Vertex> tails;
  for (auto [a, b] : edges) tails.insert(a);
  for (auto [a, b] : edges) {
    if (!tails.count(b)) last = b;
  }
  if (!first || !last) throw Error(ErrorKind::UnrecognizedConfiguration, "region covers the whole link");
  return {*first, *last};
}

long steps_between(const std::map<Vertex, Vertex>& next, Vertex from, Vertex to) {
  long n = 0;
  Vertex cur = from;
  while (cur != to) {
    cur = next.at(cur);
    ++n;
    if (n > static_cast<long>(next.size())) throw Error(ErrorKind::UnrecognizedConfiguration, "broken link cycle");
  }
  return n;
}

// Sector counts (p, q) around a vertex shared by the two regions.
std::pair<long, long> sector_counts(const OrientedComplex& k, Vertex v, const std::vector<Simplex>& r1,
                                    const std::vector<Simplex>& r2) {
  auto next = link_successor(k, v);
  auto [a1, b1] = arc_at(k, v, r1);
  auto [a2, b2] = arc_at(k, v, r2);
  long q = steps_between(next, b1, a2);
  long p = steps_between(next, b2, a1);
  return {p, q};
}

bool positive(const OrientedComplex& k, Vertex a, Vertex b, Vertex c) {
  std::vector<Vertex> ordered{a, b, c};
  return k.sign_of_ordered(ordered) > 0;
}

// Classification at one corner with the moves in the given order; nullopt
// when this corner/order is not the standard one.
std::optional<Classification> classify_corner(const OrientedComplex& k, const Move& m1, const Move& m2) {
  MoveType t1 = type_of(m1), t2 = type_of(m2);
  if (t1 == MoveType::Removal || t2 == MoveType::Removal) return std::nullopt;
  if (t1 == MoveType::Flip && t2 == MoveType::Insertion) return std::nullopt;
  auto r1 = region_of(m1);
  auto r2 = region_of(m2);
  auto v1 = vertices_of(r1);
  auto v2 = vertices_of(r2);
  std::vector<Vertex> shared;
  std::set_intersection(v1.begin(), v1.end(), v2.begin(), v2.end(), std::back_inserter(shared));
  auto outside = [&](Vertex x) {
    long inside = 0;
    for (const Simplex& t : r1) inside += t.contains(x) ? 1 : 0;
    for (const Simplex& t : r2) inside += t.contains(x) ? 1 : 0;
    return static_cast<long>(degree(k, x)) - inside;
  };
  Classification out;
  if (t1 == MoveType::Insertion && t2 == MoveType::Insertion) {
    if (shared.empty()) {
      out.kind = CycleKind::CommA;
      return out;
    }
    if (shared.size() == 1) {
      auto [p, q] = sector_counts(k, shared[0], r1, r2);
      out.kind = CycleKind::CommB;
      out.params = {p, q};
      return out;
    }
    if (shared.size() == 2) {
      Vertex y = shared[0], z = shared[1];
      Vertex x = m1.face.minus(Simplex{y, z})[0];
      if (!positive(k, x, y, z)) std::swap(y, z);
      out.kind = CycleKind::CommC;
      out.params = {outside(z), outside(y)};
      return out;
    }
    return std::nullopt;
  }
  if (t1 == MoveType::Insertion && t2 == MoveType::Flip) {
    if (shared.empty()) {
      out.kind = CycleKind::CommD;
      return out;
    }
    if (shared.size() == 1) {
      Vertex v = shared[0];
      if (!m2.complement.contains(v)) return std::nullopt;
      auto [p, q] = sector_counts(k, v, r1, r2);
      out.kind = CycleKind::CommE;
      out.params = {p, q};
      return out;
    }
    if (shared.size() == 2) {
      Vertex y = shared[0], z = shared[1];
      bool boundary_edge = (m2.face.contains(y) != m2.face.contains(z)) && (m2.complement.contains(y) != m2.complement.contains(z));
      if (!boundary_edge) return std::nullopt;
      Vertex x = m1.face.minus(Simplex{y, z})[0];
      if (!positive(k, x, y, z)) std::swap(y, z);
      if (!m2.face.contains(z)) return std::nullopt;
      out.kind = CycleKind::CommF;
      out.params = {outside(z), outside(y)};
      return out;
    }
    return std::nullopt;
  }
  // Two flips.
  if (shared.empty()) {
    out.kind = CycleKind::CommG;
    return out;
  }
  if (shared.size() == 1) {
    Vertex v = shared[0];
    if (!m1.complement.contains(v) || !m2.complement.contains(v)) return std::nullopt;
    auto [p, q] = sector_counts(k, v, r1, r2);
    out.kind = CycleKind::CommH;
    out.params = {p, q};
    return out;
  }
  if (shared.size() == 2) {
    Simplex s = Simplex::from_unsorted(shared);
    Simplex e1 = m1.face.intersect(s), e2 = m2.face.intersect(s);
    if (e1.size() != 1 || e2.size() != 1 || e1 == e2) return std::nullopt;
    Vertex mark1 = e1[0], mark2 = e2[0];
    Vertex a = m1.face.without(mark1)[0];
    if (!positive(k, a, mark2, mark1)) return std::nullopt;
    out.kind = CycleKind::CommI;
    out.params = {outside(mark2), outside(mark1)};
    return out;
  }
  return std::nullopt;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
    return true;
  }
};

}  // namespace

Rational sphere_complexity(const Complex& sphere) { return make_rational(complexity_sixths(sphere), kUnit); }

long edge_level_sixths(long tail_sixths, long head_sixths) {
  return tail_sixths == head_sixths ? tail_sixths + 1 : std::max(tail_sixths, head_sixths);
}

Rational move_complexity(const OrientedComplex& host, const Move& m) {
  OrientedComplex result = apply_move(host, m);
  return make_rational(edge_level_sixths(complexity_sixths(host.complex()), complexity_sixths(result.complex())), kUnit);
}

void Gamma2Chain::add(const EdgeKey& edge, const Rational& c) {
  if (!edge.essential()) return;
  add(edge.key, edge.sign * c);
}

void Gamma2Chain::add(const std::string& key, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational Gamma2Chain::coefficient(const std::string& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

Gamma2Chain& Gamma2Chain::operator+=(const Gamma2Chain& o) {
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

Gamma2Chain& Gamma2Chain::operator-=(const Gamma2Chain& o) {
  for (const auto& [k, c] : o.terms_) add(k, -c);
  return *this;
}

Gamma2Chain& Gamma2Chain::operator*=(const Rational& s) {
  if (s == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= s;
  return *this;
}

std::string_view to_string(CycleKind kind) {
  switch (kind) {
    case CycleKind::CommA: return "Comm-a";
    case CycleKind::CommB: return "Comm-b";
    case CycleKind::CommC: return "Comm-c";
    case CycleKind::CommD: return "Comm-d";
    case CycleKind::CommE: return "Comm-e";
    case CycleKind::CommF: return "Comm-f";
    case CycleKind::CommG: return "Comm-g";
    case CycleKind::CommH: return "Comm-h";
    case CycleKind::CommI: return "Comm-i";
    case CycleKind::SpecA: return "Spec-a";
    case CycleKind::SpecB: return "Spec-b";
    case CycleKind::SpecC: return "Spec-c";
  }
  return "unknown";
}

Rational pair_weight(long p, long q) {
  long s = p + q;
  return make_rational(q - p, (s + 2) * (s + 3) * (s + 4));
}

Rational corner_weight(long p) { return make_rational(1, (p + 2) * (p + 3)); }

Rational c_value(CycleKind kind, const std::vector<long>& params) {
  auto need = [&](std::size_t n) {
    if (params.size() < n) throw Error(ErrorKind::InvalidParams, std::string(to_string(kind)) + " needs more counts");
    for (long x : params) {
      if (x < 0) throw Error(ErrorKind::InvalidParams, "negative triangle count");
    }
  };
  const Rational twelfth = make_rational(1, 12);
  switch (kind) {
    case CycleKind::CommA:
    case CycleKind::CommD:
    case CycleKind::CommG:
      need(0);
      return 0;
    case CycleKind::CommB:
    case CycleKind::CommE:
    case CycleKind::CommH:
      need(2);
      return pair_weight(params[0], params[1]);
    case CycleKind::CommC:
    case CycleKind::CommI:
      need(2);
      return pair_weight(0, params[1]) - pair_weight(0, params[0]);
    case CycleKind::CommF:
      need(2);
      return pair_weight(0, params[1]) + pair_weight(0, params[0]);
    case CycleKind::SpecA:
      need(3);
      return corner_weight(params[0]) - corner_weight(params[1]) + corner_weight(params[2]) - twelfth;
    case CycleKind::SpecB:
      need(4);
      return corner_weight(params[0]) - corner_weight(params[1]) - corner_weight(params[2]) + corner_weight(params[3]);
    case CycleKind::SpecC:
      need(5);
      return corner_weight(params[0]) + corner_weight(params[1]) + corner_weight(params[2]) + corner_weight(params[3]) + corner_weight(params[4]) - twelfth;
  }
  throw Error(ErrorKind::InvalidParams, "unknown kind");
}

Classification classify_commutation(const OrientedComplex& sphere, const Move& first, const Move& second) {
  if (sphere.dimension() != 2) throw Error(ErrorKind::UnrecognizedConfiguration, "not a 2-sphere");
  std::vector<OrientedComplex> corners{sphere};
  std::vector<Move> moves{first, second, first.inverse(), second.inverse()};
  try {
    OrientedComplex l2 = apply_move(sphere, first);
    if (type_of(second) == MoveType::Insertion) moves[1].complement = Simplex{fresh_vertex(l2.complex())};
    moves[3] = moves[1].inverse();
    OrientedComplex l3 = apply_move(l2, moves[1]);
    OrientedComplex l4 = apply_move(l3, moves[2]);
    corners.push_back(l2);
    corners.push_back(l3);
    corners.push_back(l4);
  } catch (const Error& e) {
    throw Error(ErrorKind::NotApplicable, std::string("moves do not commute: ") + e.what());
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const Move& a = moves[i];
    const Move& b = moves[(i + 1) % 4];
    if (auto c = classify_corner(corners[i], a, b)) return *c;
    if (auto c = classify_corner(corners[i], b, a)) {
      c->sign = -c->sign;
      return *c;
    }
  }
  throw Error(ErrorKind::UnrecognizedConfiguration, "no standard corner for " + to_string(first) + " / " + to_string(second));
}

Gamma2::Gamma2(DecompositionPolicy policy) : policy_(policy) {}

const OrientedCanonical& Gamma2::canonical_locked(const OrientedComplex& k) {
  std::string fp = fingerprint(k);
  auto it = canon_.find(fp);
  if (it != canon_.end()) return *it->second;
  auto c = std::make_unique<OrientedCanonical>(k, false);
  const std::string& key = c->key();
  if (!sphere_sixths_.count(key)) {
    sphere_sixths_[key] = complexity_sixths(k.complex());
    sphere_rep_.emplace(key, c->representative(k));
  }
  return *canon_.emplace(std::move(fp), std::move(c)).first->second;
}

long Gamma2::sixths_of_locked(const OrientedComplex& k) { return sphere_sixths_.at(canonical_locked(k).key()); }

std::string Gamma2::sphere_key(const OrientedComplex& sphere) {
  std::lock_guard lock(mutex_);
  return canonical_locked(sphere).key();
}

long Gamma2::sphere_sixths(const std::string& key) {
  std::lock_guard lock(mutex_);
  return sphere_sixths_.at(key);
}

OrientedComplex Gamma2::sphere_representative(const std::string& key) {
  std::lock_guard lock(mutex_);
  return sphere_rep_.at(key);
}

EdgeKey Gamma2::edge(const OrientedComplex& host, const Move& m) {
  std::lock_guard lock(mutex_);
  return edge_locked(host, m);
}

EdgeKey Gamma2::edge_locked(const OrientedComplex& host, const Move& m) {
  OrientedComplex result = apply_move(host, m);
  const OrientedCanonical& cl = canonical_locked(host);
  const OrientedCanonical& cm = canonical_locked(result);
  std::string enc_l = cl.marked(m.face);
  std::string enc_m = cm.marked(m.complement);
  EdgeKey out;
  if (enc_l == enc_m) return out;
  long al = sphere_sixths_.at(cl.key());
  long am = sphere_sixths_.at(cm.key());
  bool forward;
  if (al != am) {
    forward = al < am;
  } else if (cl.key() != cm.key()) {
    forward = cl.key() < cm.key();
  } else {
    forward = enc_l < enc_m;
  }
  out.sign = forward ? 1 : -1;
  out.key = forward ? enc_l : enc_m;
  out.tail = forward ? cl.key() : cm.key();
  out.head = forward ? cm.key() : cl.key();
  if (!edges_.count(out.key)) {
    const OrientedComplex& tail = forward ? host : result;
    Move mv = forward ? m : m.inverse();
    const OrientedCanonical& ct = forward ? cl : cm;
    std::vector<Vertex> lab = ct.marked_labeling(mv.face);
    OrientedComplex rep = relabel(tail, lab);
    auto map_simplex = [&](const Simplex& s) {
      std::vector<Vertex> img;
      for (Vertex v : s) img.push_back(lab[static_cast<std::size_t>(v)]);
      return Simplex::from_unsorted(img);
    };
    Move rep_move;
    rep_move.face = map_simplex(mv.face);
    rep_move.complement = mv.complement.size() == 1 ? Simplex{fresh_vertex(rep.complex())} : map_simplex(mv.complement);
    EdgeInfo info;
    info.tail = std::move(rep);
    info.move = rep_move;
    info.tail_key = out.tail;
    info.head_key = out.head;
    info.tail_sixths = forward ? al : am;
    info.head_sixths = forward ? am : al;
    info.level = edge_level_sixths(info.tail_sixths, info.head_sixths);
    edges_.emplace(out.key, std::move(info));
  }
  return out;
}

const Gamma2::EdgeInfo& Gamma2::info(const std::string& key) {
  std::lock_guard lock(mutex_);
  auto it = edges_.find(key);
  if (it == edges_.end()) throw Error(ErrorKind::ValidationFailed, "unknown edge key " + key_to_hex(key));
  return it->second;
}

std::pair<std::string, int> Gamma2::mirror_edge(const std::string& key) {
  std::lock_guard lock(mutex_);
  auto it = mirror_.find(key);
  if (it != mirror_.end()) return it->second;
  const EdgeInfo& e = edges_.at(key);
  OrientedComplex tail = e.tail.reversed();
  Move mv = e.move;
  EdgeKey k = edge_locked(tail, mv);
  std::pair<std::string, int> out{k.key, k.sign};
  mirror_[key] = out;
  if (k.essential()) mirror_[k.key] = {key, k.sign};
  return out;
}

std::map<std::string, Rational> Gamma2::boundary(const Gamma2Chain& chain) {
  std::lock_guard lock(mutex_);
  std::map<std::string, Rational> out;
  for (const auto& [key, c] : chain.terms()) {
    const EdgeInfo& e = edges_.at(key);
    out[e.head_key] += c;
    out[e.tail_key] -= c;
  }
  for (auto it = out.begin(); it != out.end();) {
    it = it->second == 0 ? out.erase(it) : std::next(it);
  }
  return out;
}

ElementaryCycle Gamma2::loop_cycle(const OrientedComplex& base, const std::vector<Move>& moves, bool exact_closure) {
  ElementaryCycle out;
  out.base = base;
  out.moves = moves;
  OrientedComplex cur = base;
  for (const Move& m : moves) {
    if (!is_valid_move(cur.complex(), m)) throw Error(ErrorKind::NotApplicable, "move " + to_string(m) + " not valid");
    out.chain.add(edge_locked(cur, m), 1);
    cur = apply_move(cur, m);
  }
  bool closed = exact_closure ? (cur == base) : (canonical_locked(cur).key() == canonical_locked(base).key());
  if (!closed) throw Error(ErrorKind::ClosureFailure, "loop does not close");
  return out;
}

ElementaryCycle Gamma2::commutation_cycle(const OrientedComplex& sphere, const Simplex& first, const Simplex& second) {
  std::lock_guard lock(mutex_);
  return commutation_locked(sphere, first, second);
}

ElementaryCycle Gamma2::commutation_locked(const OrientedComplex& sphere, const Simplex& first, const Simplex& second) {
  if (sphere.dimension() != 2) throw Error(ErrorKind::NotApplicable, "not a 2-sphere");
  const Complex& k = sphere.complex();
  if (!k.has_face(first) || !k.has_face(second)) throw Error(ErrorKind::NotApplicable, "simplex not in sphere");
  Simplex both = first.unite(second);
  if (both.size() <= 3 && k.has_face(both)) throw Error(ErrorKind::NotApplicable, "a simplex contains both");
  auto b1 = move_at(sphere, first);
  auto b2_here = move_at(sphere, second);
  if (!b1 || !b2_here) throw Error(ErrorKind::NotApplicable, "no move at a marked simplex");
  OrientedComplex l2 = apply_move(sphere, *b1);
  auto b2 = move_at(l2, second);
  if (!b2) throw Error(ErrorKind::NotApplicable, "second move invalid after the first");
  if (b2->face.size() != 3 && !(b2->complement == b2_here->complement)) throw Error(ErrorKind::NotApplicable, "moves interact");
  std::vector<Move> moves{*b1, *b2, b1->inverse(), b2->inverse()};
  ElementaryCycle out = loop_cycle(sphere, moves, true);
  Classification c = classify_commutation(sphere, *b1, *b2);
  out.kind = c.kind;
  out.params = c.params;
  out.sign = c.sign;
  return out;
}

ElementaryCycle Gamma2::special_a(const OrientedComplex& root, Vertex w, int start, bool mirrored) {
  std::lock_guard lock(mutex_);
  return special_a_locked(root, w, start, mirrored);
}

ElementaryCycle Gamma2::special_a_locked(const OrientedComplex& root, Vertex w, int start, bool mirrored) {
  if (root.dimension() != 2 || degree(root, w) != 3) throw Error(ErrorKind::NotApplicable, "needs a degree-3 vertex");
  auto c = link_cycle(root, w);
  auto at = [&](int i) { return c[static_cast<std::size_t>(((start + i) % 3 + 3) % 3)]; };
  Vertex b = mirrored ? at(2) : at(0);
  Vertex cc = at(1);
  Vertex a = mirrored ? at(0) : at(2);
  Vertex y = fresh_vertex(root.complex());
  std::vector<Move> moves{{Simplex::from_unsorted(std::vector<Vertex>{w, b, cc}), Simplex{y}},
                          {Simplex::from_unsorted(std::vector<Vertex>{w, b}), Simplex::from_unsorted(std::vector<Vertex>{a, y})},
                          {Simplex{w}, Simplex::from_unsorted(std::vector<Vertex>{a, y, cc})}};
  ElementaryCycle out = loop_cycle(root, moves, false);
  out.kind = CycleKind::SpecA;
  out.params = {degree(root, a) - 2L, degree(root, cc) - 2L, degree(root, b) - 2L};
  out.sign = mirrored ? -1 : 1;
  return out;
}

ElementaryCycle Gamma2::special_b(const OrientedComplex& root, Vertex m, int start, bool mirrored) {
  std::lock_guard lock(mutex_);
  return special_b_locked(root, m, start, mirrored);
}

ElementaryCycle Gamma2::special_b_locked(const OrientedComplex& root, Vertex m, int start, bool mirrored) {
  if (root.dimension() != 2 || degree(root, m) != 4) throw Error(ErrorKind::NotApplicable, "needs a degree-4 vertex");
  auto c = link_cycle(root, m);
  if (mirrored) std::reverse(c.begin(), c.end());
  auto x = [&](int i) { return c[static_cast<std::size_t>(((start + i) % 4 + 4) % 4)]; };
  auto s = [](std::vector<Vertex> v) { return Simplex::from_unsorted(v); };
  std::vector<Move> moves{{s({m, x(0)}), s({x(1), x(3)})},
                          {Simplex{m}, s({x(1), x(2), x(3)})},
                          {s({x(1), x(3)}), s({x(0), x(2)})},
                          {s({x(0), x(2), x(3)}), Simplex{m}},
                          {s({x(0), x(2)}), s({m, x(1)})}};
  ElementaryCycle out = loop_cycle(root, moves, true);
  out.kind = CycleKind::SpecB;
  auto o = [&](int i) { return degree(root, x(i)) - 2L; };
  out.params = {o(2), o(1), o(0), o(3)};
  out.sign = mirrored ? -1 : 1;
  return out;
}

ElementaryCycle Gamma2::special_c(const OrientedComplex& root, Vertex center, int start) {
  std::lock_guard lock(mutex_);
  return special_c_locked(root, center, start);
}

ElementaryCycle Gamma2::special_c_locked(const OrientedComplex& root, Vertex center, int start) {
  if (root.dimension() != 2 || degree(root, center) < 4) throw Error(ErrorKind::NotApplicable, "needs degree at least 4");
  auto c = link_cycle(root, center);
  int d = static_cast<int>(c.size());
  std::vector<Vertex> pent{center};
  for (int i = 0; i < 4; ++i) pent.push_back(c[static_cast<std::size_t>(((start + i) % d + d) % d)]);
  std::vector<Move> moves;
  std::size_t ci = 0;
  for (int step = 0; step < 5; ++step) {
    auto p = [&](std::size_t off) { return pent[(ci + off) % 5]; };
    moves.push_back({Simplex::from_unsorted(std::vector<Vertex>{p(0), p(3)}),
                     Simplex::from_unsorted(std::vector<Vertex>{p(2), p(4)})});
    ci = (ci + 2) % 5;
  }
  ElementaryCycle out = loop_cycle(root, moves, true);
  out.kind = CycleKind::SpecC;
  const long inside[5] = {3, 1, 2, 2, 1};
  for (std::size_t j = 0; j < 5; ++j) out.params.push_back(degree(root, pent[j]) - inside[j]);
  out.sign = 1;
  return out;
}

bool Gamma2::all_lower(const Gamma2Chain& chain, long level, const std::vector<std::string>& allowed) {
  for (const auto& [key, c] : chain.terms()) {
    if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
    if (edges_.at(key).level >= level) return false;
  }
  return true;
}

void Gamma2::build_edge_rule(const std::string& key) {
  const EdgeInfo e = edges_.at(key);
  const OrientedComplex& tail = e.tail;
  const Move edge_move = e.move;
  OrientedComplex head = apply_move(tail, edge_move);
  std::vector<std::function<ElementaryCycle()>> cands;
  for (const Move& other : enumerate_moves(tail.complex())) {
    if (other.face == edge_move.face) continue;
    cands.push_back([this, &tail, edge_move, other] { return commutation_locked(tail, edge_move.face, other.face); });
  }
  for (const Move& other : enumerate_moves(head.complex())) {
    if (other.face == edge_move.complement) continue;
    cands.push_back([this, &head, edge_move, other] { return commutation_locked(head, edge_move.complement, other.face); });
  }
  std::vector<OrientedComplex> roots;
  for (const OrientedComplex* end : std::array<const OrientedComplex*, 2>{&tail, &head}) {
    for (Vertex x : end->complex().vertices()) {
      if (degree(*end, x) != 3) continue;
      auto rm = move_at(*end, Simplex{x});
      if (!rm) continue;
      roots.push_back(apply_move(*end, *rm));
    }
  }
  for (const OrientedComplex& r : roots) {
    for (Vertex w : r.complex().vertices()) {
      if (degree(r, w) != 3) continue;
      for (int i = 0; i < 3; ++i) {
        for (bool mir : {false, true}) {
          cands.push_back([this, &r, w, i, mir] { return special_a_locked(r, w, i, mir); });
        }
      }
    }
  }
  for (const OrientedComplex* end : std::array<const OrientedComplex*, 2>{&tail, &head}) {
    for (Vertex c : end->complex().vertices()) {
      int d = degree(*end, c);
      if (d < 4) continue;
      for (int i = 0; i < d; ++i) cands.push_back([this, end, c, i] { return special_c_locked(*end, c, i); });
    }
  }
  if (policy_ == DecompositionPolicy::Alternate) std::reverse(cands.begin(), cands.end());
  for (auto& make : cands) {
    ElementaryCycle g;
    try {
      g = make();
    } catch (const Error& err) {
      if (is_soft_failure(err)) continue;
      throw;
    }
    Rational multiplicity = g.chain.coefficient(key);
    if (multiplicity == 0 || !all_lower(g.chain, e.level, {key})) continue;
    Rule r;
    r.multiplicity = multiplicity;
    r.cycle = std::move(g);
    rules_.emplace(key, std::move(r));
    return;
  }
  throw Error(ErrorKind::DecompositionStuck, "no elementary cycle isolates edge " + key_to_hex(key) + " at level " +
                                                 std::to_string(e.level) + " (" + to_string(edge_move) + ")");
}

void Gamma2::build_sphere_rules(const std::string& skey) {
  const OrientedComplex top = sphere_rep_.at(skey);
  const long a = sphere_sixths_.at(skey);
  std::vector<Move> raw;
  std::vector<std::string> raw_class;
  std::vector<std::string> classes;
  for (const Move& m : enumerate_moves(top.complex())) {
    OrientedComplex r = apply_move(top, m);
    if (sixths_of_locked(r) >= a) continue;
    EdgeKey k = edge_locked(top, m);
    raw.push_back(m);
    raw_class.push_back(k.key);
    if (std::find(classes.begin(), classes.end(), k.key) == classes.end()) classes.push_back(k.key);
  }
  if (classes.empty()) return;
  std::sort(classes.begin(), classes.end());
  auto index_of = [&](const std::string& k) {
    return static_cast<int>(std::lower_bound(classes.begin(), classes.end(), k) - classes.begin());
  };
  std::size_t root = policy_ == DecompositionPolicy::Primary ? 0 : classes.size() - 1;
  UnionFind uf(classes.size());
  std::size_t components = classes.size();
  struct Link {
    int a, b;
    ElementaryCycle cycle;
  };
  std::vector<Link> links;
  std::vector<std::function<ElementaryCycle()>> cands;
  if (components > 1) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
      for (std::size_t j = i + 1; j < raw.size(); ++j) {
        if (raw_class[i] == raw_class[j]) continue;
        cands.push_back([this, &top, &raw, i, j] { return commutation_locked(top, raw[i].face, raw[j].face); });
      }
    }
    for (Vertex m : top.complex().vertices()) {
      if (degree(top, m) != 4) continue;
      for (int s = 0; s < 4; ++s) {
        for (bool mir : {false, true}) cands.push_back([this, &top, m, s, mir] { return special_b_locked(top, m, s, mir); });
      }
    }
    for (Vertex c : top.complex().vertices()) {
      int d = degree(top, c);
      if (d < 4) continue;
      for (int s = 0; s < d; ++s) cands.push_back([this, &top, c, s] { return special_c_locked(top, c, s); });
    }
    if (policy_ == DecompositionPolicy::Alternate) std::reverse(cands.begin(), cands.end());
  }
  for (auto& make : cands) {
    if (components == 1) break;
    ElementaryCycle g;
    try {
      g = make();
    } catch (const Error& err) {
      if (is_soft_failure(err)) continue;
      throw;
    }
    std::vector<std::string> here;
    for (const auto& [k, c] : g.chain.terms()) {
      if (std::binary_search(classes.begin(), classes.end(), k)) here.push_back(k);
    }
    if (here.size() != 2 || !all_lower(g.chain, a, here)) continue;
    int x = index_of(here[0]), y = index_of(here[1]);
    if (!uf.unite(x, y)) continue;
    --components;
    links.push_back({x, y, std::move(g)});
  }
  if (components > 1) {
    throw Error(ErrorKind::DecompositionStuck, "edges at sphere " + key_to_hex(skey) + " are not tied together (" +
                                                   std::to_string(components) + " groups)");
  }
  Rule root_rule;
  root_rule.root = true;
  rules_[classes[root]] = root_rule;
  std::vector<int> depth(classes.size(), -1);
  depth[root] = 0;
  std::vector<int> queue{static_cast<int>(root)};
  for (std::size_t h = 0; h < queue.size(); ++h) {
    int u = queue[h];
    for (const Link& l : links) {
      int v = l.a == u ? l.b : (l.b == u ? l.a : -1);
      if (v < 0 || depth[static_cast<std::size_t>(v)] >= 0) continue;
      depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(u)] + 1;
      Rule r;
      r.cycle = l.cycle;
      r.multiplicity = l.cycle.chain.coefficient(classes[static_cast<std::size_t>(v)]);
      r.parent = classes[static_cast<std::size_t>(u)];
      r.parent_multiplicity = l.cycle.chain.coefficient(r.parent);
      r.depth = depth[static_cast<std::size_t>(v)];
      rules_[classes[static_cast<std::size_t>(v)]] = std::move(r);
      queue.push_back(v);
    }
  }
}

const Gamma2::Rule& Gamma2::rule_locked(const std::string& key) {
  auto it = rules_.find(key);
  if (it != rules_.end()) return it->second;
  const EdgeInfo& e = edges_.at(key);
  if (e.level % 2 == 1) {
    build_edge_rule(key);
  } else {
    build_sphere_rules(e.tail_sixths > e.head_sixths ? e.tail_key : e.head_key);
  }
  it = rules_.find(key);
  if (it == rules_.end()) throw Error(ErrorKind::DecompositionStuck, "no rule produced for edge " + key_to_hex(key));
  return it->second;
}

Rational Gamma2::gauge(const std::string& key) {
  std::lock_guard lock(mutex_);
  return gauge_locked(key);
}

Rational Gamma2::gauge_locked(const std::string& key) {
  auto it = gauge_.find(key);
  if (it != gauge_.end()) return it->second;
  const Rule& r = rule_locked(key);
  Rational w = 0;
  if (!r.root) {
    Rational rest = r.cycle.value();
    // Copy: recursion may rehash nothing in std::map, but keep the rule stable anyway.
    const Gamma2Chain chain = r.cycle.chain;
    const Rational multiplicity = r.multiplicity;
    for (const auto& [k, c] : chain.terms()) {
      if (k == key) continue;
      rest -= c * gauge_locked(k);
    }
    w = rest / multiplicity;
  }
  gauge_[key] = w;
  return w;
}

Rational Gamma2::pair_with_gauge(const Gamma2Chain& chain) {
  std::lock_guard lock(mutex_);
  Rational total = 0;
  for (const auto& [k, c] : chain.terms()) total += c * gauge_locked(k);
  return total;
}

std::vector<DecompositionTerm> Gamma2::decompose(const Gamma2Chain& cycle) {
  std::lock_guard lock(mutex_);
  if (!boundary(cycle).empty()) throw Error(ErrorKind::NotACycle, "chain has nonzero boundary");
  std::vector<DecompositionTerm> terms;
  Gamma2Chain residual = cycle;
  while (!residual.is_zero()) {
    const std::string* pick = nullptr;
    long best_level = -1;
    int best_depth = -1;
    for (const auto& [k, c] : residual.terms()) {
      long lv = edges_.at(k).level;
      int dp = rule_locked(k).depth;
      if (lv > best_level || (lv == best_level && dp > best_depth)) {
        pick = &k;
        best_level = lv;
        best_depth = dp;
      }
    }
    std::string key = *pick;
    const Rule& r = rule_locked(key);
    if (r.root) {
      throw Error(ErrorKind::DecompositionStuck,
                  "residual left on root edge " + key_to_hex(key) + " (" + std::to_string(residual.size()) + " terms)");
    }
    Rational n = residual.coefficient(key) / r.multiplicity;
    residual -= r.cycle.chain * n;
    terms.push_back({n, r.cycle});
  }
  Gamma2Chain sum;
  for (const auto& t : terms) sum += t.cycle.chain * t.coefficient;
  if (!(sum == cycle)) throw Error(ErrorKind::ValidationFailed, "decomposition does not sum to the cycle");
  return terms;
}

Rational Gamma2::evaluate(const Gamma2Chain& cycle) {
  Rational total = 0;
  for (const auto& t : decompose(cycle)) total += t.coefficient * t.cycle.value();
  return total;
}

std::size_t Gamma2::edge_count() const {
  std::lock_guard lock(mutex_);
  return edges_.size();
}

std::size_t Gamma2::rule_count() const {
  std::lock_guard lock(mutex_);
  return rules_.size();
}

std::map<std::string, Rational> Gamma2::gauge_table() const {
  std::lock_guard lock(mutex_);
  return gauge_;
}

void Gamma2::preload_gauge(const std::map<std::string, Rational>& table) {
  std::lock_guard lock(mutex_);
  for (const auto& [k, v] : table) gauge_.emplace(k, v);
}

std::vector<DecompositionTerm> decompose_cycle(Gamma2& g, const Gamma2Chain& cycle) { return g.decompose(cycle); }

Rational c_of_cycle(Gamma2& g, const Gamma2Chain& cycle) { return g.evaluate(cycle); }

MoveLoop random_move_loop(std::uint64_t seed, long max_sixths, int steps) {
  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<Move>& options) -> const Move& {
    return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
  };
  MoveLoop loop{simplex_boundary(3), {}};
  OrientedComplex cur = loop.base;
  for (int i = 0; i < steps; ++i) {
    std::vector<Move> options;
    for (const Move& m : enumerate_moves(cur.complex())) {
      if (complexity_sixths(apply_move(cur, m).complex()) <= max_sixths) options.push_back(m);
    }
    if (options.empty()) break;
    const Move& m = pick(options);
    loop.moves.push_back(m);
    cur = apply_move(cur, m);
  }
  while (cur.num_vertices() > 4) {
    long a = complexity_sixths(cur.complex());
    std::vector<Move> down;
    for (const Move& m : enumerate_moves(cur.complex())) {
      if (complexity_sixths(apply_move(cur, m).complex()) < a) down.push_back(m);
    }
    const Move& m = pick(down);
    loop.moves.push_back(m);
    cur = apply_move(cur, m);
  }
  return loop;
}

Gamma2Chain loop_chain(Gamma2& g, const MoveLoop& loop) {
  Gamma2Chain chain;
  OrientedComplex cur = loop.base;
  for (const Move& m : loop.moves) {
    chain.add(g.edge(cur, m), 1);
    cur = apply_move(cur, m);
  }
  if (g.sphere_key(cur) != g.sphere_key(loop.base)) {
    throw Error(ErrorKind::NotClosedCycle, "the moves do not return to the oriented class of the base");
  }
  return chain;
}

}  // namespace localp1
