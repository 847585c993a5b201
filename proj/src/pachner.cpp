#include "localp1/pachner.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "localp1/error.hpp"

namespace localp1 {

std::string to_string(const Move& m) { return m.face.to_string() + "->" + m.complement.to_string(); }

Vertex fresh_vertex(const Complex& k) {
  Vertex v = 0;
  for (Vertex x : k.vertices()) {
    if (x != v) break;
    ++v;
  }
  return v;
}

namespace {

// Facets of the link of face (sorted).
std::vector<Simplex> link_facets(const Complex& k, const Simplex& face) {
  std::vector<Simplex> out;
  for (const Simplex& f : k.facets()) {
    if (f.contains(face)) out.push_back(f.minus(face));
  }
  return out;
}

// If the facets are exactly the boundary of a simplex, returns that simplex.
std::optional<Simplex> boundary_of_simplex(const std::vector<Simplex>& facets) {
  if (facets.empty() || facets.size() > Simplex::kMaxSize) return std::nullopt;
  std::set<Vertex> verts;
  for (const Simplex& f : facets) {
    if (f.size() + 1 != facets.size()) return std::nullopt;
    verts.insert(f.begin(), f.end());
    if (verts.size() > facets.size()) return std::nullopt;
  }
  Simplex all = Simplex::from_unsorted(std::vector<Vertex>(verts.begin(), verts.end()));
  if (facets.size() != all.size()) return std::nullopt;
  for (const Simplex& f : facets) {
    if (f.size() + 1 != all.size()) return std::nullopt;
  }
  std::set<Simplex> distinct(facets.begin(), facets.end());
  if (distinct.size() != facets.size()) return std::nullopt;
  return all;
}

int parity(std::size_t i) { return (i % 2 == 0) ? 1 : -1; }

}  // namespace

bool is_valid_move(const Complex& k, const Move& m) {
  if (m.face.empty() || m.complement.empty() || m.face.intersects(m.complement)) return false;
  int n = k.dimension();
  if (static_cast<int>(m.face.size() + m.complement.size()) != n + 2) return false;
  if (m.complement.size() == 1) {
    return k.facet_index(m.face) >= 0 && !std::binary_search(k.vertices().begin(), k.vertices().end(), m.complement[0]);
  }
  auto lf = link_facets(k, m.face);
  auto t = boundary_of_simplex(lf);
  if (!t || !(*t == m.complement)) return false;
  return !k.has_face(m.complement);
}

std::vector<Move> enumerate_moves(const Complex& k) {
  std::vector<Move> out;
  int n = k.dimension();
  Vertex fresh = fresh_vertex(k);
  std::unordered_set<Simplex, SimplexHash> faces;
  for (const Simplex& f : k.all_faces()) faces.insert(f);
  for (const Simplex& face : k.all_faces()) {
    if (static_cast<int>(face.size()) == n + 1) {
      out.push_back({face, Simplex{fresh}});
      continue;
    }
    auto lf = link_facets(k, face);
    auto t = boundary_of_simplex(lf);
    if (!t || static_cast<int>(t->size() + face.size()) != n + 2) continue;
    if (faces.count(*t)) continue;
    out.push_back({face, *t});
  }
  std::sort(out.begin(), out.end(), [](const Move& a, const Move& b) {
    if (a.face.size() != b.face.size()) return a.face.size() > b.face.size();
    return a.face < b.face;
  });
  return out;
}

OrientedComplex apply_move(const OrientedComplex& k, const Move& m) {
  if (!is_valid_move(k.complex(), m)) throw Error(ErrorKind::InvalidMove, to_string(m));
  const Simplex& face = m.face;
  const Simplex& complement = m.complement;
  // Orientation of the replaced region face * boundary(complement), read off one old facet.
  Simplex rest0 = complement.size() == 1 ? Simplex{} : complement.without_index(0);
  int eps = k.sign_of(face.unite(rest0)) * concatenation_sign(face, rest0);
  std::set<Simplex> removed;
  if (complement.size() == 1) {
    removed.insert(face);
  } else {
    for (std::size_t i = 0; i < complement.size(); ++i) removed.insert(face.unite(complement.without_index(i)));
  }
  std::vector<std::pair<Simplex, int>> facets;
  for (std::size_t i = 0; i < k.facets().size(); ++i) {
    if (!removed.count(k.facets()[i])) facets.emplace_back(k.facets()[i], k.signs()[i]);
  }
  int base = eps * parity(face.size() + 1);
  if (face.size() == 1) {
    facets.emplace_back(complement, base);
  } else {
    for (std::size_t j = 0; j < face.size(); ++j) {
      Simplex ridge = face.without_index(j);
      facets.emplace_back(ridge.unite(complement), base * parity(j) * concatenation_sign(ridge, complement));
    }
  }
  std::sort(facets.begin(), facets.end());
  std::vector<Simplex> fs;
  std::vector<int> ss;
  for (auto& [f, e] : facets) {
    fs.push_back(f);
    ss.push_back(e);
  }
  return OrientedComplex(Complex(std::move(fs), Complex::Trusted{}), std::move(ss), OrientedComplex::Trusted{});
}

std::vector<Vertex> move_support(const Move& m) {
  Simplex u;
  if (m.face.size() >= 2) u = u.unite(m.face);
  if (m.complement.size() >= 2) u = u.unite(m.complement);
  return u.to_vector();
}

std::vector<InducedMove> induced_vertex_moves(const Move& m) {
  std::vector<InducedMove> out;
  if (m.face.size() >= 2) {
    for (Vertex v : m.face) out.push_back({v, {m.face.without(v), m.complement}});
  }
  if (m.complement.size() >= 2) {
    for (Vertex v : m.complement) out.push_back({v, {m.face, m.complement.without(v)}});
  }
  std::sort(out.begin(), out.end(), [](const InducedMove& a, const InducedMove& b) { return a.vertex < b.vertex; });
  return out;
}

long complexity_sixths(const Complex& k) {
  long verts = static_cast<long>(k.num_vertices());
  if (k.dimension() != 2) return 6 * verts;
  int min_degree = -1;
  for (Vertex v : k.vertices()) {
    int d = k.facet_degree(v);
    if (min_degree < 0 || d < min_degree) min_degree = d;
  }
  long extra = min_degree <= 3 ? 0 : (min_degree == 4 ? 2 : 4);
  return 6 * verts + extra;
}

EdgeKey edge_key(const OrientedComplex& host, const Move& m) {
  OrientedComplex result = apply_move(host, m);
  OrientedCanonical cl(host, false);
  OrientedCanonical cm(result, false);
  std::string enc_l = cl.marked(m.face);
  std::string enc_m = cm.marked(m.complement);
  EdgeKey out;
  if (enc_l == enc_m) return out;  // inessential: the move is equivalent to its inverse
  long al = complexity_sixths(host.complex());
  long am = complexity_sixths(result.complex());
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
  return out;
}

namespace {

struct DegreeTable {
  std::map<Vertex, std::set<Vertex>> nbrs;
  explicit DegreeTable(const Complex& k) {
    for (const Simplex& f : k.facets()) {
      for (Vertex a : f) {
        for (Vertex b : f) {
          if (a != b) nbrs[a].insert(b);
        }
      }
    }
  }
  long deg(Vertex v) const { return static_cast<long>(nbrs.at(v).size()); }
};

// Change of the sum of squared vertex degrees caused by a non-insertion move.
long score_delta(const DegreeTable& t, const Move& m) {
  std::map<Vertex, long> change;
  if (m.face.size() == 1) {
    Vertex v = m.face[0];
    for (Vertex w : t.nbrs.at(v)) change[w] -= 1;
    change[v] = 0;
  } else if (m.face.size() == 2) {
    change[m.face[0]] -= 1;
    change[m.face[1]] -= 1;
  }
  if (m.complement.size() == 2) {
    change[m.complement[0]] += 1;
    change[m.complement[1]] += 1;
  }
  long delta = 0;
  for (auto [v, c] : change) {
    long d = t.deg(v);
    if (m.face.size() == 1 && v == m.face[0]) {
      delta -= d * d;
      continue;
    }
    delta += (d + c) * (d + c) - d * d;
  }
  return delta;
}

std::uint64_t derive_seed(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::uint64_t out[1];
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  out[0] = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
  return out[0];
}

}  // namespace

Reduction reduce_to_boundary(const OrientedComplex& sphere, const ReduceOptions& opt) {
  int n = sphere.dimension();
  if (n < 1 || n > 3) throw Error(ErrorKind::InvalidParams, "reduction supports spheres of dimension 1 to 3");
  OrientedCanonical canon(sphere, false);
  Reduction out{canon.representative(sphere), {}};
  out.sequence.start_key = canon.key();
  const std::size_t target = static_cast<std::size_t>(n + 2);
  int restarts = std::max(1, opt.restarts);
  long per_restart = std::max<long>(1, opt.budget / restarts);
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(derive_seed(opt.seed, r));
    OrientedComplex cur = out.start;
    std::vector<Move> moves;
    std::optional<Move> last;
    for (long step = 0; step < per_restart && cur.num_vertices() > target; ++step) {
      DegreeTable table(cur.complex());
      std::vector<Move> cands;
      for (const Move& m : enumerate_moves(cur.complex())) {
        if (m.complement.size() == 1) continue;
        if (last && m == last->inverse()) continue;
        cands.push_back(m);
      }
      if (cands.empty()) break;
      // Vertex removals first, then the steepest descent of the degree score.
      std::vector<std::size_t> best;
      long best_delta = 0;
      bool best_removal = false;
      for (std::size_t i = 0; i < cands.size(); ++i) {
        bool removal = cands[i].face.size() == 1;
        long d = score_delta(table, cands[i]);
        if (best.empty() || (removal && !best_removal) || (removal == best_removal && d < best_delta)) {
          best.assign(1, i);
          best_delta = d;
          best_removal = removal;
        } else if (removal == best_removal && d == best_delta) {
          best.push_back(i);
        }
      }
      std::size_t pick;
      if (best_removal || best_delta < 0) {
        pick = best[rng() % best.size()];
      } else {
        pick = static_cast<std::size_t>(rng() % cands.size());
      }
      cur = apply_move(cur, cands[pick]);
      moves.push_back(cands[pick]);
      last = cands[pick];
    }
    if (cur.num_vertices() == target) {
      out.sequence.moves = std::move(moves);
      out.sequence.end_key = oriented_key(cur);
      replay(out.start, out.sequence);
      return out;
    }
  }
  throw Error(ErrorKind::BudgetExhausted,
              "no reduction found within budget " + std::to_string(opt.budget) + " (" + std::to_string(sphere.num_vertices()) + " vertices)");
}

OrientedComplex replay(const OrientedComplex& start, const MoveSequence& seq) {
  if (oriented_key(start) != seq.start_key) throw Error(ErrorKind::ValidationFailed, "start key mismatch");
  OrientedComplex cur = start;
  for (const Move& m : seq.moves) cur = apply_move(cur, m);
  if (oriented_key(cur) != seq.end_key) throw Error(ErrorKind::ValidationFailed, "end key mismatch");
  return cur;
}

namespace {

bool is_cycle_graph(const Complex& k) {
  if (k.dimension() != 1 || !k.is_pure()) return false;
  return is_closed_pseudomanifold(k);
}

}  // namespace

SphereCheck is_combinatorial_sphere(const Complex& k, const ReduceOptions& opt) {
  SphereCheck out;
  int n = k.dimension();
  if (n == 0) {
    bool ok = k.num_vertices() == 2;
    out.verdict = ok ? SphereVerdict::Yes : SphereVerdict::No;
    if (!ok) out.reason = "a 0-sphere has exactly two points";
    return out;
  }
  if (!is_closed_pseudomanifold(k)) {
    out.reason = "not a strongly connected closed pseudomanifold";
    return out;
  }
  if (n == 1) {
    out.verdict = is_cycle_graph(k) ? SphereVerdict::Yes : SphereVerdict::No;
    return out;
  }
  if (n == 2) {
    if (k.euler_characteristic() != 2) {
      out.reason = "Euler characteristic " + std::to_string(k.euler_characteristic());
      return out;
    }
    for (Vertex v : k.vertices()) {
      if (!is_cycle_graph(link(k, Simplex{v}))) {
        out.reason = "link of vertex " + std::to_string(v) + " is not a cycle";
        return out;
      }
    }
    out.verdict = SphereVerdict::Yes;
    return out;
  }
  for (Vertex v : k.vertices()) {
    SphereCheck c = is_combinatorial_sphere(link(k, Simplex{v}), opt);
    if (c.verdict != SphereVerdict::Yes) {
      out.verdict = c.verdict;
      out.reason = "link of vertex " + std::to_string(v) + ": " + (c.reason.empty() ? "not a sphere" : c.reason);
      return out;
    }
  }
  auto o = orient(k);
  if (!o) {
    out.reason = "not orientable";
    return out;
  }
  if (n > 3) {
    // Links are spheres, but no reduction is attempted in this dimension.
    out.verdict = SphereVerdict::Unknown;
    out.reason = "no reduction search in dimension " + std::to_string(n);
    return out;
  }
  try {
    Reduction r = reduce_to_boundary(*o, opt);
    out.verdict = SphereVerdict::Yes;
    out.certificate = r.sequence;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BudgetExhausted) throw;
    out.verdict = SphereVerdict::Unknown;
    out.reason = e.what();
  }
  return out;
}

SphereCheck is_combinatorial_manifold(const Complex& k, const ReduceOptions& opt) {
  SphereCheck out;
  if (!is_closed_pseudomanifold(k)) {
    out.reason = "not a strongly connected closed pseudomanifold";
    return out;
  }
  out.verdict = SphereVerdict::Yes;
  for (Vertex v : k.vertices()) {
    SphereCheck c = is_combinatorial_sphere(link(k, Simplex{v}), opt);
    if (c.verdict == SphereVerdict::No) {
      out.verdict = SphereVerdict::No;
      out.reason = "link of vertex " + std::to_string(v) + ": " + c.reason;
      return out;
    }
    if (c.verdict == SphereVerdict::Unknown) {
      out.verdict = SphereVerdict::Unknown;
      out.reason = "link of vertex " + std::to_string(v) + ": " + c.reason;
    }
  }
  return out;
}

std::vector<OrientedComplex> enumerate_oriented_spheres(int max_vertices) {
  std::map<std::pair<std::size_t, std::string>, OrientedComplex> seen;
  std::vector<OrientedComplex> queue;
  auto visit = [&](const OrientedComplex& k) {
    OrientedCanonical c(k, false);
    auto id = std::make_pair(k.num_vertices(), c.key());
    if (seen.count(id)) return;
    OrientedComplex rep = c.representative(k);
    seen.emplace(id, rep);
    queue.push_back(rep);
  };
  if (max_vertices < 4) return {};
  visit(simplex_boundary(3));
  for (std::size_t h = 0; h < queue.size(); ++h) {
    OrientedComplex cur = queue[h];
    for (const Move& m : enumerate_moves(cur.complex())) {
      if (m.complement.size() == 1 && static_cast<int>(cur.num_vertices()) >= max_vertices) continue;
      visit(apply_move(cur, m));
    }
  }
  std::vector<OrientedComplex> out;
  for (auto& [id, k] : seen) out.push_back(k);
  return out;
}

std::string move_sequence_to_json(const MoveSequence& seq) {
  nlohmann::json doc;
  doc["start_key"] = key_to_hex(seq.start_key);
  doc["end_key"] = key_to_hex(seq.end_key);
  doc["moves"] = nlohmann::json::array();
  for (const Move& m : seq.moves) doc["moves"].push_back({{"face", m.face.to_vector()}, {"complement", m.complement.to_vector()}});
  return doc.dump();
}

MoveSequence move_sequence_from_json(const std::string& text) {
  MoveSequence out;
  try {
    auto doc = nlohmann::json::parse(text);
    out.start_key = key_from_hex(doc.at("start_key").get<std::string>());
    out.end_key = key_from_hex(doc.at("end_key").get<std::string>());
    for (const auto& m : doc.at("moves")) {
      out.moves.push_back({Simplex::from_unsorted(m.at("face").get<std::vector<Vertex>>()),
                           Simplex::from_unsorted(m.at("complement").get<std::vector<Vertex>>())});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  return out;
}

}  // namespace localp1
