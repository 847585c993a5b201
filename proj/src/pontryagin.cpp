#include "localp1/pontryagin.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "localp1/canonical.hpp"
#include "localp1/error.hpp"

namespace localp1 {

namespace {

using Matrix = std::vector<std::vector<Rational>>;

std::string tetrahedron_key(Gamma2& g) { return g.sphere_key(simplex_boundary(3)); }

// Moves of the canonical representative that decrease the complexity.
std::vector<Move> decreasing_moves(const OrientedComplex& rep) {
  long a = complexity_sixths(rep.complex());
  std::vector<Move> out;
  for (const Move& m : enumerate_moves(rep.complex())) {
    if (complexity_sixths(apply_move(rep, m).complex()) < a) out.push_back(m);
  }
  if (out.empty()) throw Error(ErrorKind::ValidationFailed, "sphere without complexity-decreasing moves");
  return out;
}

Gamma2Chain mirror_chain(Gamma2& g, const Gamma2Chain& c) {
  Gamma2Chain out;
  for (const auto& [k, x] : c.terms()) {
    auto [mk, sign] = g.mirror_edge(k);
    if (sign != 0) out.add(mk, x * sign);
  }
  return out;
}

// Chain of the reversed reduction path: from the simplex boundary back to
// the start, as induced vertex moves (dim 3) or as the moves themselves (dim 2).
Gamma2Chain induced_chain(Gamma2& g, const Reduction& red) {
  Gamma2Chain induced;
  OrientedComplex cur = red.start;
  for (const Move& step : red.sequence.moves) {
    for (const InducedMove& iv : induced_vertex_moves(step)) {
      induced.add(g.edge(link(cur, Simplex{iv.vertex}), iv.move), -1);
    }
    cur = apply_move(cur, step);
  }
  return induced;
}

Gamma2Chain path_chain(Gamma2& g, const Reduction& red) {
  Gamma2Chain p;
  OrientedComplex cur = red.start;
  for (const Move& step : red.sequence.moves) {
    p.add(g.edge(cur, step), -1);
    cur = apply_move(cur, step);
  }
  return p;
}

void require_cycle(Gamma2& g, const Gamma2Chain& c, const std::string& what) {
  auto b = g.boundary(c);
  if (!b.empty()) throw Error(ErrorKind::NotACycle, what + " has nonzero boundary (" + std::to_string(b.size()) + " spheres)");
}

// Row reduction in place; returns the pivot column of each pivot row.
std::vector<std::size_t> row_reduce(Matrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t p = row;
    while (p < m.size() && m[p][col] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Rational inv = 1 / m[row][col];
    for (std::size_t j = col; j < m[row].size(); ++j) m[row][j] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (std::size_t j = col; j < m[r].size(); ++j) m[r][j] -= f * m[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

// Basis of the null space of m (rows x cols).
Matrix null_space(Matrix m, std::size_t cols) {
  auto pivots = row_reduce(m, cols);
  std::vector<char> is_pivot(cols, 0);
  for (std::size_t c : pivots) is_pivot[c] = 1;
  Matrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank_of(Matrix m, std::size_t cols) { return row_reduce(m, cols).size(); }

int alternating(std::size_t i) { return i % 2 == 0 ? 1 : -1; }

// Coboundary matrix from dim-d cochains to dim-(d+1) cochains: rows indexed by (d+1)-faces.
Matrix coboundary(const std::vector<Simplex>& lower, const std::vector<Simplex>& upper) {
  std::map<Simplex, std::size_t> index;
  for (std::size_t i = 0; i < lower.size(); ++i) index[lower[i]] = i;
  Matrix m(upper.size(), std::vector<Rational>(lower.size(), Rational(0)));
  for (std::size_t r = 0; r < upper.size(); ++r) {
    for (std::size_t i = 0; i < upper[r].size(); ++i) m[r][index.at(upper[r].without_index(i))] += alternating(i);
  }
  return m;
}

}  // namespace

Gamma2Chain XiCache::xi_chain(const OrientedComplex& sphere) {
  std::lock_guard lock(mutex_);
  std::string key = registry_.sphere_key(sphere);
  std::string mkey = registry_.sphere_key(sphere.reversed());
  if (key <= mkey) return xi_chain_key(key);
  return mirror_chain(registry_, xi_chain_key(mkey));
}

Gamma2Chain XiCache::xi_chain_key(const std::string& key) {
  auto it = chains_.find(key);
  if (it != chains_.end()) return it->second;
  OrientedComplex rep = registry_.sphere_representative(key);
  Gamma2Chain out;
  if (rep.num_vertices() > 4) {
    auto moves = decreasing_moves(rep);
    for (const Move& m : moves) {
      out += xi_chain(apply_move(rep, m));
      out.add(registry_.edge(rep, m), -1);
    }
    out *= Rational(1, static_cast<unsigned long>(moves.size()));
  }
  auto b = registry_.boundary(out);
  std::map<std::string, Rational> expected;
  std::string tet = tetrahedron_key(registry_);
  if (key != tet) {
    expected[key] = 1;
    expected[tet] = -1;
  }
  if (b != expected) throw Error(ErrorKind::ValidationFailed, "xi_chain has the wrong boundary");
  chains_.emplace(key, out);
  return out;
}

Rational XiCache::xi_pairing(const OrientedComplex& sphere) {
  std::lock_guard lock(mutex_);
  return xi_pairing_key(registry_.sphere_key(sphere));
}

Rational XiCache::xi_pairing_key(const std::string& key) {
  auto it = gauge_.find(key);
  if (it != gauge_.end()) return it->second;
  OrientedComplex rep = registry_.sphere_representative(key);
  Rational total = 0;
  if (rep.num_vertices() > 4) {
    auto moves = decreasing_moves(rep);
    for (const Move& m : moves) {
      total += xi_pairing_key(registry_.sphere_key(apply_move(rep, m)));
      EdgeKey e = registry_.edge(rep, m);
      if (e.essential()) total -= e.sign * registry_.gauge(e.key);
    }
    total /= Rational(static_cast<long>(moves.size()));
  }
  gauge_.emplace(key, total);
  return total;
}

void XiCache::load(const std::filesystem::path& path) {
  std::lock_guard lock(mutex_);
  std::ifstream in(path);
  if (!in) return;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::ParseError, "cache " + path.string() + ": " + e.what());
  }
  std::string policy = registry_.policy() == DecompositionPolicy::Primary ? "primary" : "alternate";
  if (j.value("format", "") != "localp1-xi-cache" || j.value("policy", "") != policy) {
    throw Error(ErrorKind::ParseError, "cache " + path.string() + " has a different format or policy");
  }
  auto read_table = [](const nlohmann::json& t) {
    std::map<std::string, Rational> out;
    for (const auto& [hex, value] : t.items()) {
      std::string s = value.get<std::string>();
      auto slash = s.find('/');
      Rational r = slash == std::string::npos ? parse_rational(s, "1") : parse_rational(s.substr(0, slash), s.substr(slash + 1));
      out.emplace(key_from_hex(hex), r);
    }
    return out;
  };
  registry_.preload_gauge(read_table(j.at("gauge")));
  for (auto& [k, v] : read_table(j.at("xi_pairing"))) gauge_.emplace(k, v);
}

void XiCache::save(const std::filesystem::path& path) const {
  std::lock_guard lock(mutex_);
  nlohmann::json j;
  j["format"] = "localp1-xi-cache";
  j["policy"] = registry_.policy() == DecompositionPolicy::Primary ? "primary" : "alternate";
  nlohmann::json g = nlohmann::json::object();
  for (const auto& [k, v] : registry_.gauge_table()) g[key_to_hex(k)] = to_string(v);
  nlohmann::json x = nlohmann::json::object();
  for (const auto& [k, v] : gauge_) x[key_to_hex(k)] = to_string(v);
  j["gauge"] = std::move(g);
  j["xi_pairing"] = std::move(x);
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error(ErrorKind::ValidationFailed, "cannot write " + tmp.string());
    out << j.dump() << '\n';
  }
  std::filesystem::rename(tmp, path);
}

Rational h_value(XiCache& cache, const OrientedComplex& sphere, const Move& m) {
  Gamma2& g = cache.registry();
  Gamma2Chain z;
  z.add(g.edge(sphere, m), 1);
  z += cache.xi_chain(sphere);
  z -= cache.xi_chain(apply_move(sphere, m));
  require_cycle(g, z, "h argument");
  return g.evaluate(z);
}

LocalFormulaResult local_formula(XiCache& cache, const OrientedComplex& sphere, const ReduceOptions& opt) {
  if (sphere.dimension() != 3) throw Error(ErrorKind::SphereCheckFailed, "local formula needs a 3-sphere");
  Gamma2& g = cache.registry();
  LocalFormulaResult out;
  out.reduction = reduce_to_boundary(sphere, opt);
  const OrientedComplex& start = out.reduction.start;
  out.induced = induced_chain(g, out.reduction);
  std::map<std::string, Rational> expected;
  std::string tet = tetrahedron_key(g);
  Rational value = g.pair_with_gauge(out.induced);
  for (Vertex v : start.complex().vertices()) {
    OrientedComplex lk = link(start, Simplex{v});
    std::string key = g.sphere_key(lk);
    out.link_keys.push_back(key);
    expected[key] += 1;
    expected[tet] -= 1;
    value -= cache.xi_pairing(lk);
  }
  for (auto it = expected.begin(); it != expected.end();) it = it->second == 0 ? expected.erase(it) : std::next(it);
  if (g.boundary(out.induced) != expected) throw Error(ErrorKind::NotACycle, "induced chain does not match the vertex links");
  out.value = value;
  return out;
}

Rational local_f(XiCache& cache, const OrientedComplex& sphere, const ReduceOptions& opt) {
  return local_formula(cache, sphere, opt).value;
}

Gamma2Chain local_cycle(XiCache& cache, const LocalFormulaResult& result) {
  Gamma2Chain z = result.induced;
  const OrientedComplex& start = result.reduction.start;
  for (Vertex v : start.complex().vertices()) z -= cache.xi_chain(link(start, Simplex{v}));
  require_cycle(cache.registry(), z, "local cycle");
  return z;
}

namespace {

template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> workers;
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void require_manifold_dim(const OrientedComplex& k) {
  if (k.dimension() < 4) throw Error(ErrorKind::DimensionTooSmall, "the dual of p1 needs dimension at least 4");
}

}  // namespace

SimplicialChain p1_dual_local(XiCache& cache, const OrientedComplex& manifold, const DualOptions& opt) {
  require_manifold_dim(manifold);
  int m = manifold.dimension();
  auto simplices = manifold.complex().faces_of_dim(m - 4);
  std::vector<Rational> values(simplices.size());
  parallel_for(simplices.size(), opt.jobs, [&](std::size_t i) {
    values[i] = local_f(cache, link(manifold, simplices[i]), opt.reduce);
  });
  SimplicialChain out(m - 4);
  for (std::size_t i = 0; i < simplices.size(); ++i) out.add(simplices[i], values[i]);
  if (!out.boundary().is_zero()) throw Error(ErrorKind::NotACycle, "local dual chain is not a cycle");
  return out;
}

SimplicialChain p1_dual_direct(XiCache& cache, const OrientedComplex& manifold, const DualOptions& opt) {
  require_manifold_dim(manifold);
  Gamma2& g = cache.registry();
  int m = manifold.dimension();
  auto ridges = manifold.complex().faces_of_dim(m - 3);
  std::vector<Gamma2Chain> paths(ridges.size());
  std::vector<OrientedComplex> ridge_links(ridges.size());
  parallel_for(ridges.size(), opt.jobs, [&](std::size_t i) {
    ridge_links[i] = link(manifold, ridges[i]);
    paths[i] = path_chain(g, reduce_to_boundary(ridge_links[i], opt.reduce));
  });
  std::map<Simplex, std::size_t> ridge_index;
  for (std::size_t i = 0; i < ridges.size(); ++i) ridge_index[ridges[i]] = i;
  auto simplices = manifold.complex().faces_of_dim(m - 4);
  std::vector<Rational> values(simplices.size());
  parallel_for(simplices.size(), opt.jobs, [&](std::size_t i) {
    const Simplex& face = simplices[i];
    OrientedComplex lk = link(manifold, face);
    Gamma2Chain cycle = induced_chain(g, reduce_to_boundary(lk, opt.reduce));
    for (Vertex v : lk.complex().vertices()) {
      std::size_t r = ridge_index.at(face.with(v));
      OrientedComplex iterated = link(lk, Simplex{v});
      if (iterated.sign_of(ridge_links[r].facets().front()) == ridge_links[r].signs().front()) {
        cycle -= paths[r];
      } else {
        cycle -= mirror_chain(g, paths[r]);
      }
    }
    require_cycle(g, cycle, "direct cycle at " + face.to_string());
    values[i] = g.pair_with_gauge(cycle);
  });
  SimplicialChain out(m - 4);
  for (std::size_t i = 0; i < simplices.size(); ++i) out.add(simplices[i], values[i]);
  if (!out.boundary().is_zero()) throw Error(ErrorKind::NotACycle, "direct dual chain is not a cycle");
  return out;
}

Rational p1_number(XiCache& cache, const OrientedComplex& manifold, const DualOptions& opt) {
  if (manifold.dimension() != 4) throw Error(ErrorKind::DimensionTooSmall, "p1 number needs a 4-manifold");
  return p1_dual_local(cache, manifold, opt).total();
}

bool is_rational_boundary(const Complex& k, const SimplicialChain& chain) {
  int d = chain.degree();
  if (chain.is_zero()) return true;
  if (d + 1 > k.dimension()) return false;
  auto rows = k.faces_of_dim(d);
  auto cols = k.faces_of_dim(d + 1);
  // Boundary matrix is the transpose of the coboundary.
  Matrix cob = coboundary(rows, cols);
  Matrix a(rows.size(), std::vector<Rational>(cols.size() + 1, Rational(0)));
  for (std::size_t r = 0; r < cols.size(); ++r) {
    for (std::size_t c = 0; c < rows.size(); ++c) a[c][r] = cob[r][c];
  }
  std::map<Simplex, std::size_t> index;
  for (std::size_t i = 0; i < rows.size(); ++i) index[rows[i]] = i;
  for (const auto& [s, c] : chain.terms()) {
    auto it = index.find(s);
    if (it == index.end()) return false;
    a[it->second][cols.size()] = c;
  }
  Matrix without = a;
  for (auto& row : without) row.pop_back();
  return rank_of(without, cols.size()) == rank_of(a, cols.size() + 1);
}

int signature(const OrientedComplex& manifold) {
  if (manifold.dimension() != 4) throw Error(ErrorKind::DimensionTooSmall, "signature needs a 4-manifold");
  const Complex& k = manifold.complex();
  auto edges = k.faces_of_dim(1);
  auto triangles = k.faces_of_dim(2);
  auto tets = k.faces_of_dim(3);
  Matrix d1 = coboundary(edges, triangles);
  Matrix d2 = coboundary(triangles, tets);
  Matrix cocycles = null_space(d2, triangles.size());
  // Columns of d1 span the coboundaries; extend them by cocycles to a basis mod coboundaries.
  Matrix span;
  for (std::size_t c = 0; c < edges.size(); ++c) {
    std::vector<Rational> v(triangles.size());
    for (std::size_t r = 0; r < triangles.size(); ++r) v[r] = d1[r][c];
    span.push_back(std::move(v));
  }
  std::size_t base_rank = rank_of(span, triangles.size());
  Matrix classes;
  for (auto& z : cocycles) {
    span.push_back(z);
    std::size_t r = rank_of(span, triangles.size());
    if (r > base_rank) {
      base_rank = r;
      classes.push_back(z);
    } else {
      span.pop_back();
    }
  }
  std::map<Simplex, std::size_t> tri_index;
  for (std::size_t i = 0; i < triangles.size(); ++i) tri_index[triangles[i]] = i;
  std::size_t b = classes.size();
  Matrix q(b, std::vector<Rational>(b, Rational(0)));
  for (std::size_t f = 0; f < manifold.facets().size(); ++f) {
    const Simplex& s = manifold.facets()[f];
    std::size_t front = tri_index.at(Simplex{s[0], s[1], s[2]});
    std::size_t back = tri_index.at(Simplex{s[2], s[3], s[4]});
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t j = 0; j < b; ++j) q[i][j] += manifold.signs()[f] * classes[i][front] * classes[j][back];
    }
  }
  // Diagonalize by congruence and count signs.
  int sig = 0;
  std::size_t n = b;
  std::vector<char> done(n, 0);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t p = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!done[i] && q[i][i] != 0) {
        p = i;
        break;
      }
    }
    if (p == n) {
      // All remaining diagonal entries vanish: combine two rows with a nonzero off-diagonal entry.
      std::size_t a = n, c = n;
      for (std::size_t i = 0; i < n && a == n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (!done[i] && !done[j] && i != j && q[i][j] != 0) {
            a = i;
            c = j;
            break;
          }
        }
      }
      if (a == n) break;  // remaining block is zero (degenerate pairing)
      for (std::size_t j = 0; j < n; ++j) q[a][j] += q[c][j];
      for (std::size_t i = 0; i < n; ++i) q[i][a] += q[i][c];
      p = a;
    }
    done[p] = 1;
    sig += q[p][p] > 0 ? 1 : -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || q[i][p] == 0) continue;
      Rational f = q[i][p] / q[p][p];
      for (std::size_t j = 0; j < n; ++j) q[i][j] -= f * q[p][j];
      for (std::size_t j = 0; j < n; ++j) q[j][i] -= f * q[j][p];
    }
  }
  return sig;
}

Mod2Chain mod2_boundary(const Mod2Chain& c) {
  Mod2Chain out;
  out.degree = c.degree - 1;
  if (c.degree == 0) return out;
  std::map<Simplex, int> count;
  for (const Simplex& s : c.simplices) {
    for (std::size_t i = 0; i < s.size(); ++i) count[s.without_index(i)] ^= 1;
  }
  for (auto& [s, x] : count) {
    if (x) out.simplices.push_back(s);
  }
  return out;
}

bool is_mod2_boundary(const Complex& k, const Mod2Chain& c) {
  if (c.simplices.empty()) return true;
  if (c.degree + 1 > k.dimension()) return false;
  auto rows = k.faces_of_dim(c.degree);
  auto cols = k.faces_of_dim(c.degree + 1);
  std::map<Simplex, std::size_t> index;
  for (std::size_t i = 0; i < rows.size(); ++i) index[rows[i]] = i;
  std::size_t words = (rows.size() + 63) / 64;
  using Bits = std::vector<std::uint64_t>;
  auto set = [](Bits& b, std::size_t i) { b[i / 64] ^= std::uint64_t{1} << (i % 64); };
  auto test = [](const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1U; };
  std::map<std::size_t, Bits> basis;  // pivot -> vector with that lowest set bit
  auto reduce = [&](Bits v) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!test(v, i)) continue;
      auto it = basis.find(i);
      if (it == basis.end()) return std::make_pair(v, i);
      for (std::size_t w = 0; w < words; ++w) v[w] ^= it->second[w];
    }
    return std::make_pair(v, rows.size());
  };
  for (const Simplex& s : cols) {
    Bits v(words, 0);
    for (std::size_t i = 0; i < s.size(); ++i) set(v, index.at(s.without_index(i)));
    auto [r, pivot] = reduce(std::move(v));
    if (pivot < rows.size()) basis.emplace(pivot, std::move(r));
  }
  Bits target(words, 0);
  for (const Simplex& s : c.simplices) {
    auto it = index.find(s);
    if (it == index.end()) return false;
    set(target, it->second);
  }
  return reduce(std::move(target)).second == rows.size();
}

StiefelWhitneyDuals sw_duals(const Complex& k) {
  if (!is_closed_pseudomanifold(k)) throw Error(ErrorKind::NotClosedManifold, "sw_duals needs a closed manifold");
  StiefelWhitneyDuals out;
  BarycentricSubdivision sd = barycentric_subdivision(k);
  out.subdivision = sd.complex;
  out.vertex_face = sd.vertex_face;
  for (int d = 0; d <= k.dimension(); ++d) {
    Mod2Chain c;
    c.degree = d;
    c.simplices = out.subdivision.faces_of_dim(d);
    if (!mod2_boundary(c).simplices.empty()) {
      throw Error(ErrorKind::ValidationFailed, "W_" + std::to_string(d) + " is not a mod 2 cycle");
    }
    out.chains.push_back(std::move(c));
  }
  return out;
}

}  // namespace localp1
