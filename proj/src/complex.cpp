#include "localp1/complex.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "localp1/error.hpp"

namespace localp1 {

Complex::Complex(std::vector<Simplex> facets) : facets_(std::move(facets)) {
  std::sort(facets_.begin(), facets_.end());
  if (std::adjacent_find(facets_.begin(), facets_.end()) != facets_.end()) {
    throw Error(ErrorKind::FacetContainment, "duplicate facet");
  }
  bool uniform = std::all_of(facets_.begin(), facets_.end(),
                             [&](const Simplex& s) { return s.size() == facets_.front().size(); });
  if (!uniform) {
    for (std::size_t i = 0; i < facets_.size(); ++i) {
      for (std::size_t j = 0; j < facets_.size(); ++j) {
        if (i != j && facets_[i].size() < facets_[j].size() && facets_[j].contains(facets_[i])) {
          throw Error(ErrorKind::FacetContainment,
                      facets_[i].to_string() + " is contained in " + facets_[j].to_string());
        }
      }
    }
  }
  finish();
}

Complex::Complex(std::vector<Simplex> sorted_facets, Trusted) : facets_(std::move(sorted_facets)) { finish(); }

Complex Complex::from_lists(const std::vector<std::vector<Vertex>>& facets) {
  if (facets.empty()) throw Error(ErrorKind::InvalidParams, "empty facet list");
  std::vector<Simplex> simplices;
  simplices.reserve(facets.size());
  for (const auto& f : facets) {
    for (Vertex v : f) {
      if (v < 0) throw Error(ErrorKind::InvalidParams, "negative vertex id");
    }
    simplices.push_back(Simplex::from_unsorted(f));
  }
  return Complex(std::move(simplices));
}

void Complex::finish() {
  std::set<Vertex> vs;
  dimension_ = -1;
  for (const Simplex& f : facets_) {
    vs.insert(f.begin(), f.end());
    dimension_ = std::max(dimension_, f.dim());
  }
  vertices_.assign(vs.begin(), vs.end());
}

bool Complex::is_pure() const noexcept {
  return std::all_of(facets_.begin(), facets_.end(), [&](const Simplex& s) { return s.dim() == dimension_; });
}

bool Complex::has_face(const Simplex& s) const noexcept {
  return std::any_of(facets_.begin(), facets_.end(), [&](const Simplex& f) { return f.contains(s); });
}

int Complex::facet_index(const Simplex& facet) const noexcept {
  auto it = std::lower_bound(facets_.begin(), facets_.end(), facet);
  return (it != facets_.end() && *it == facet) ? static_cast<int>(it - facets_.begin()) : -1;
}

int Complex::facet_degree(Vertex v) const noexcept {
  return static_cast<int>(std::count_if(facets_.begin(), facets_.end(), [&](const Simplex& f) { return f.contains(v); }));
}

std::vector<Simplex> Complex::faces_of_dim(int d) const {
  std::set<Simplex> out;
  std::size_t k = static_cast<std::size_t>(d + 1);
  for (const Simplex& f : facets_) {
    if (f.size() < k) continue;
    std::vector<int> mask(f.size(), 0);
    std::fill(mask.begin(), mask.begin() + static_cast<long>(k), 1);
    do {
      std::vector<Vertex> pick;
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (mask[i]) pick.push_back(f[i]);
      }
      out.insert(Simplex::from_unsorted(pick));
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return {out.begin(), out.end()};
}

std::vector<Simplex> Complex::all_faces() const {
  std::vector<Simplex> out;
  for (int d = 0; d <= dimension_; ++d) {
    auto part = faces_of_dim(d);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<std::size_t> Complex::f_vector() const {
  std::vector<std::size_t> f;
  for (int d = 0; d <= dimension_; ++d) f.push_back(faces_of_dim(d).size());
  return f;
}

long Complex::euler_characteristic() const {
  long chi = 0;
  auto f = f_vector();
  for (std::size_t d = 0; d < f.size(); ++d) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(f[d]);
  return chi;
}

std::vector<std::vector<int>> ridge_neighbors(const Complex& k) {
  const auto& facets = k.facets();
  std::vector<std::vector<int>> nb(facets.size());
  std::unordered_map<Simplex, std::pair<int, int>, SimplexHash> open;
  open.reserve(facets.size() * 4);
  for (std::size_t f = 0; f < facets.size(); ++f) {
    nb[f].assign(facets[f].size(), -1);
    for (std::size_t i = 0; i < facets[f].size(); ++i) {
      Simplex ridge = facets[f].without_index(i);
      auto [it, inserted] = open.try_emplace(ridge, static_cast<int>(f), static_cast<int>(i));
      if (inserted) continue;
      auto [g, j] = it->second;
      if (g < 0) throw Error(ErrorKind::NotPseudomanifold, "ridge " + ridge.to_string() + " lies in three or more facets");
      nb[f][i] = g;
      nb[static_cast<std::size_t>(g)][static_cast<std::size_t>(j)] = static_cast<int>(f);
      it->second = {-1, -1};
    }
  }
  return nb;
}

bool is_strongly_connected(const Complex& k) {
  const auto& facets = k.facets();
  if (facets.empty()) return false;
  auto nb = ridge_neighbors(k);
  std::vector<char> seen(facets.size(), 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!queue.empty()) {
    int f = queue.front();
    queue.pop_front();
    for (int g : nb[static_cast<std::size_t>(f)]) {
      if (g >= 0 && !seen[static_cast<std::size_t>(g)]) {
        seen[static_cast<std::size_t>(g)] = 1;
        ++count;
        queue.push_back(g);
      }
    }
  }
  return count == facets.size();
}

bool is_closed_pseudomanifold(const Complex& k) {
  if (k.facets().empty() || !k.is_pure()) return false;
  std::vector<std::vector<int>> nb;
  try {
    nb = ridge_neighbors(k);
  } catch (const Error&) {
    return false;
  }
  for (const auto& row : nb) {
    if (std::find(row.begin(), row.end(), -1) != row.end()) return false;
  }
  return is_strongly_connected(k);
}

namespace {

// Local index in facet g of the vertex not in facet f (adjacent facets).
int opposite_index(const Simplex& g, const Simplex& f) {
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (!f.contains(g[j])) return static_cast<int>(j);
  }
  return -1;
}

int parity(std::size_t i) { return (i % 2 == 0) ? 1 : -1; }

}  // namespace

bool signs_are_coherent(const Complex& k, const std::vector<int>& signs) {
  if (signs.size() != k.facets().size() || !k.is_pure()) return false;
  std::vector<std::vector<int>> nb;
  try {
    nb = ridge_neighbors(k);
  } catch (const Error&) {
    return false;
  }
  const auto& facets = k.facets();
  for (std::size_t f = 0; f < facets.size(); ++f) {
    if (signs[f] != 1 && signs[f] != -1) return false;
    for (std::size_t i = 0; i < facets[f].size(); ++i) {
      int g = nb[f][i];
      if (g < 0) return false;
      int j = opposite_index(facets[static_cast<std::size_t>(g)], facets[f]);
      if (parity(i) * signs[f] != -parity(static_cast<std::size_t>(j)) * signs[static_cast<std::size_t>(g)]) return false;
    }
  }
  return true;
}

OrientedComplex::OrientedComplex(Complex k, std::vector<int> signs) : complex_(std::move(k)), signs_(std::move(signs)) {
  if (!complex_.is_pure()) throw Error(ErrorKind::NotPseudomanifold, "complex is not pure");
  if (!signs_are_coherent(complex_, signs_)) {
    throw Error(ErrorKind::NonOrientable, "facet signs are not a coherent orientation of a closed pseudomanifold");
  }
}

int OrientedComplex::sign_of(const Simplex& facet) const {
  int i = complex_.facet_index(facet);
  if (i < 0) throw Error(ErrorKind::SimplexNotInComplex, facet.to_string() + " is not a facet");
  return signs_[static_cast<std::size_t>(i)];
}

int OrientedComplex::sign_of_ordered(std::span<const Vertex> ordered) const {
  return sign_of(Simplex::from_unsorted(ordered)) * permutation_sign(ordered);
}

OrientedComplex OrientedComplex::reversed() const {
  std::vector<int> s(signs_);
  for (int& x : s) x = -x;
  return OrientedComplex(complex_, std::move(s), Trusted{});
}

std::optional<OrientedComplex> orient(const Complex& k) {
  if (k.facets().empty() || !k.is_pure()) throw Error(ErrorKind::NotPseudomanifold, "complex is not pure");
  auto nb = ridge_neighbors(k);
  const auto& facets = k.facets();
  for (const auto& row : nb) {
    if (std::find(row.begin(), row.end(), -1) != row.end()) {
      throw Error(ErrorKind::NotPseudomanifold, "complex has boundary ridges");
    }
  }
  std::vector<int> signs(facets.size(), 0);
  for (std::size_t seed = 0; seed < facets.size(); ++seed) {
    if (signs[seed] != 0) continue;
    signs[seed] = 1;
    std::deque<std::size_t> queue{seed};
    while (!queue.empty()) {
      std::size_t f = queue.front();
      queue.pop_front();
      for (std::size_t i = 0; i < facets[f].size(); ++i) {
        auto g = static_cast<std::size_t>(nb[f][i]);
        int j = opposite_index(facets[g], facets[f]);
        int want = -parity(i) * parity(static_cast<std::size_t>(j)) * signs[f];
        if (signs[g] == 0) {
          signs[g] = want;
          queue.push_back(g);
        } else if (signs[g] != want) {
          return std::nullopt;
        }
      }
    }
  }
  return OrientedComplex(k, std::move(signs), OrientedComplex::Trusted{});
}

Complex link(const Complex& k, const Simplex& face) {
  std::vector<Simplex> out;
  for (const Simplex& f : k.facets()) {
    if (f.contains(face)) out.push_back(f.minus(face));
  }
  if (out.empty()) throw Error(ErrorKind::SimplexNotInComplex, face.to_string());
  std::sort(out.begin(), out.end());
  return Complex(std::move(out), Complex::Trusted{});
}

OrientedComplex link(const OrientedComplex& k, const Simplex& face) {
  std::vector<std::pair<Simplex, int>> out;
  const auto& facets = k.facets();
  for (std::size_t i = 0; i < facets.size(); ++i) {
    if (!facets[i].contains(face)) continue;
    Simplex rest = facets[i].minus(face);
    out.emplace_back(rest, k.signs()[i] * concatenation_sign(face, rest));
  }
  if (out.empty()) throw Error(ErrorKind::SimplexNotInComplex, face.to_string());
  std::sort(out.begin(), out.end());
  std::vector<Simplex> fs;
  std::vector<int> ss;
  for (auto& [s, e] : out) {
    fs.push_back(s);
    ss.push_back(e);
  }
  return OrientedComplex(Complex(std::move(fs), Complex::Trusted{}), std::move(ss), OrientedComplex::Trusted{});
}

Complex star(const Complex& k, const Simplex& face) {
  std::vector<Simplex> out;
  for (const Simplex& f : k.facets()) {
    if (f.contains(face)) out.push_back(f);
  }
  if (out.empty()) throw Error(ErrorKind::SimplexNotInComplex, face.to_string());
  return Complex(std::move(out), Complex::Trusted{});
}

namespace {

Vertex join_offset(const Complex& a, const Complex& b) {
  bool disjoint = true;
  for (Vertex v : b.vertices()) {
    if (std::binary_search(a.vertices().begin(), a.vertices().end(), v)) disjoint = false;
  }
  return disjoint ? 0 : a.max_vertex() + 1;
}

Simplex shifted(const Simplex& s, Vertex offset) {
  std::vector<Vertex> v(s.begin(), s.end());
  for (Vertex& x : v) x += offset;
  return Simplex::from_unsorted(v);
}

}  // namespace

JoinResult join(const Complex& a, const Complex& b) {
  Vertex offset = join_offset(a, b);
  std::vector<Simplex> out;
  for (const Simplex& f : a.facets()) {
    for (const Simplex& g : b.facets()) out.push_back(f.unite(shifted(g, offset)));
  }
  std::sort(out.begin(), out.end());
  return {Complex(std::move(out), Complex::Trusted{}), offset};
}

OrientedComplex join(const OrientedComplex& a, const OrientedComplex& b) {
  Vertex offset = join_offset(a.complex(), b.complex());
  std::vector<std::pair<Simplex, int>> out;
  for (std::size_t i = 0; i < a.facets().size(); ++i) {
    for (std::size_t j = 0; j < b.facets().size(); ++j) {
      Simplex g = shifted(b.facets()[j], offset);
      const Simplex& f = a.facets()[i];
      out.emplace_back(f.unite(g), a.signs()[i] * b.signs()[j] * concatenation_sign(f, g));
    }
  }
  std::sort(out.begin(), out.end());
  std::vector<Simplex> fs;
  std::vector<int> ss;
  for (auto& [s, e] : out) {
    fs.push_back(s);
    ss.push_back(e);
  }
  return OrientedComplex(Complex(std::move(fs), Complex::Trusted{}), std::move(ss), OrientedComplex::Trusted{});
}

Complex cone(const Complex& k) {
  Complex apex(std::vector<Simplex>{Simplex{0}}, Complex::Trusted{});
  return join(k, apex).complex;
}

BarycentricSubdivision barycentric_subdivision(const Complex& k) {
  BarycentricSubdivision out;
  out.vertex_face = k.all_faces();
  std::map<Simplex, int> index;
  for (std::size_t i = 0; i < out.vertex_face.size(); ++i) index[out.vertex_face[i]] = static_cast<int>(i);
  std::vector<Simplex> facets;
  for (const Simplex& f : k.facets()) {
    std::vector<Vertex> order(f.begin(), f.end());
    do {
      std::vector<Vertex> chain;
      std::vector<Vertex> prefix;
      for (Vertex v : order) {
        prefix.push_back(v);
        chain.push_back(index.at(Simplex::from_unsorted(prefix)));
      }
      facets.push_back(Simplex::from_unsorted(chain));
    } while (std::next_permutation(order.begin(), order.end()));
  }
  std::sort(facets.begin(), facets.end());
  out.complex = Complex(std::move(facets), Complex::Trusted{});
  return out;
}

Complex relabel(const Complex& k, const std::vector<Vertex>& map) {
  std::vector<Simplex> out;
  for (const Simplex& f : k.facets()) {
    std::vector<Vertex> v;
    for (Vertex x : f) v.push_back(map.at(static_cast<std::size_t>(x)));
    out.push_back(Simplex::from_unsorted(v));
  }
  std::sort(out.begin(), out.end());
  return Complex(std::move(out), Complex::Trusted{});
}

OrientedComplex relabel(const OrientedComplex& k, const std::vector<Vertex>& map) {
  std::vector<std::pair<Simplex, int>> out;
  for (std::size_t i = 0; i < k.facets().size(); ++i) {
    std::vector<Vertex> v;
    for (Vertex x : k.facets()[i]) v.push_back(map.at(static_cast<std::size_t>(x)));
    out.emplace_back(Simplex::from_unsorted(v), k.signs()[i] * permutation_sign(v));
  }
  std::sort(out.begin(), out.end());
  std::vector<Simplex> fs;
  std::vector<int> ss;
  for (auto& [s, e] : out) {
    fs.push_back(s);
    ss.push_back(e);
  }
  return OrientedComplex(Complex(std::move(fs), Complex::Trusted{}), std::move(ss), OrientedComplex::Trusted{});
}

OrientedComplex simplex_boundary(int n) {
  std::vector<Vertex> all(static_cast<std::size_t>(n + 1));
  std::iota(all.begin(), all.end(), 0);
  Simplex full = Simplex::from_unsorted(all);
  std::vector<Simplex> fs;
  std::vector<int> ss;
  // Facets without vertex i, listed in ascending lexicographic order (i descending).
  for (int i = n; i >= 0; --i) {
    fs.push_back(full.without_index(static_cast<std::size_t>(i)));
    ss.push_back(parity(static_cast<std::size_t>(i)));
  }
  return OrientedComplex(Complex(std::move(fs), Complex::Trusted{}), std::move(ss), OrientedComplex::Trusted{});
}

}  // namespace localp1
