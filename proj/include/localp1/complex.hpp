// Abstract simplicial complexes stored by facets, and oriented closed
// pseudomanifolds carrying a coherent sign per facet.
#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "localp1/simplex.hpp"

namespace localp1 {

class Complex {
 public:
  struct Trusted {};  // facets already sorted, maximal and duplicate free

  Complex() = default;
  // Validates: no facet contains another (FacetContainment).
  explicit Complex(std::vector<Simplex> facets);
  Complex(std::vector<Simplex> sorted_facets, Trusted);

  // build_complex: facets given as vertex lists in any order.
  static Complex from_lists(const std::vector<std::vector<Vertex>>& facets);

  const std::vector<Simplex>& facets() const noexcept { return facets_; }
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  int dimension() const noexcept { return dimension_; }
  bool is_pure() const noexcept;

  bool has_face(const Simplex& s) const noexcept;
  // Index of an exact facet in facets(), or -1.
  int facet_index(const Simplex& facet) const noexcept;
  // Number of facets containing v.
  int facet_degree(Vertex v) const noexcept;
  Vertex max_vertex() const noexcept { return vertices_.empty() ? -1 : vertices_.back(); }

  std::vector<Simplex> faces_of_dim(int d) const;
  // All non-empty faces, ordered by dimension and then lexicographically.
  std::vector<Simplex> all_faces() const;
  std::vector<std::size_t> f_vector() const;
  long euler_characteristic() const;

  friend bool operator==(const Complex& a, const Complex& b) { return a.facets_ == b.facets_; }

 private:
  void finish();

  std::vector<Simplex> facets_;
  std::vector<Vertex> vertices_;
  int dimension_ = -1;
};

// For a pure complex: neighbor[f][i] is the index of the other facet sharing
// the ridge facets[f] minus its i-th vertex, or -1 if that ridge is a
// boundary ridge. Throws NotPseudomanifold when a ridge lies in 3+ facets.
std::vector<std::vector<int>> ridge_neighbors(const Complex& k);

// Pure, every ridge in exactly two facets, strongly connected.
bool is_closed_pseudomanifold(const Complex& k);
bool is_strongly_connected(const Complex& k);

class OrientedComplex {
 public:
  struct Trusted {};

  OrientedComplex() = default;
  // Validates that k is a closed pseudomanifold and the signs are coherent.
  OrientedComplex(Complex k, std::vector<int> signs);
  OrientedComplex(Complex k, std::vector<int> signs, Trusted) noexcept
      : complex_(std::move(k)), signs_(std::move(signs)) {}

  const Complex& complex() const noexcept { return complex_; }
  const std::vector<Simplex>& facets() const noexcept { return complex_.facets(); }
  const std::vector<int>& signs() const noexcept { return signs_; }
  int dimension() const noexcept { return complex_.dimension(); }
  std::size_t num_vertices() const noexcept { return complex_.num_vertices(); }

  // Sign of a facet written in ascending order. Throws if not a facet.
  int sign_of(const Simplex& facet) const;
  // Sign of a facet written in the given vertex order.
  int sign_of_ordered(std::span<const Vertex> ordered) const;

  OrientedComplex reversed() const;

  friend bool operator==(const OrientedComplex& a, const OrientedComplex& b) {
    return a.complex_ == b.complex_ && a.signs_ == b.signs_;
  }

 private:
  Complex complex_;
  std::vector<int> signs_;
};

// True when the signs form a coherent orientation of a closed pseudomanifold.
bool signs_are_coherent(const Complex& k, const std::vector<int>& signs);

// Propagates signs from +1 on the lexicographically least facet. Returns
// nullopt when the complex is non-orientable; throws NotPseudomanifold.
std::optional<OrientedComplex> orient(const Complex& k);

Complex link(const Complex& k, const Simplex& face);
// Induced orientation: if the facet face ∪ rest has sign e when written
// with the vertices of face first (each part ascending), rest gets sign e.
OrientedComplex link(const OrientedComplex& k, const Simplex& face);
Complex star(const Complex& k, const Simplex& face);

struct JoinResult {
  Complex complex;
  // Relabeling applied to the second factor: new id = old id + offset.
  Vertex second_offset = 0;
};
// Vertex sets must be disjoint, otherwise the second factor is shifted.
JoinResult join(const Complex& a, const Complex& b);
// Orientation of a facet (F1, F2) is sign(F1) * sign(F2).
OrientedComplex join(const OrientedComplex& a, const OrientedComplex& b);
Complex cone(const Complex& k);

struct BarycentricSubdivision {
  Complex complex;
  std::vector<Simplex> vertex_face;  // K' vertex i is the barycenter of this face
};
BarycentricSubdivision barycentric_subdivision(const Complex& k);

// Relabels vertices through a map old -> new (must be injective on the
// vertex set). Orientation signs are recomputed for the new ascending order.
Complex relabel(const Complex& k, const std::vector<Vertex>& map);
OrientedComplex relabel(const OrientedComplex& k, const std::vector<Vertex>& map);

// Boundary complex of the simplex on vertices 0..n (the n-1 sphere), with
// the orientation induced as the boundary of +[0..n].
OrientedComplex simplex_boundary(int n);

}  // namespace localp1
