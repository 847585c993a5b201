#include "localp1/library.hpp"

#include "localp1/error.hpp"

namespace localp1 {

Complex cross_polytope_boundary(int d) {
  std::vector<std::vector<Vertex>> facets;
  for (int mask = 0; mask < (1 << d); ++mask) {
    std::vector<Vertex> f;
    for (int i = 0; i < d; ++i) f.push_back(2 * i + ((mask >> i) & 1));
    facets.push_back(f);
  }
  return Complex::from_lists(facets);
}

Complex octahedron() { return cross_polytope_boundary(3); }

Complex icosahedron() {
  std::vector<std::vector<Vertex>> facets;
  auto up = [](int i) { return 1 + (i % 5); };
  auto low = [](int i) { return 6 + (i % 5); };
  for (int i = 0; i < 5; ++i) {
    facets.push_back({0, up(i), up(i + 1)});
    facets.push_back({up(i), up(i + 1), low(i)});
    facets.push_back({up(i + 1), low(i + 1), low(i)});
    facets.push_back({11, low(i), low(i + 1)});
  }
  return Complex::from_lists(facets);
}

Complex rp2_6() {
  return Complex::from_lists({{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 5, 1},
                              {1, 2, 4}, {2, 3, 5}, {3, 4, 1}, {4, 5, 2}, {5, 1, 3}});
}

Complex cp2_9() {
  return Complex::from_lists({
      {0, 1, 2, 3, 4}, {0, 1, 2, 3, 5}, {0, 1, 2, 4, 5}, {0, 1, 3, 4, 6}, {0, 1, 3, 5, 7}, {0, 1, 3, 6, 7},
      {0, 1, 4, 5, 6}, {0, 1, 5, 6, 8}, {0, 1, 5, 7, 8}, {0, 1, 6, 7, 8}, {0, 2, 3, 4, 8}, {0, 2, 3, 5, 8},
      {0, 2, 4, 5, 6}, {0, 2, 4, 6, 7}, {0, 2, 4, 7, 8}, {0, 2, 5, 6, 8}, {0, 2, 6, 7, 8}, {0, 3, 4, 6, 7},
      {0, 3, 4, 7, 8}, {0, 3, 5, 7, 8}, {1, 2, 3, 4, 8}, {1, 2, 3, 5, 7}, {1, 2, 3, 6, 7}, {1, 2, 3, 6, 8},
      {1, 2, 4, 5, 7}, {1, 2, 4, 7, 8}, {1, 2, 6, 7, 8}, {1, 3, 4, 6, 8}, {1, 4, 5, 6, 8}, {1, 4, 5, 7, 8},
      {2, 3, 5, 6, 7}, {2, 3, 5, 6, 8}, {2, 4, 5, 6, 7}, {3, 4, 5, 6, 7}, {3, 4, 5, 6, 8}, {3, 4, 5, 7, 8},
  });
}

OrientedComplex oriented(const Complex& k) {
  auto o = orient(k);
  if (!o) throw Error(ErrorKind::NonOrientable, "complex is not orientable");
  return *o;
}

std::vector<LibraryEntry> library_entries() {
  std::vector<LibraryEntry> out;
  for (int n = 1; n <= 6; ++n) {
    Complex k = simplex_boundary(n).complex();
    std::vector<std::size_t> f;
    for (int d = 0; d < n; ++d) {
      // binomial(n+1, d+1)
      std::size_t c = 1;
      for (int i = 0; i < d + 1; ++i) c = c * static_cast<std::size_t>(n + 1 - i) / static_cast<std::size_t>(i + 1);
      f.push_back(c);
    }
    out.push_back({"boundary_simplex_" + std::to_string(n), k, f, (n - 1) % 2 == 0 ? 2 : 0, true});
  }
  out.push_back({"octahedron", octahedron(), {6, 12, 8}, 2, true});
  out.push_back({"icosahedron", icosahedron(), {12, 30, 20}, 2, true});
  out.push_back({"rp2_6", rp2_6(), {6, 15, 10}, 1, false});
  out.push_back({"cross_polytope_4", cross_polytope_boundary(4), {8, 24, 32, 16}, 0, true});
  out.push_back({"cross_polytope_5", cross_polytope_boundary(5), {10, 40, 80, 80, 32}, 2, true});
  out.push_back({"cp2_9", cp2_9(), {9, 36, 84, 90, 36}, 3, true});
  return out;
}

std::optional<LibraryEntry> library_entry(const std::string& name) {
  for (auto& e : library_entries()) {
    if (e.name == name) return e;
  }
  return std::nullopt;
}

void validate_entry(const LibraryEntry& e) {
  auto fail = [&](const std::string& what) { throw Error(ErrorKind::ValidationFailed, e.name + ": " + what); };
  if (e.complex.f_vector() != e.f_vector) fail("f-vector mismatch");
  if (e.complex.euler_characteristic() != e.euler_characteristic) fail("Euler characteristic mismatch");
  if (!is_closed_pseudomanifold(e.complex)) fail("not a closed pseudomanifold");
  if (orient(e.complex).has_value() != e.orientable) fail("orientability mismatch");
  if (e.name == "cp2_9") {
    for (Vertex v : e.complex.vertices()) {
      Complex lk = link(e.complex, Simplex{v});
      if (lk.num_vertices() != 8 || lk.dimension() != 3 || !is_closed_pseudomanifold(lk)) fail("vertex link is not an 8-vertex closed 3-pseudomanifold");
      for (Vertex w : lk.vertices()) {
        Complex lk2 = link(lk, Simplex{w});
        if (lk2.euler_characteristic() != 2 || !is_closed_pseudomanifold(lk2)) fail("edge link is not a 2-sphere");
      }
    }
  }
}

}  // namespace localp1
