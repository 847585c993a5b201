#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "localp1/canonical.hpp"
#include "localp1/error.hpp"
#include "localp1/io.hpp"
#include "localp1/library.hpp"

using namespace localp1;

namespace {

std::vector<Vertex> random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<Vertex> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<Vertex>(i);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

bool closed_under_subsets(const Complex& k) {
  auto faces = k.all_faces();
  std::set<Simplex> all(faces.begin(), faces.end());
  for (const Simplex& f : faces) {
    for (std::size_t i = 0; i < f.size() && f.size() > 1; ++i) {
      if (!all.count(f.without_index(i))) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("build_complex examples") {
  Complex d3 = simplex_boundary(3).complex();
  CHECK(d3.dimension() == 2);
  CHECK(d3.f_vector() == std::vector<std::size_t>{4, 6, 4});
  Complex tri = Complex::from_lists({{0, 1, 2}});
  CHECK(tri.f_vector() == std::vector<std::size_t>{3, 3, 1});
  Complex rp2 = rp2_6();
  CHECK(rp2.f_vector() == std::vector<std::size_t>{6, 15, 10});
  CHECK(rp2.euler_characteristic() == 1);
  CHECK_THROWS_AS(Complex::from_lists({{0, 0, 1}}), Error);
  try {
    Complex::from_lists({{0, 1, 2}, {0, 1}});
    FAIL("expected containment error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FacetContainment);
  }
  CHECK(closed_under_subsets(rp2));
  CHECK(closed_under_subsets(cp2_9()));
}

TEST_CASE("link examples") {
  Complex d3 = simplex_boundary(3).complex();
  CHECK(link(d3, Simplex{0}) == Complex::from_lists({{1, 2}, {1, 3}, {2, 3}}));
  Complex oct = octahedron();
  Complex vl = link(oct, Simplex{0});
  CHECK(vl.num_vertices() == 4);
  CHECK(vl.facets().size() == 4);
  Complex el = link(oct, Simplex{0, 2});
  CHECK(el == Complex::from_lists({{4}, {5}}));
  CHECK(link(oct, Simplex{}) == oct);
  CHECK_THROWS_AS(link(oct, Simplex{0, 1}), Error);
}

TEST_CASE("link of link equals link") {
  Complex k = cp2_9();
  for (const Simplex& complement : k.faces_of_dim(2)) {
    for (Vertex v : complement) {
      Simplex face{v};
      CHECK(link(link(k, face), complement.minus(face)) == link(k, complement));
    }
  }
  OrientedComplex ok = oriented(k);
  for (const Simplex& complement : k.faces_of_dim(1)) {
    Simplex face{complement[0]};
    OrientedComplex a = link(link(ok, face), complement.minus(face));
    OrientedComplex b = link(ok, complement);
    CHECK(a == b);
  }
}

TEST_CASE("join and cone") {
  Complex s0 = Complex::from_lists({{0}, {1}});
  Complex sq = join(s0, s0).complex;
  CHECK(sq.f_vector() == std::vector<std::size_t>{4, 4});
  Complex c = cone(simplex_boundary(2).complex());
  CHECK(c.num_vertices() == 4);
  CHECK(c.facets().size() == 3);
  Complex bip = join(simplex_boundary(2).complex(), simplex_boundary(1).complex()).complex;
  CHECK(bip.f_vector() == std::vector<std::size_t>{5, 9, 6});
}

TEST_CASE("star is isomorphic to simplex join link") {
  std::mt19937_64 rng(7);
  std::vector<Complex> pool{icosahedron(), octahedron(), cp2_9(), cross_polytope_boundary(4)};
  for (int trial = 0; trial < 100; ++trial) {
    const Complex& k = pool[static_cast<std::size_t>(trial) % pool.size()];
    auto faces = k.all_faces();
    const Simplex& face = faces[rng() % faces.size()];
    if (face.size() == k.facets().front().size()) continue;
    Complex simplex_part(std::vector<Simplex>{face}, Complex::Trusted{});
    Complex j = join(simplex_part, link(k, face)).complex;
    CHECK(canonical_form(star(k, face)).key == canonical_form(j).key);
  }
}

TEST_CASE("barycentric subdivision") {
  Complex edge = Complex::from_lists({{0, 1}});
  CHECK(barycentric_subdivision(edge).complex.f_vector() == std::vector<std::size_t>{3, 2});
  auto sd = barycentric_subdivision(simplex_boundary(3).complex());
  CHECK(sd.complex.f_vector() == std::vector<std::size_t>{14, 36, 24});
  CHECK(sd.complex.euler_characteristic() == 2);
  auto hex = barycentric_subdivision(simplex_boundary(2).complex()).complex;
  CHECK(hex.f_vector() == std::vector<std::size_t>{6, 6});
  for (const auto& k : {rp2_6(), octahedron(), cp2_9()}) {
    CHECK(barycentric_subdivision(k).complex.euler_characteristic() == k.euler_characteristic());
  }
}

TEST_CASE("orient") {
  auto d3 = orient(simplex_boundary(3).complex());
  REQUIRE(d3.has_value());
  CHECK(d3->signs().size() == 4);
  CHECK(!orient(rp2_6()).has_value());
  CHECK(orient(octahedron()).has_value());
  // The only other coherent assignment is the reversal.
  OrientedComplex o = oriented(icosahedron());
  CHECK(o.signs().front() == 1);
  CHECK(signs_are_coherent(o.complex(), o.reversed().signs()));
  auto flipped = o.signs();
  flipped[3] = -flipped[3];
  CHECK(!signs_are_coherent(o.complex(), flipped));
  CHECK_THROWS_AS(orient(Complex::from_lists({{0, 1, 2}})), Error);
}

TEST_CASE("simplex boundary orientation is induced from the simplex") {
  for (int n = 1; n <= 6; ++n) {
    OrientedComplex b = simplex_boundary(n);
    CHECK(signs_are_coherent(b.complex(), b.signs()));
    // Facet without vertex 0 is positive.
    std::vector<Vertex> rest;
    for (int i = 1; i <= n; ++i) rest.push_back(i);
    CHECK(b.sign_of(Simplex::from_unsorted(rest)) == 1);
  }
}

TEST_CASE("library entries validate") {
  for (const auto& e : library_entries()) {
    CHECK_NOTHROW(validate_entry(e));
  }
}

TEST_CASE("canonical form invariance") {
  std::mt19937_64 rng(11);
  for (const Complex& k : {octahedron(), icosahedron(), rp2_6(), cp2_9()}) {
    CanonicalKey base = canonical_form(k);
    for (int t = 0; t < 5; ++t) {
      auto p = random_permutation(static_cast<std::size_t>(k.max_vertex() + 1), rng);
      CHECK(canonical_form(relabel(k, p)).key == base.key);
    }
  }
  CHECK(canonical_form(simplex_boundary(4).complex()).key != canonical_form(cross_polytope_boundary(4)).key);
}

TEST_CASE("canonical labeling reproduces the key representative") {
  std::mt19937_64 rng(5);
  Complex k = icosahedron();
  Complex rep = relabel(k, canonical_form(k).labeling);
  for (int t = 0; t < 5; ++t) {
    Complex m = relabel(k, random_permutation(12, rng));
    CHECK(relabel(m, canonical_form(m).labeling) == rep);
  }
}

TEST_CASE("oriented canonical keys") {
  OrientedComplex oct = oriented(octahedron());
  CanonicalKey a = canonical_form(oct);
  CHECK(a.oriented_key == a.mirror_key);
  CHECK(canonical_form(oct.reversed()).oriented_key == a.oriented_key);
  OrientedComplex cp = oriented(cp2_9());
  CanonicalKey c = canonical_form(cp);
  CHECK(c.oriented_key != c.mirror_key);
  CHECK(canonical_form(cp.reversed()).oriented_key == c.mirror_key);
  CHECK(canonical_form(cp.reversed()).mirror_key == c.oriented_key);
  std::mt19937_64 rng(3);
  auto p = random_permutation(9, rng);
  CHECK(canonical_form(relabel(cp, p)).oriented_key == c.oriented_key);
  OrientedCanonical oc(cp);
  CHECK(oc.key() == c.oriented_key);
  CHECK(oc.automorphism_count() >= 1);
  CHECK(OrientedCanonical(oriented(icosahedron())).automorphism_count() == 60);
  CHECK(OrientedCanonical(oriented(octahedron())).automorphism_count() == 24);
}

TEST_CASE("backtracking fallback agrees with isomorphism") {
  Complex a = Complex::from_lists({{0, 1, 2}, {2, 3}, {3, 4}});
  Complex b = Complex::from_lists({{5, 6, 7}, {5, 9}, {9, 8}});
  Complex c = Complex::from_lists({{0, 1, 2}, {2, 3}, {2, 4}});
  CHECK(canonical_form(a).method == CanonicalMethod::Backtracking);
  CHECK(canonical_form(a).key == canonical_form(b).key);
  CHECK(canonical_form(a).key != canonical_form(c).key);
  CHECK(are_isomorphic_by_search(a, b));
  CHECK(!are_isomorphic_by_search(a, c));
}

TEST_CASE("disconnected oriented complexes") {
  OrientedComplex s = simplex_boundary(3);
  std::vector<Vertex> shift{4, 5, 6, 7};
  OrientedComplex t = relabel(oriented(octahedron()), std::vector<Vertex>{10, 11, 12, 13, 14, 15});
  auto merge = [](const OrientedComplex& a, const OrientedComplex& b) {
    std::vector<std::pair<Simplex, int>> all;
    for (std::size_t i = 0; i < a.facets().size(); ++i) all.emplace_back(a.facets()[i], a.signs()[i]);
    for (std::size_t i = 0; i < b.facets().size(); ++i) all.emplace_back(b.facets()[i], b.signs()[i]);
    std::sort(all.begin(), all.end());
    std::vector<Simplex> fs;
    std::vector<int> ss;
    for (auto& [f, e] : all) {
      fs.push_back(f);
      ss.push_back(e);
    }
    return OrientedComplex(Complex(fs), ss);
  };
  CanonicalKey k1 = canonical_form(merge(s, t));
  CanonicalKey k2 = canonical_form(merge(relabel(s, shift), relabel(t, std::vector<Vertex>{0, 1, 2, 3, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19})));
  CHECK(k1.method == CanonicalMethod::Components);
  CHECK(k1.oriented_key == k2.oriented_key);}

TEST_CASE("hex keys round trip") {
  std::string key = canonical_form(octahedron()).key;
  CHECK(key_from_hex(key_to_hex(key)) == key);
}

TEST_CASE("io round trip") {
  Complex k = icosahedron();
  std::string text = format_facets_text(k, "icosahedron");
  CHECK(load_complex_string(text).complex == k);
  OrientedComplex o = oriented(k).reversed();
  LoadedComplex j = load_complex_string(format_facets_json(o));
  CHECK(as_oriented(j) == o);
  // Orientation entries refer to the listed vertex order.
  LoadedComplex swapped = load_complex_string(R"({"facets": [[1,0],[1,2],[2,0]], "orientation": [-1,1,1]})");
  REQUIRE(swapped.signs.has_value());
  CHECK(as_oriented(swapped).sign_of(Simplex{0, 1}) == 1);
  CHECK_THROWS_AS(load_complex_string("0 1 x\n"), Error);
  CHECK(load_complex_string("# comment\n0 1\n1 2\n2 0\n").complex.facets().size() == 3);
}
