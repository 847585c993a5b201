// Bundled complexes used by tests, acceptance checks and the CLI.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "localp1/complex.hpp"

namespace localp1 {

struct LibraryEntry {
  std::string name;
  Complex complex;
  std::vector<std::size_t> f_vector;
  long euler_characteristic = 0;
  bool orientable = true;
};

// Boundary of the cross-polytope in R^d: the join of d copies of S^0 on
// vertices {2i, 2i+1}. d = 3 gives the octahedron.
Complex cross_polytope_boundary(int d);
Complex octahedron();
Complex icosahedron();
// Six-vertex real projective plane (antipodal quotient of the icosahedron).
Complex rp2_6();
// Nine-vertex complex projective plane.
Complex cp2_9();

// Oriented versions: signs from orient(), so the least facet is positive.
OrientedComplex oriented(const Complex& k);

// Every bundled entry; each is validated against its expected invariants.
std::vector<LibraryEntry> library_entries();
std::optional<LibraryEntry> library_entry(const std::string& name);
// Throws ValidationFailed on mismatch (also checks vertex links for cp2_9).
void validate_entry(const LibraryEntry& e);

}  // namespace localp1
