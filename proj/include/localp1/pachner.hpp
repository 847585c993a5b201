// Bistellar moves on oriented closed pseudomanifolds, canonical keys of move
// classes, and randomized reduction of low-dimensional spheres to the
// boundary of a simplex.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "localp1/canonical.hpp"
#include "localp1/complex.hpp"

namespace localp1 {

// A move replaces face * boundary(complement) by boundary(face) * complement. When face is
// a facet, complement is a single fresh vertex. The host complex is kept separately.
struct Move {
  Simplex face;
  Simplex complement;

  Move inverse() const { return {complement, face}; }
  friend bool operator==(const Move&, const Move&) = default;
  friend auto operator<=>(const Move&, const Move&) = default;
};

std::string to_string(const Move& m);

// Smallest vertex id not used by k.
Vertex fresh_vertex(const Complex& k);

bool is_valid_move(const Complex& k, const Move& m);
// All moves on k, ordered by (|face| descending, face), so insertions come
// first; face ranges over faces whose link is the boundary of a simplex
// missing from k.
std::vector<Move> enumerate_moves(const Complex& k);
// Throws InvalidMove when the move does not apply.
OrientedComplex apply_move(const OrientedComplex& k, const Move& m);

// Vertices of boundary(face) * boundary(complement).
std::vector<Vertex> move_support(const Move& m);

struct InducedMove {
  Vertex vertex;
  Move move;  // acts on the link of vertex in the host
};
std::vector<InducedMove> induced_vertex_moves(const Move& m);

// Complexity used to direct edges: in sixths, 6k, 6k+2 or 6k+4 for a
// 2-sphere with k vertices and minimal vertex degree 3, 4 or at least 5.
// For other dimensions the vertex count is used (scaled by 6).
long complexity_sixths(const Complex& k);

// The canonical description of a move class. Empty key means inessential.
struct EdgeKey {
  std::string key;   // encoding of the move in its canonical direction
  int sign = 0;      // +1 if the given move runs in the canonical direction
  std::string tail;  // oriented key of the canonical tail
  std::string head;  // oriented key of the canonical head
  bool essential() const { return sign != 0; }
};

EdgeKey edge_key(const OrientedComplex& host, const Move& m);

// A reduction certificate: moves applied in order starting from the canonical
// representative of start_key, ending at the boundary of a simplex.
struct MoveSequence {
  std::string start_key;
  std::string end_key;
  std::vector<Move> moves;
};

struct ReduceOptions {
  std::uint64_t seed = 1;
  long budget = 20000;  // total moves tried over all restarts
  int restarts = 20;
};

// Reduces the sphere (dimension 1 to 3) and returns the certificate; the moves
// apply to start, the canonical representative of the input. Throws
// BudgetExhausted.
struct Reduction {
  OrientedComplex start;
  MoveSequence sequence;
};
Reduction reduce_to_boundary(const OrientedComplex& sphere, const ReduceOptions& opt = {});

// Replays the sequence from start; returns the final complex. Throws
// InvalidMove or ValidationFailed when the end key differs.
OrientedComplex replay(const OrientedComplex& start, const MoveSequence& seq);

enum class SphereVerdict { Yes, No, Unknown };
struct SphereCheck {
  SphereVerdict verdict = SphereVerdict::No;
  std::string reason;
  std::optional<MoveSequence> certificate;
};
SphereCheck is_combinatorial_sphere(const Complex& k, const ReduceOptions& opt = {});
// Every vertex link is a combinatorial sphere. Above dimension 4 the verdict
// is at best Unknown, since spheres of dimension 4 and up are not reduced.
SphereCheck is_combinatorial_manifold(const Complex& k, const ReduceOptions& opt = {});

// Canonical representatives of all oriented classes of combinatorial
// 2-spheres with at most max_vertices vertices (at least 4), found by
// closing the boundary of the tetrahedron under moves. Ordered by vertex
// count, then oriented key.
std::vector<OrientedComplex> enumerate_oriented_spheres(int max_vertices);

std::string move_sequence_to_json(const MoveSequence& seq);
MoveSequence move_sequence_from_json(const std::string& text);

}  // namespace localp1
