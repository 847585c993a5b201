// Helpers shared by the unit tests and the acceptance binary: random
// spheres and an independent brute-force enumerator of 2-spheres.
#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <vector>

#include "localp1/canonical.hpp"
#include "localp1/library.hpp"
#include "localp1/pachner.hpp"
#include "localp1/talgebra.hpp"

namespace localp1::testing {

inline OrientedComplex random_sphere(int dim, int steps, std::mt19937_64& rng, std::size_t max_vertices) {
  OrientedComplex k = simplex_boundary(dim + 1);
  for (int i = 0; i < steps; ++i) {
    std::vector<Move> ok;
    for (const Move& m : enumerate_moves(k.complex())) {
      if (m.complement.size() == 1 && k.num_vertices() >= max_vertices) continue;
      ok.push_back(m);
    }
    k = apply_move(k, ok[rng() % ok.size()]);
  }
  return k;
}

// A 2-sphere with the given vertex count that is not isomorphic to its mirror.
inline OrientedComplex chiral_2_sphere(std::mt19937_64& rng, std::size_t vertices) {
  while (true) {
    OrientedComplex k = random_sphere(2, 40, rng, vertices);
    if (k.num_vertices() == vertices && normal_class(k).sign != 0) return k;
  }
}

inline OrientedComplex polygon(int n) {
  std::vector<std::vector<Vertex>> f;
  for (int i = 0; i < n; ++i) f.push_back({i, (i + 1) % n});
  return oriented(Complex::from_lists(f));
}

// Brute-force enumeration of triangulated 2-spheres on exactly n labeled
// vertices containing the triangle {0,1,2}: grow a surface by always closing
// the least edge lying in a single triangle. Every labeled sphere is found
// exactly once. The classes are then separated by exhaustive isomorphism
// search, independently of the canonical labeling code.
class BruteForceSpheres {
 public:
  explicit BruteForceSpheres(int n) : n_(n), count_(static_cast<std::size_t>(n * n), 0) {}

  // Number of unoriented isomorphism classes.
  std::size_t classes() {
    chosen_ = {{0, 1, 2}};
    bump({0, 1, 2}, 1);
    grow();
    std::size_t total = 0;
    for (const auto& [degrees, bucket] : representatives_) total += bucket.size();
    return total;
  }

 private:
  using Tri = std::array<Vertex, 3>;

  int& edge(Vertex a, Vertex b) { return count_[static_cast<std::size_t>(std::min(a, b) * n_ + std::max(a, b))]; }

  void bump(const Tri& t, int d) {
    edge(t[0], t[1]) += d;
    edge(t[0], t[2]) += d;
    edge(t[1], t[2]) += d;
  }

  void grow() {
    std::size_t max_faces = static_cast<std::size_t>(2 * n_ - 4);
    for (Vertex a = 0; a < n_; ++a) {
      for (Vertex b = a + 1; b < n_; ++b) {
        if (edge(a, b) != 1) continue;
        if (chosen_.size() == max_faces) return;
        for (Vertex w = 0; w < n_; ++w) {
          if (w == a || w == b || edge(a, w) == 2 || edge(b, w) == 2) continue;
          Tri t{a, b, w};
          std::sort(t.begin(), t.end());
          if (std::find(chosen_.begin(), chosen_.end(), t) != chosen_.end()) continue;
          chosen_.push_back(t);
          bump(t, 1);
          grow();
          bump(t, -1);
          chosen_.pop_back();
        }
        return;
      }
    }
    record();
  }

  void record() {
    if (chosen_.size() != static_cast<std::size_t>(2 * n_ - 4)) return;
    std::vector<std::vector<Vertex>> lists;
    for (const Tri& t : chosen_) lists.push_back({t[0], t[1], t[2]});
    Complex k = Complex::from_lists(lists);
    if (static_cast<int>(k.num_vertices()) != n_ || k.euler_characteristic() != 2) return;
    for (Vertex v : k.vertices()) {
      if (!is_strongly_connected(link(k, Simplex{v}))) return;
    }
    std::vector<int> degrees;
    for (Vertex v : k.vertices()) degrees.push_back(k.facet_degree(v));
    std::sort(degrees.begin(), degrees.end());
    auto& bucket = representatives_[degrees];
    for (const Complex& r : bucket) {
      if (are_isomorphic_by_search(r, k)) return;
    }
    bucket.push_back(k);
  }

  int n_;
  std::vector<int> count_;
  std::vector<Tri> chosen_;
  std::map<std::vector<int>, std::vector<Complex>> representatives_;
};

// Unoriented class counts for 4..max_vertices vertices.
inline std::vector<std::size_t> brute_force_sphere_counts(int max_vertices) {
  std::vector<std::size_t> out;
  for (int n = 4; n <= max_vertices; ++n) out.push_back(BruteForceSpheres(n).classes());
  return out;
}

}  // namespace localp1::testing
