// Canonical forms and isomorphism keys.
//
// Strongly connected pure complexes in which every ridge lies in at most two
// facets are labeled by flag traversal: starting from a facet with an ordered
// vertex list, facets are visited breadth first across ridges and each newly
// reached vertex receives the next label. The least traversal code over all
// starting flags is the key. Flags of even parity (relative to the facet
// sign) give the oriented key, odd flags give the key of the reversed
// orientation. Other complexes fall back to partition refinement plus
// backtracking.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "localp1/complex.hpp"

namespace localp1 {

enum class CanonicalMethod : char { FlagTraversal = 'F', Backtracking = 'B', Components = 'C' };

struct CanonicalKey {
  std::string key;           // unoriented class
  std::string oriented_key;  // oriented class (empty for unoriented input)
  std::string mirror_key;    // oriented class of the reversed orientation
  std::vector<Vertex> labeling;  // indexed by old vertex id; -1 for ids not in the complex
  CanonicalMethod method = CanonicalMethod::FlagTraversal;
};

CanonicalKey canonical_form(const Complex& k);
CanonicalKey canonical_form(const OrientedComplex& k);

// Oriented canonical form of a strongly connected closed pseudomanifold with
// access to every optimal labeling (one per orientation-preserving
// automorphism), so that marked simplices can be encoded canonically.
class OrientedCanonical {
 public:
  explicit OrientedCanonical(const OrientedComplex& k, bool with_mirror = true);

  const std::string& key() const noexcept { return key_; }
  // Empty unless constructed with_mirror.
  const std::string& mirror_key() const noexcept { return mirror_key_; }
  bool self_mirror() const noexcept { return key_ == mirror_key_; }
  std::size_t automorphism_count() const noexcept { return labelings_.size(); }
  const std::vector<Vertex>& labeling() const noexcept { return labelings_.front(); }
  const std::vector<std::vector<Vertex>>& labelings() const noexcept { return labelings_; }

  // Key of the pair (K, marked simplex) up to orientation-preserving isomorphism.
  std::string marked(const Simplex& s) const;
  // An optimal labeling giving the least image of s (the one marked() uses).
  const std::vector<Vertex>& marked_labeling(const Simplex& s) const;
  // The complex relabeled by labeling().
  OrientedComplex representative(const OrientedComplex& k) const;

 private:
  std::string key_;
  std::string mirror_key_;
  std::vector<std::vector<Vertex>> labelings_;
};

// Convenience: oriented key only.
std::string oriented_key(const OrientedComplex& k);

// Renders a binary key as lowercase hex (for JSON and logs).
std::string key_to_hex(const std::string& key);
std::string key_from_hex(const std::string& hex);

// Explicit backtracking isomorphism test, independent of the key machinery.
bool are_isomorphic_by_search(const Complex& a, const Complex& b);

}  // namespace localp1
