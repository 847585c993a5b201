// A simplex is a strictly increasing list of vertex ids with inline storage.
#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace localp1 {

using Vertex = int;

class Simplex {
 public:
  static constexpr std::size_t kMaxSize = 10;

  Simplex() = default;
  Simplex(std::initializer_list<Vertex> vertices);

  // Sorts the input; throws DuplicateVertexInFacet on repeats.
  static Simplex from_unsorted(std::span<const Vertex> vertices);
  static Simplex single(Vertex v) { return Simplex{v}; }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  int dim() const noexcept { return static_cast<int>(size_) - 1; }

  Vertex operator[](std::size_t i) const noexcept { return data_[i]; }
  const Vertex* begin() const noexcept { return data_.data(); }
  const Vertex* end() const noexcept { return data_.data() + size_; }

  bool contains(Vertex v) const noexcept;
  bool contains(const Simplex& other) const noexcept;  // other is a subset
  bool intersects(const Simplex& other) const noexcept;
  // Position of v in the sorted order, or -1.
  int index_of(Vertex v) const noexcept;

  Simplex with(Vertex v) const;
  Simplex without(Vertex v) const;
  Simplex without_index(std::size_t i) const;
  Simplex unite(const Simplex& other) const;
  Simplex minus(const Simplex& other) const;
  Simplex intersect(const Simplex& other) const;

  std::vector<Vertex> to_vector() const { return {begin(), end()}; }
  std::string to_string() const;

  friend bool operator==(const Simplex& a, const Simplex& b) noexcept {
    return a.size_ == b.size_ && std::equal(a.begin(), a.end(), b.begin());
  }
  friend std::strong_ordering operator<=>(const Simplex& a, const Simplex& b) noexcept {
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
  }

 private:
  std::array<Vertex, kMaxSize> data_{};
  std::uint8_t size_ = 0;
};

// Sign of the permutation taking the ascending order of the entries to the
// given order (+1 for even, -1 for odd). Entries must be distinct.
int permutation_sign(std::span<const Vertex> ordered);

// Sign of writing the union of the disjoint simplices a and b as (a, b)
// relative to ascending order.
int concatenation_sign(const Simplex& a, const Simplex& b);

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept {
    std::size_t h = s.size();
    for (Vertex v : s) h = h * 1000003u ^ static_cast<std::size_t>(v);
    return h;
  }
};

}  // namespace localp1
