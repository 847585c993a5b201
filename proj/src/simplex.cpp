#include "localp1/simplex.hpp"

#include "localp1/error.hpp"

namespace localp1 {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicateVertexInFacet: return "DuplicateVertexInFacet";
    case ErrorKind::FacetContainment: return "FacetContainment";
    case ErrorKind::SimplexNotInComplex: return "SimplexNotInComplex";
    case ErrorKind::NotPseudomanifold: return "NotPseudomanifold";
    case ErrorKind::NonOrientable: return "NonOrientable";
    case ErrorKind::InvalidMove: return "InvalidMove";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::TimeoutUnknown: return "TimeoutUnknown";
    case ErrorKind::NotACycle: return "NotACycle";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::ClosureFailure: return "ClosureFailure";
    case ErrorKind::UnrecognizedConfiguration: return "UnrecognizedConfiguration";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::DecompositionStuck: return "DecompositionStuck";
    case ErrorKind::SphereCheckFailed: return "SphereCheckFailed";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::NotClosedManifold: return "NotClosedManifold";
    case ErrorKind::NotClosedCycle: return "NotClosedCycle";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationFailed: return "ValidationFailed";
  }
  return "Unknown";
}

Simplex::Simplex(std::initializer_list<Vertex> vertices) {
  std::vector<Vertex> v(vertices);
  *this = from_unsorted(v);
}

Simplex Simplex::from_unsorted(std::span<const Vertex> vertices) {
  if (vertices.size() > kMaxSize) {
    throw Error(ErrorKind::InvalidParams, "simplex has more than " + std::to_string(kMaxSize) + " vertices");
  }
  Simplex s;
  std::copy(vertices.begin(), vertices.end(), s.data_.begin());
  s.size_ = static_cast<std::uint8_t>(vertices.size());
  std::sort(s.data_.begin(), s.data_.begin() + s.size_);
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw Error(ErrorKind::DuplicateVertexInFacet, "repeated vertex in " + s.to_string());
  }
  return s;
}

bool Simplex::contains(Vertex v) const noexcept { return std::binary_search(begin(), end(), v); }

bool Simplex::contains(const Simplex& other) const noexcept {
  return std::includes(begin(), end(), other.begin(), other.end());
}

bool Simplex::intersects(const Simplex& other) const noexcept {
  const Vertex* a = begin();
  const Vertex* b = other.begin();
  while (a != end() && b != other.end()) {
    if (*a == *b) return true;
    if (*a < *b) ++a; else ++b;
  }
  return false;
}

int Simplex::index_of(Vertex v) const noexcept {
  const Vertex* it = std::lower_bound(begin(), end(), v);
  return (it != end() && *it == v) ? static_cast<int>(it - begin()) : -1;
}

Simplex Simplex::with(Vertex v) const {
  if (contains(v)) return *this;
  if (size_ == kMaxSize) throw Error(ErrorKind::InvalidParams, "simplex too large");
  Simplex s;
  const Vertex* pos = std::lower_bound(begin(), end(), v);
  Vertex* out = std::copy(begin(), pos, s.data_.begin());
  *out++ = v;
  std::copy(pos, end(), out);
  s.size_ = static_cast<std::uint8_t>(size_ + 1);
  return s;
}

Simplex Simplex::without(Vertex v) const {
  int i = index_of(v);
  return i < 0 ? *this : without_index(static_cast<std::size_t>(i));
}

Simplex Simplex::without_index(std::size_t i) const {
  Simplex s;
  Vertex* out = std::copy(begin(), begin() + i, s.data_.begin());
  std::copy(begin() + i + 1, end(), out);
  s.size_ = static_cast<std::uint8_t>(size_ - 1);
  return s;
}

Simplex Simplex::unite(const Simplex& other) const {
  std::array<Vertex, 2 * kMaxSize> buf{};
  auto last = std::set_union(begin(), end(), other.begin(), other.end(), buf.begin());
  return from_unsorted(std::span<const Vertex>(buf.data(), static_cast<std::size_t>(last - buf.begin())));
}

Simplex Simplex::minus(const Simplex& other) const {
  Simplex s;
  auto last = std::set_difference(begin(), end(), other.begin(), other.end(), s.data_.begin());
  s.size_ = static_cast<std::uint8_t>(last - s.data_.begin());
  return s;
}

Simplex Simplex::intersect(const Simplex& other) const {
  Simplex s;
  auto last = std::set_intersection(begin(), end(), other.begin(), other.end(), s.data_.begin());
  s.size_ = static_cast<std::uint8_t>(last - s.data_.begin());
  return s;
}

std::string Simplex::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < size_; ++i) {
    if (i) out += ',';
    out += std::to_string(data_[i]);
  }
  return out + "]";
}

int permutation_sign(std::span<const Vertex> ordered) {
  int inversions = 0;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    for (std::size_t j = i + 1; j < ordered.size(); ++j) {
      if (ordered[i] > ordered[j]) ++inversions;
    }
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

int concatenation_sign(const Simplex& a, const Simplex& b) {
  // Each pair (x in a, y in b) with x > y is one inversion.
  int inversions = 0;
  std::size_t j = 0;
  for (Vertex x : a) {
    while (j < b.size() && b[j] < x) ++j;
    inversions += static_cast<int>(j);
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace localp1
