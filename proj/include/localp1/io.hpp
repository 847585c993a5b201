// Facet-list input and output. Text format: one facet per line as
// whitespace-separated non-negative integers, '#' starts a comment line.
// JSON format: {"facets": [[...], ...], "orientation": [+1/-1, ...]} where an
// orientation entry is the sign of the facet written in the listed order.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "localp1/complex.hpp"

namespace localp1 {

using FacetLists = std::vector<std::vector<Vertex>>;

FacetLists parse_facets_text(const std::string& text);

struct ParsedJson {
  FacetLists facets;
  std::optional<std::vector<int>> orientation;
};
ParsedJson parse_facets_json(const std::string& text);

struct LoadedComplex {
  Complex complex;
  // Present when the input carried signs (JSON), converted to signs of the
  // ascending facets of complex.
  std::optional<std::vector<int>> signs;
};

// Chooses the format from the first non-blank character ('{' means JSON).
LoadedComplex load_complex_string(const std::string& text);
LoadedComplex load_complex_file(const std::string& path);

// Oriented view: uses the given signs when present, otherwise orient().
// Throws NonOrientable when no orientation exists.
OrientedComplex as_oriented(const LoadedComplex& loaded);

std::string format_facets_text(const Complex& k, const std::string& comment = {});
std::string format_facets_json(const OrientedComplex& k);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace localp1
