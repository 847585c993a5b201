#include "localp1/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "localp1/error.hpp"

namespace localp1 {

FacetLists parse_facets_text(const std::string& text) {
  FacetLists out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<Vertex> facet;
    std::string tok;
    while (fields >> tok) {
      std::size_t used = 0;
      long v = -1;
      try {
        v = std::stol(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || v < 0 || v > 1'000'000) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad vertex id '" + tok + "'");
      }
      facet.push_back(static_cast<Vertex>(v));
    }
    out.push_back(std::move(facet));
  }
  if (out.empty()) throw Error(ErrorKind::ParseError, "no facets");
  return out;
}

ParsedJson parse_facets_json(const std::string& text) {
  ParsedJson out;
  try {
    auto doc = nlohmann::json::parse(text);
    for (const auto& f : doc.at("facets")) {
      std::vector<Vertex> facet;
      for (const auto& v : f) {
        long x = v.get<long>();
        if (x < 0) throw Error(ErrorKind::ParseError, "negative vertex id");
        facet.push_back(static_cast<Vertex>(x));
      }
      out.facets.push_back(std::move(facet));
    }
    if (doc.contains("orientation") && !doc["orientation"].is_null()) {
      std::vector<int> signs;
      for (const auto& s : doc["orientation"]) {
        int x = s.get<int>();
        if (x != 1 && x != -1) throw Error(ErrorKind::ParseError, "orientation entries must be +1 or -1");
        signs.push_back(x);
      }
      if (signs.size() != out.facets.size()) throw Error(ErrorKind::ParseError, "orientation length differs from facet count");
      out.orientation = std::move(signs);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (out.facets.empty()) throw Error(ErrorKind::ParseError, "no facets");
  return out;
}

LoadedComplex load_complex_string(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    ParsedJson parsed = parse_facets_json(text);
    LoadedComplex out{Complex::from_lists(parsed.facets), std::nullopt};
    if (parsed.orientation) {
      std::vector<int> signs(out.complex.facets().size(), 0);
      for (std::size_t i = 0; i < parsed.facets.size(); ++i) {
        Simplex s = Simplex::from_unsorted(parsed.facets[i]);
        int idx = out.complex.facet_index(s);
        signs[static_cast<std::size_t>(idx)] = (*parsed.orientation)[i] * permutation_sign(parsed.facets[i]);
      }
      out.signs = std::move(signs);
    }
    return out;
  }
  return {Complex::from_lists(parse_facets_text(text)), std::nullopt};
}

LoadedComplex load_complex_file(const std::string& path) { return load_complex_string(read_file(path)); }

OrientedComplex as_oriented(const LoadedComplex& loaded) {
  if (loaded.signs) return OrientedComplex(loaded.complex, *loaded.signs);
  auto o = orient(loaded.complex);
  if (!o) throw Error(ErrorKind::NonOrientable, "complex admits no coherent orientation");
  return *o;
}

std::string format_facets_text(const Complex& k, const std::string& comment) {
  std::ostringstream out;
  if (!comment.empty()) {
    std::istringstream lines(comment);
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << '\n';
  }
  for (const Simplex& f : k.facets()) {
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? " " : "") << f[i];
    out << '\n';
  }
  return out.str();
}

std::string format_facets_json(const OrientedComplex& k) {
  nlohmann::json doc;
  doc["facets"] = nlohmann::json::array();
  for (const Simplex& f : k.facets()) doc["facets"].push_back(f.to_vector());
  doc["orientation"] = k.signs();
  return doc.dump() + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path);
  out << contents;
}

}  // namespace localp1
