#include "localp1/canonical.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "localp1/error.hpp"

namespace localp1 {

namespace {

constexpr unsigned kNoNeighbor = 0xFFFF;

struct Traversal {
  const std::vector<Simplex>& facets;
  std::vector<std::vector<int>> nb;
  std::vector<std::vector<Vertex>> opp;  // vertex across each ridge, or -1
  bool wide = false;                     // two bytes per label
  std::string header;

  std::vector<int> labels;
  std::vector<char> visited;
  std::vector<int> queue;

  explicit Traversal(const Complex& k) : facets(k.facets()), nb(ridge_neighbors(k)) {
    opp.resize(facets.size());
    for (std::size_t f = 0; f < facets.size(); ++f) {
      opp[f].assign(facets[f].size(), -1);
      for (std::size_t i = 0; i < facets[f].size(); ++i) {
        int g = nb[f][i];
        if (g < 0) continue;
        for (Vertex w : facets[static_cast<std::size_t>(g)]) {
          if (!facets[f].contains(w)) opp[f][i] = w;
        }
      }
    }
    wide = k.num_vertices() >= 255;
    labels.assign(static_cast<std::size_t>(k.max_vertex() + 1), -1);
    visited.assign(facets.size(), 0);
    auto put16 = [&](std::size_t x) {
      header.push_back(static_cast<char>((x >> 8) & 0xFF));
      header.push_back(static_cast<char>(x & 0xFF));
    };
    header.push_back(static_cast<char>(k.dimension() + 1));
    put16(k.num_vertices());
    put16(facets.size());
  }

  // Appends one code unit; returns false when the code is already greater
  // than best (abort). cmp tracks the comparison state against best.
  bool emit(std::string& code, unsigned value, const std::string* best, int& cmp) const {
    auto push = [&](unsigned char b) {
      if (cmp == 0 && best != nullptr) {
        auto pos = code.size();
        unsigned char bb = static_cast<unsigned char>((*best)[pos]);
        if (b > bb) return false;
        if (b < bb) cmp = -1;
      }
      code.push_back(static_cast<char>(b));
      return true;
    };
    if (wide) {
      if (!push(static_cast<unsigned char>((value >> 8) & 0xFF))) return false;
      return push(static_cast<unsigned char>(value & 0xFF));
    }
    return push(static_cast<unsigned char>(value == kNoNeighbor ? 0xFF : value));
  }

  // Runs the traversal from facet f0 with the given vertex order. Returns
  // -1 if the code beats best (code filled), 0 if equal, +1 if aborted.
  int run(std::size_t f0, const std::vector<Vertex>& order, const std::string* best, std::string& code) {
    std::fill(labels.begin(), labels.end(), -1);
    std::fill(visited.begin(), visited.end(), 0);
    queue.clear();
    code = header;
    int cmp = (best == nullptr) ? -1 : 0;
    if (best != nullptr) {
      // Header is identical for all flags of one complex.
    }
    int next = 0;
    for (Vertex v : order) labels[static_cast<std::size_t>(v)] = next++;
    visited[f0] = 1;
    queue.push_back(static_cast<int>(f0));
    std::vector<std::pair<int, std::size_t>> local;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      auto f = static_cast<std::size_t>(queue[head]);
      const Simplex& s = facets[f];
      local.clear();
      for (std::size_t i = 0; i < s.size(); ++i) local.emplace_back(labels[static_cast<std::size_t>(s[i])], i);
      std::sort(local.begin(), local.end());
      for (auto [lab, i] : local) {
        int g = nb[f][i];
        unsigned value = kNoNeighbor;
        if (g >= 0) {
          Vertex w = opp[f][i];
          int& lw = labels[static_cast<std::size_t>(w)];
          if (lw < 0) lw = next++;
          value = static_cast<unsigned>(lw);
          if (!visited[static_cast<std::size_t>(g)]) {
            visited[static_cast<std::size_t>(g)] = 1;
            queue.push_back(g);
          }
        }
        if (!emit(code, value, best, cmp)) return 1;
      }
    }
    return cmp;
  }

  std::vector<Vertex> labeling() const {
    std::vector<Vertex> out(labels.begin(), labels.end());
    return out;
  }
};

struct FlagResult {
  std::string even_code, odd_code, any_code;
  std::vector<std::vector<Vertex>> even_labelings;
  std::vector<Vertex> odd_labeling, any_labeling;
};

// parity_filter: +1 only even flags, -1 only odd flags, 0 both (tracked separately).
void traverse_all(const Complex& k, const std::vector<int>* signs, bool want_even, bool want_odd, bool want_any,
                  FlagResult& out) {
  Traversal t(k);
  std::string code;
  bool have_even = false, have_odd = false, have_any = false;
  const auto& facets = k.facets();
  for (std::size_t f = 0; f < facets.size(); ++f) {
    std::vector<Vertex> order(facets[f].begin(), facets[f].end());
    std::vector<int> idx(order.size());
    std::iota(idx.begin(), idx.end(), 0);
    do {
      std::vector<Vertex> ordered;
      for (int i : idx) ordered.push_back(order[static_cast<std::size_t>(i)]);
      int par = permutation_sign(idx) * (signs ? (*signs)[f] : 1);
      if (par > 0 && want_even) {
        int r = t.run(f, ordered, have_even ? &out.even_code : nullptr, code);
        if (r < 0) {
          out.even_code = code;
          out.even_labelings.assign(1, t.labeling());
          have_even = true;
        } else if (r == 0) {
          out.even_labelings.push_back(t.labeling());
        }
      }
      if (par < 0 && want_odd) {
        int r = t.run(f, ordered, have_odd ? &out.odd_code : nullptr, code);
        if (r < 0) {
          out.odd_code = code;
          out.odd_labeling = t.labeling();
          have_odd = true;
        }
      }
      if (want_any) {
        int r = t.run(f, ordered, have_any ? &out.any_code : nullptr, code);
        if (r < 0) {
          out.any_code = code;
          out.any_labeling = t.labeling();
          have_any = true;
        }
      }
    } while (std::next_permutation(idx.begin(), idx.end()));
  }
}

bool flag_traversal_applies(const Complex& k) {
  if (k.facets().empty() || !k.is_pure()) return false;
  try {
    (void)ridge_neighbors(k);
  } catch (const Error&) {
    return false;
  }
  return is_strongly_connected(k);
}

// Partition refinement plus backtracking for arbitrary complexes.
class Backtracker {
 public:
  explicit Backtracker(const Complex& k) : verts_(k.vertices()) {
    std::map<Vertex, int> index;
    for (std::size_t i = 0; i < verts_.size(); ++i) index[verts_[i]] = static_cast<int>(i);
    for (const Simplex& f : k.facets()) {
      std::vector<int> local;
      for (Vertex v : f) local.push_back(index[v]);
      facets_.push_back(local);
    }
    incidence_.resize(verts_.size());
    for (std::size_t f = 0; f < facets_.size(); ++f) {
      for (int v : facets_[f]) incidence_[static_cast<std::size_t>(v)].push_back(static_cast<int>(f));
    }
  }

  void run() {
    std::vector<std::vector<int>> cells(1);
    cells[0].resize(verts_.size());
    std::iota(cells[0].begin(), cells[0].end(), 0);
    search(refine(std::move(cells)));
  }

  std::vector<unsigned> best_code;
  std::vector<int> best_label;  // local index -> label

  const std::vector<Vertex>& vertices() const { return verts_; }

 private:
  std::vector<std::vector<int>> refine(std::vector<std::vector<int>> cells) const {
    while (true) {
      std::vector<int> cell_of(verts_.size());
      for (std::size_t c = 0; c < cells.size(); ++c) {
        for (int v : cells[c]) cell_of[static_cast<std::size_t>(v)] = static_cast<int>(c);
      }
      std::vector<std::vector<int>> next;
      bool changed = false;
      for (const auto& cell : cells) {
        if (cell.size() == 1) {
          next.push_back(cell);
          continue;
        }
        std::map<std::vector<std::vector<int>>, std::vector<int>> groups;
        for (int v : cell) {
          std::vector<std::vector<int>> sig;
          for (int f : incidence_[static_cast<std::size_t>(v)]) {
            std::vector<int> cs;
            for (int w : facets_[static_cast<std::size_t>(f)]) {
              if (w != v) cs.push_back(cell_of[static_cast<std::size_t>(w)]);
            }
            std::sort(cs.begin(), cs.end());
            sig.push_back(cs);
          }
          std::sort(sig.begin(), sig.end());
          groups[sig].push_back(v);
        }
        if (groups.size() > 1) changed = true;
        for (auto& [sig, members] : groups) next.push_back(members);
      }
      cells = std::move(next);
      if (!changed) return cells;
    }
  }

  void search(const std::vector<std::vector<int>>& cells) {
    auto it = std::find_if(cells.begin(), cells.end(), [](const auto& c) { return c.size() > 1; });
    if (it == cells.end()) {
      leaf(cells);
      return;
    }
    auto pos = static_cast<std::size_t>(it - cells.begin());
    for (int v : *it) {
      std::vector<std::vector<int>> split(cells.begin(), cells.begin() + static_cast<long>(pos));
      split.push_back({v});
      std::vector<int> rest;
      for (int w : *it) {
        if (w != v) rest.push_back(w);
      }
      split.push_back(rest);
      split.insert(split.end(), cells.begin() + static_cast<long>(pos) + 1, cells.end());
      search(refine(std::move(split)));
    }
  }

  void leaf(const std::vector<std::vector<int>>& cells) {
    std::vector<int> label(verts_.size());
    for (std::size_t c = 0; c < cells.size(); ++c) label[static_cast<std::size_t>(cells[c][0])] = static_cast<int>(c);
    std::vector<std::vector<unsigned>> fs;
    for (const auto& f : facets_) {
      std::vector<unsigned> lf;
      for (int v : f) lf.push_back(static_cast<unsigned>(label[static_cast<std::size_t>(v)]));
      std::sort(lf.begin(), lf.end());
      fs.push_back(lf);
    }
    std::sort(fs.begin(), fs.end());
    std::vector<unsigned> code{static_cast<unsigned>(verts_.size())};
    for (const auto& f : fs) {
      code.push_back(static_cast<unsigned>(f.size()));
      code.insert(code.end(), f.begin(), f.end());
    }
    if (best_code.empty() || code < best_code) {
      best_code = code;
      best_label = label;
    }
  }

  std::vector<Vertex> verts_;
  std::vector<std::vector<int>> facets_;
  std::vector<std::vector<int>> incidence_;
};

std::string encode_units(const std::vector<unsigned>& units) {
  std::string out;
  for (unsigned u : units) {
    out.push_back(static_cast<char>((u >> 8) & 0xFF));
    out.push_back(static_cast<char>(u & 0xFF));
  }
  return out;
}

std::vector<Vertex> full_labeling(const Complex& k, const std::vector<Vertex>& raw) {
  std::vector<Vertex> out(static_cast<std::size_t>(k.max_vertex() + 1), -1);
  for (Vertex v : k.vertices()) out[static_cast<std::size_t>(v)] = raw[static_cast<std::size_t>(v)];
  return out;
}

}  // namespace

OrientedCanonical::OrientedCanonical(const OrientedComplex& k, bool with_mirror) {
  FlagResult r;
  traverse_all(k.complex(), &k.signs(), true, with_mirror, false, r);
  key_ = std::string(1, static_cast<char>(CanonicalMethod::FlagTraversal)) + r.even_code;
  if (with_mirror) mirror_key_ = std::string(1, static_cast<char>(CanonicalMethod::FlagTraversal)) + r.odd_code;
  labelings_ = std::move(r.even_labelings);
}

const std::vector<Vertex>& OrientedCanonical::marked_labeling(const Simplex& s) const {
  std::vector<Vertex> best;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < labelings_.size(); ++i) {
    std::vector<Vertex> img;
    for (Vertex v : s) img.push_back(labelings_[i][static_cast<std::size_t>(v)]);
    std::sort(img.begin(), img.end());
    if (i == 0 || img < best) {
      best = img;
      best_index = i;
    }
  }
  return labelings_[best_index];
}

std::string OrientedCanonical::marked(const Simplex& s) const {
  const auto& lab = marked_labeling(s);
  std::vector<Vertex> best;
  for (Vertex v : s) best.push_back(lab[static_cast<std::size_t>(v)]);
  std::sort(best.begin(), best.end());
  std::string out = key_;
  out.push_back('\x01');
  out.push_back(static_cast<char>(s.size()));
  for (Vertex v : best) {
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
    out.push_back(static_cast<char>(v & 0xFF));
  }
  return out;
}

OrientedComplex OrientedCanonical::representative(const OrientedComplex& k) const {
  return relabel(k, labelings_.front());
}

std::string oriented_key(const OrientedComplex& k) { return OrientedCanonical(k, false).key(); }

CanonicalKey canonical_form(const Complex& k) {
  CanonicalKey out;
  if (flag_traversal_applies(k)) {
    FlagResult r;
    traverse_all(k, nullptr, false, false, true, r);
    out.method = CanonicalMethod::FlagTraversal;
    out.key = std::string(1, 'F') + r.any_code;
    out.labeling = full_labeling(k, r.any_labeling);
    return out;
  }
  Backtracker b(k);
  b.run();
  out.method = CanonicalMethod::Backtracking;
  out.key = std::string(1, 'B') + encode_units(b.best_code);
  out.labeling.assign(static_cast<std::size_t>(k.max_vertex() + 1), -1);
  for (std::size_t i = 0; i < b.vertices().size(); ++i) {
    out.labeling[static_cast<std::size_t>(b.vertices()[i])] = b.best_label[i];
  }
  return out;
}

CanonicalKey canonical_form(const OrientedComplex& k) {
  CanonicalKey out;
  if (is_strongly_connected(k.complex())) {
    FlagResult r;
    traverse_all(k.complex(), &k.signs(), true, true, true, r);
    out.method = CanonicalMethod::FlagTraversal;
    out.key = std::string(1, 'F') + r.any_code;
    out.oriented_key = std::string(1, 'F') + r.even_code;
    out.mirror_key = std::string(1, 'F') + r.odd_code;
    out.labeling = full_labeling(k.complex(), r.even_labelings.front());
    return out;
  }
  // Disconnected: sort component keys.
  auto nb = ridge_neighbors(k.complex());
  std::vector<int> comp(k.facets().size(), -1);
  int ncomp = 0;
  for (std::size_t s = 0; s < comp.size(); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = ncomp;
    while (!stack.empty()) {
      auto f = stack.back();
      stack.pop_back();
      for (int g : nb[f]) {
        if (g >= 0 && comp[static_cast<std::size_t>(g)] < 0) {
          comp[static_cast<std::size_t>(g)] = ncomp;
          stack.push_back(static_cast<std::size_t>(g));
        }
      }
    }
    ++ncomp;
  }
  struct Part {
    CanonicalKey key;
    std::vector<Vertex> verts;
  };
  std::vector<Part> parts;
  for (int c = 0; c < ncomp; ++c) {
    std::vector<Simplex> fs;
    std::vector<int> ss;
    for (std::size_t f = 0; f < comp.size(); ++f) {
      if (comp[f] == c) {
        fs.push_back(k.facets()[f]);
        ss.push_back(k.signs()[f]);
      }
    }
    OrientedComplex part(Complex(std::move(fs), Complex::Trusted{}), std::move(ss), OrientedComplex::Trusted{});
    parts.push_back({canonical_form(part), part.complex().vertices()});
  }
  auto joined = [&](auto field) {
    std::vector<std::string> keys;
    for (const auto& p : parts) keys.push_back(p.key.*field);
    std::sort(keys.begin(), keys.end());
    std::string out_key(1, 'C');
    for (const auto& x : keys) out_key += encode_units({static_cast<unsigned>(x.size())}) + x;
    return out_key;
  };
  out.method = CanonicalMethod::Components;
  out.key = joined(&CanonicalKey::key);
  out.oriented_key = joined(&CanonicalKey::oriented_key);
  out.mirror_key = joined(&CanonicalKey::mirror_key);
  std::sort(parts.begin(), parts.end(), [](const Part& a, const Part& b) { return a.key.oriented_key < b.key.oriented_key; });
  out.labeling.assign(static_cast<std::size_t>(k.complex().max_vertex() + 1), -1);
  Vertex offset = 0;
  for (const auto& p : parts) {
    for (Vertex v : p.verts) out.labeling[static_cast<std::size_t>(v)] = p.key.labeling[static_cast<std::size_t>(v)] + offset;
    offset += static_cast<Vertex>(p.verts.size());
  }
  return out;
}

std::string key_to_hex(const std::string& key) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(key.size() * 2);
  for (unsigned char c : key) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

std::string key_from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw Error(ErrorKind::ParseError, "odd-length hex key");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw Error(ErrorKind::ParseError, "bad hex digit");
  };
  std::string out;
  for (std::size_t i = 0; i < hex.size(); i += 2) out.push_back(static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
  return out;
}

bool are_isomorphic_by_search(const Complex& a, const Complex& b) {
  if (a.num_vertices() != b.num_vertices() || a.facets().size() != b.facets().size()) return false;
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  std::vector<int> dega, degb;
  for (Vertex v : va) dega.push_back(a.facet_degree(v));
  for (Vertex v : vb) degb.push_back(b.facet_degree(v));
  std::vector<Vertex> map(static_cast<std::size_t>(a.max_vertex() + 1), -1);
  std::vector<char> used(vb.size(), 0);
  std::vector<Simplex> target = b.facets();
  auto consistent = [&](std::size_t assigned) {
    // Every facet of a whose vertices are all assigned must map to a facet of b.
    for (const Simplex& f : a.facets()) {
      bool all = true;
      std::vector<Vertex> img;
      for (Vertex v : f) {
        auto pos = static_cast<std::size_t>(std::lower_bound(va.begin(), va.end(), v) - va.begin());
        if (pos >= assigned) {
          all = false;
          break;
        }
        img.push_back(map[static_cast<std::size_t>(v)]);
      }
      if (all && b.facet_index(Simplex::from_unsorted(img)) < 0) return false;
    }
    return true;
  };
  std::function<bool(std::size_t)> dfs = [&](std::size_t i) {
    if (i == va.size()) return true;
    for (std::size_t j = 0; j < vb.size(); ++j) {
      if (used[j] || dega[i] != degb[j]) continue;
      used[j] = 1;
      map[static_cast<std::size_t>(va[i])] = vb[j];
      if (consistent(i + 1) && dfs(i + 1)) return true;
      used[j] = 0;
    }
    map[static_cast<std::size_t>(va[i])] = -1;
    return false;
  };
  return dfs(0);
}

}  // namespace localp1
