#pragma once

// Shared fixtures for the test binaries: catalog shortcuts, seeded diagram
// corpora, and oracles written directly against PD labels so they share no
// code with the library.

#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "knotlab/knotlab.hpp"

namespace testsupport {

using knotlab::Diagram;

inline const Diagram &cat(const std::string &name) { return knotlab::catalog_get(name).diagram; }

inline Diagram pd(const std::string &text) { return knotlab::parse_pd(text); }

/// Every catalog entry scrambled by walks of 1..`max_len` moves.
inline std::vector<Diagram> walk_corpus(int walks_per_entry, int max_len, std::uint64_t seed0 = 1) {
  std::vector<Diagram> out;
  for (const auto &e : knotlab::catalog())
    for (int i = 0; i < walks_per_entry; ++i) {
      const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(i) * 7919u;
      out.push_back(knotlab::random_walk(e.diagram, 1 + i % max_len, seed).diagram);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Label-level union-find used by the oracles

struct LabelSets {
  std::map<int, int> parent;
  int find(int x) {
    parent.try_emplace(x, x);
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
  int classes() {
    int n = 0;
    for (auto &[k, v] : parent)
      n += find(k) == k;
    return n;
  }
};

/// Arcs as label sets: the over-strand (slots 1 and 3) continues through a
/// crossing, the under-strand stops there.
inline std::vector<std::vector<int>> arc_classes(const Diagram &d) {
  LabelSets s;
  for (const auto &c : d.crossings()) {
    for (int slot = 0; slot < 4; ++slot)
      s.find(c[slot]);
    s.join(c[1], c[3]);
  }
  std::map<int, std::vector<int>> by_root;
  for (auto &[label, _] : s.parent)
    by_root[s.find(label)].push_back(label);
  std::vector<std::vector<int>> out;
  for (auto &[_, labels] : by_root)
    out.push_back(labels);
  return out;
}

/// Tricolorings counted by trying all 3^arcs assignments.
inline std::int64_t brute_force_tricolorings(const Diagram &d) {
  auto arcs = arc_classes(d);
  std::map<int, int> arc_of;
  for (std::size_t i = 0; i < arcs.size(); ++i)
    for (int l : arcs[i])
      arc_of[l] = static_cast<int>(i);
  const int n = static_cast<int>(arcs.size());
  std::vector<int> color(static_cast<std::size_t>(n), 0);
  std::int64_t count = 0;
  while (true) {
    bool ok = true;
    for (const auto &c : d.crossings()) {
      int u = color[static_cast<std::size_t>(arc_of[c[0]])], v = color[static_cast<std::size_t>(arc_of[c[2]])],
          o = color[static_cast<std::size_t>(arc_of[c[1]])];
      bool all_same = u == v && v == o;
      bool all_diff = u != v && v != o && u != o;
      if (!all_same && !all_diff) {
        ok = false;
        break;
      }
    }
    count += ok;
    int i = 0;
    while (i < n && color[static_cast<std::size_t>(i)] == 2)
      color[static_cast<std::size_t>(i++)] = 0;
    if (i == n)
      break;
    ++color[static_cast<std::size_t>(i)];
  }
  std::int64_t free = 1;
  for (int i = 0; i < d.free_loops(); ++i)
    free *= 3;
  return count * free;
}

// ---------------------------------------------------------------------------
// Bracket oracle with its own polynomial arithmetic (exponent -> coefficient)

using Poly = std::map<int, std::int64_t>;

inline Poly poly_mul(const Poly &a, const Poly &b) {
  Poly r;
  for (auto [ea, ca] : a)
    for (auto [eb, cb] : b)
      r[ea + eb] += ca * cb;
  std::erase_if(r, [](const auto &kv) { return kv.second == 0; });
  return r;
}

inline Poly poly_add(Poly a, const Poly &b) {
  for (auto [e, c] : b)
    a[e] += c;
  std::erase_if(a, [](const auto &kv) { return kv.second == 0; });
  return a;
}

/// Sum over all 2^n states of A^(#A - #B) d^(loops - 1), d = -A^2 - A^-2.
/// A-smoothing at quad (a,b,c,d) pairs a-d and b-c; B-smoothing pairs a-b
/// and c-d.
inline Poly oracle_bracket(const Diagram &d) {
  const int n = d.crossing_count();
  const Poly delta{{-2, -1}, {2, -1}};
  Poly total;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    LabelSets s;
    int a_count = 0;
    for (int i = 0; i < n; ++i) {
      const auto &c = d.crossings()[static_cast<std::size_t>(i)];
      if (mask >> i & 1u) {
        s.join(c[0], c[1]);
        s.join(c[2], c[3]);
      } else {
        ++a_count;
        s.join(c[0], c[3]);
        s.join(c[1], c[2]);
      }
    }
    const int loops = s.classes() + d.free_loops();
    Poly term{{a_count - (n - a_count), 1}};
    for (int k = 1; k < loops; ++k)
      term = poly_mul(term, delta);
    total = poly_add(total, term);
  }
  return total;
}

inline Poly to_poly(const knotlab::LaurentPoly &p) { return {p.terms().begin(), p.terms().end()}; }

/// Writhe of a one-component diagram whose labels run 1..2n along the
/// orientation: the over-strand runs b -> d exactly when d follows b.
inline int oracle_writhe_sequential(const Diagram &d) {
  const int m = d.edge_count();
  int w = 0;
  for (const auto &c : d.crossings())
    w += (c[3] == c[1] % m + 1) ? 1 : -1;
  return w;
}

/// V(t) in quarter exponents: (-A^3)^(-w) <D>, A = t^(-1/4).
inline Poly oracle_jones(const Diagram &d, int writhe) {
  Poly f{{-3 * writhe, writhe % 2 == 0 ? 1 : -1}};
  Poly inA = poly_mul(f, oracle_bracket(d));
  Poly inT;
  for (auto [e, c] : inA)
    inT[-e] = c;
  return inT;
}

} // namespace testsupport
