#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "knotlab/errors.hpp"

namespace knotlab {

/// Edge labels around a crossing, counterclockwise from the incoming
/// under-edge. Slot 0 is the incoming under-edge and slot 2 the outgoing
/// under-edge; slots 1 and 3 carry the over-strand in whichever direction the
/// global orientation forces.
using Quad = std::array<int, 4>;

struct Crossing {
  Quad quad{};

  int operator[](int slot) const { return quad[static_cast<std::size_t>(slot)]; }
  int min_label() const { return *std::min_element(quad.begin(), quad.end()); }

  friend bool operator==(const Crossing &, const Crossing &) = default;
  /// Canonical emission order: smallest incident label, then the quad itself.
  friend auto operator<=>(const Crossing &a, const Crossing &b) {
    if (auto c = a.min_label() <=> b.min_label(); c != 0)
      return c;
    return a.quad <=> b.quad;
  }
};

/// A link diagram: crossings over labelled edges plus crossing-free loops.
/// Crossings are kept in canonical emission order, so two diagrams compare
/// equal exactly when they have the same crossing multiset and loop count.
class Diagram {
public:
  Diagram() = default;
  explicit Diagram(std::vector<Crossing> crossings, int free_loops = 0)
      : crossings_(std::move(crossings)), free_loops_(free_loops) {
    std::sort(crossings_.begin(), crossings_.end());
  }

  static Diagram from_quads(const std::vector<Quad> &quads, int free_loops = 0) {
    std::vector<Crossing> cs;
    cs.reserve(quads.size());
    for (const auto &q : quads)
      cs.push_back(Crossing{q});
    return Diagram(std::move(cs), free_loops);
  }

  static Diagram unknot() { return Diagram({}, 1); }

  const std::vector<Crossing> &crossings() const noexcept { return crossings_; }
  int crossing_count() const noexcept { return static_cast<int>(crossings_.size()); }
  int edge_count() const noexcept { return 2 * crossing_count(); }
  int free_loops() const noexcept { return free_loops_; }
  bool empty() const noexcept { return crossings_.empty() && free_loops_ == 0; }

  std::vector<Quad> quads() const {
    std::vector<Quad> out;
    out.reserve(crossings_.size());
    for (const auto &c : crossings_)
      out.push_back(c.quad);
    return out;
  }

  /// Mirror image: every crossing switched. The under-strand of the new
  /// crossing is the old over-strand, so each quad is rotated to start at
  /// the old over-strand's incoming slot.
  Diagram mirror() const;

  friend bool operator==(const Diagram &, const Diagram &) = default;

private:
  std::vector<Crossing> crossings_;
  int free_loops_ = 0;
};

// ---------------------------------------------------------------------------
// PD text

namespace detail {

inline bool is_ws(char c) { return c == ' ' || c == '\n' || c == '\r' || c == '\t'; }

inline void expect_char(std::string_view text, std::size_t &pos, char want) {
  if (pos >= text.size() || text[pos] != want)
    throw SyntaxError(std::string("expected '") + want + "'", pos);
  ++pos;
}

inline int read_label(std::string_view text, std::size_t &pos) {
  std::size_t start = pos;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
    ++pos;
  if (pos == start)
    throw SyntaxError("expected a decimal label", start);
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + pos, value);
  if (ec != std::errc() || ptr != text.data() + pos)
    throw SyntaxError("label out of range", start);
  if (value < 1)
    throw SyntaxError("labels must be at least 1", start);
  return value;
}

} // namespace detail

/// Parses PD text without structural checks.
inline Diagram parse_pd_unchecked(std::string_view text) {
  std::vector<Crossing> crossings;
  int loops = 0;
  std::size_t pos = 0;
  if (text.empty())
    return Diagram();
  while (true) {
    if (pos >= text.size())
      throw SyntaxError("expected 'O' or 'X('", pos);
    if (text[pos] == 'O') {
      ++loops;
      ++pos;
    } else if (text[pos] == 'X') {
      ++pos;
      detail::expect_char(text, pos, '(');
      Crossing c;
      for (int i = 0; i < 4; ++i) {
        if (i > 0)
          detail::expect_char(text, pos, ',');
        c.quad[static_cast<std::size_t>(i)] = detail::read_label(text, pos);
      }
      detail::expect_char(text, pos, ')');
      crossings.push_back(c);
    } else {
      throw SyntaxError("expected 'O' or 'X('", pos);
    }
    if (pos == text.size())
      break;
    if (!detail::is_ws(text[pos]))
      throw SyntaxError("expected whitespace between items", pos);
    while (pos < text.size() && detail::is_ws(text[pos]))
      ++pos;
    if (pos == text.size())
      throw SyntaxError("trailing whitespace", pos);
  }
  return Diagram(std::move(crossings), loops);
}

inline std::string emit_pd(const Diagram &d) {
  std::string out;
  for (const auto &c : d.crossings()) {
    if (!out.empty())
      out += ' ';
    out += "X(" + std::to_string(c[0]) + "," + std::to_string(c[1]) + "," + std::to_string(c[2]) + "," +
           std::to_string(c[3]) + ")";
  }
  for (int i = 0; i < d.free_loops(); ++i) {
    if (!out.empty())
      out += ' ';
    out += 'O';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

struct Finding {
  std::string code; // DOUBLE_USE, ORIENTATION, EULER
  std::string message;
  std::optional<int> label;
  std::optional<int> crossing;
};

struct ValidationReport {
  std::vector<Finding> findings;
  bool ok() const noexcept { return findings.empty(); }
};

namespace detail {

/// Dart = one end of an edge, encoded as 4 * crossing + slot.
inline int dart(int crossing, int slot) { return 4 * crossing + slot; }
inline int dart_crossing(int d) { return d / 4; }
inline int dart_slot(int d) { return d % 4; }

/// Incidence structure of a diagram whose labels are arbitrary positive
/// integers, each used exactly twice.
struct Skeleton {
  int n = 0;
  int free_loops = 0;
  std::vector<Quad> quads;
  std::vector<int> labels;                  // edge index -> label, ascending
  std::vector<std::array<int, 4>> slot_edge; // crossing, slot -> edge index
  std::vector<std::array<int, 2>> darts;    // edge index -> both darts
  std::vector<int> tail, head;              // edge index -> dart
  std::vector<std::uint8_t> over_from_b;    // crossing -> over-strand enters at slot 1
  std::vector<std::uint8_t> free_direction; // edge -> on a component that never passes under

  int edge_count() const { return static_cast<int>(labels.size()); }
  int edge_at(int d) const { return slot_edge[static_cast<std::size_t>(d / 4)][static_cast<std::size_t>(d % 4)]; }
  int mate(int d) const {
    const auto &ds = darts[static_cast<std::size_t>(edge_at(d))];
    return ds[0] == d ? ds[1] : ds[0];
  }
  int next_edge(int e) const {
    int h = head[static_cast<std::size_t>(e)];
    return edge_at(dart(h / 4, (h % 4 + 2) % 4));
  }
  int prev_edge(int e) const {
    int t = tail[static_cast<std::size_t>(e)];
    return edge_at(dart(t / 4, (t % 4 + 2) % 4));
  }
  bool is_incoming(int d) const { return head[static_cast<std::size_t>(edge_at(d))] == d; }
  /// +1 when the over-strand enters at slot 1.
  int sign(int c) const { return over_from_b[static_cast<std::size_t>(c)] ? 1 : -1; }
};

/// Label incidence. With `dense`, labels must be exactly 1..2n.
inline std::vector<Finding> check_labels(const std::vector<Quad> &quads, bool dense) {
  std::vector<Finding> out;
  std::map<int, int> uses;
  for (const auto &q : quads)
    for (int l : q)
      ++uses[l];
  const int edges = 2 * static_cast<int>(quads.size());
  for (auto [label, count] : uses) {
    if (label < 1 || (dense && label > edges)) {
      out.push_back({"DOUBLE_USE", "label " + std::to_string(label) + " outside 1.." + std::to_string(edges), label, {}});
    } else if (count != 2) {
      out.push_back({"DOUBLE_USE",
                     "label " + std::to_string(label) + " used " + std::to_string(count) + (count == 1 ? " time" : " times") + " (expected 2)",
                     label,
                     {}});
    }
  }
  if (dense)
    for (int l = 1; l <= edges; ++l)
      if (!uses.count(l))
        out.push_back({"DOUBLE_USE", "label " + std::to_string(l) + " unused (expected 2 uses)", l, {}});
  return out;
}

/// Union-find with parity, used to propagate over-strand directions.
class ParityUnionFind {
public:
  explicit ParityUnionFind(int n) : parent_(static_cast<std::size_t>(n)), parity_(static_cast<std::size_t>(n), 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::pair<int, int> find(int x) {
    int p = 0;
    int r = x;
    while (parent_[static_cast<std::size_t>(r)] != r) {
      p ^= parity_[static_cast<std::size_t>(r)];
      r = parent_[static_cast<std::size_t>(r)];
    }
    // compress
    int cur = x, cp = p;
    while (parent_[static_cast<std::size_t>(cur)] != cur) {
      int next = parent_[static_cast<std::size_t>(cur)];
      int np = cp ^ parity_[static_cast<std::size_t>(cur)];
      parent_[static_cast<std::size_t>(cur)] = r;
      parity_[static_cast<std::size_t>(cur)] = cp;
      cur = next;
      cp = np;
    }
    return {r, p};
  }

  /// Imposes value(a) ^ value(b) == rel; false on contradiction.
  bool unite(int a, int b, int rel) {
    auto [ra, pa] = find(a);
    auto [rb, pb] = find(b);
    if (ra == rb)
      return (pa ^ pb) == rel;
    parent_[static_cast<std::size_t>(ra)] = rb;
    parity_[static_cast<std::size_t>(ra)] = pa ^ pb ^ rel;
    return true;
  }

private:
  std::vector<int> parent_;
  std::vector<int> parity_;
};

/// Builds incidence and orientation. Findings are appended; returns nullopt
/// when the quads are not a consistent oriented diagram.
inline std::optional<Skeleton> build_skeleton(const std::vector<Quad> &quads, int free_loops,
                                              std::vector<Finding> *findings, bool dense = false) {
  auto label_findings = check_labels(quads, dense);
  if (!label_findings.empty()) {
    if (findings)
      findings->insert(findings->end(), label_findings.begin(), label_findings.end());
    return std::nullopt;
  }
  Skeleton sk;
  sk.n = static_cast<int>(quads.size());
  sk.free_loops = free_loops;
  sk.quads = quads;
  for (const auto &q : quads)
    for (int l : q)
      sk.labels.push_back(l);
  std::sort(sk.labels.begin(), sk.labels.end());
  sk.labels.erase(std::unique(sk.labels.begin(), sk.labels.end()), sk.labels.end());
  const auto index_of = [&](int label) {
    return static_cast<int>(std::lower_bound(sk.labels.begin(), sk.labels.end(), label) - sk.labels.begin());
  };
  const auto m = static_cast<std::size_t>(sk.edge_count());
  sk.slot_edge.resize(quads.size());
  sk.darts.assign(m, {-1, -1});
  for (int c = 0; c < sk.n; ++c)
    for (int s = 0; s < 4; ++s) {
      int e = index_of(quads[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)]);
      sk.slot_edge[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)] = e;
      auto &ds = sk.darts[static_cast<std::size_t>(e)];
      (ds[0] < 0 ? ds[0] : ds[1]) = dart(c, s);
    }

  // Direction of a dart as (node, parity): node n is the constant "incoming".
  const int konst = sk.n;
  ParityUnionFind uf(sk.n + 1);
  const auto term = [&](int d) -> std::pair<int, int> {
    switch (d % 4) {
    case 0: return {konst, 0};
    case 2: return {konst, 1};
    case 1: return {d / 4, 0};
    default: return {d / 4, 1};
    }
  };
  bool consistent = true;
  for (std::size_t e = 0; e < m; ++e) {
    auto [n1, p1] = term(sk.darts[e][0]);
    auto [n2, p2] = term(sk.darts[e][1]);
    if (!uf.unite(n1, n2, 1 ^ p1 ^ p2)) {
      consistent = false;
      if (findings)
        findings->push_back({"ORIENTATION",
                             "edge " + std::to_string(sk.labels[e]) + " cannot be oriented consistently",
                             sk.labels[e],
                             sk.darts[e][0] / 4});
    }
  }
  if (!consistent)
    return std::nullopt;

  auto [kroot, kpar] = uf.find(konst);
  std::vector<int> root_value(static_cast<std::size_t>(sk.n + 1), 1);
  root_value[static_cast<std::size_t>(kroot)] = 1 ^ kpar;
  const auto assign = [&] {
    sk.over_from_b.assign(static_cast<std::size_t>(sk.n), 0);
    for (int c = 0; c < sk.n; ++c) {
      auto [r, p] = uf.find(c);
      sk.over_from_b[static_cast<std::size_t>(c)] =
          static_cast<std::uint8_t>(root_value[static_cast<std::size_t>(r)] ^ p);
    }
    sk.tail.assign(m, -1);
    sk.head.assign(m, -1);
    for (std::size_t e = 0; e < m; ++e)
      for (int d : sk.darts[e]) {
        int s = d % 4;
        bool in = s == 0 || (s == 1 && sk.over_from_b[static_cast<std::size_t>(d / 4)]) ||
                  (s == 3 && !sk.over_from_b[static_cast<std::size_t>(d / 4)]);
        (in ? sk.head[e] : sk.tail[e]) = d;
      }
  };
  assign();

  // Components that only pass over carry no direction in the PD data. Pick
  // the direction in which the smallest label steps to its smaller neighbour.
  sk.free_direction.assign(m, 0);
  std::vector<std::uint8_t> seen(m, 0);
  bool flipped = false;
  for (std::size_t e0 = 0; e0 < m; ++e0) {
    if (seen[e0])
      continue;
    std::vector<int> comp;
    bool passes_under = false;
    int e = static_cast<int>(e0);
    do {
      seen[static_cast<std::size_t>(e)] = 1;
      comp.push_back(e);
      if (sk.head[static_cast<std::size_t>(e)] % 4 == 0)
        passes_under = true;
      e = sk.next_edge(e);
    } while (e != static_cast<int>(e0));
    if (passes_under)
      continue;
    for (int x : comp)
      sk.free_direction[static_cast<std::size_t>(x)] = 1;
    // e0 has the smallest label on its component (edges visited in label order).
    int nxt = sk.next_edge(static_cast<int>(e0));
    int prv = sk.prev_edge(static_cast<int>(e0));
    bool flip = nxt > prv;
    if (nxt == prv)
      flip = sk.tail[e0] / 4 > sk.head[e0] / 4;
    if (flip) {
      auto [r, p] = uf.find(sk.tail[e0] / 4);
      (void)p;
      root_value[static_cast<std::size_t>(r)] ^= 1;
      flipped = true;
    }
  }
  if (flipped)
    assign();
  return sk;
}

inline Skeleton make_skeleton(const Diagram &d) {
  std::vector<Finding> findings;
  auto sk = build_skeleton(d.quads(), d.free_loops(), &findings);
  if (!sk)
    throw StructureError(findings.front().message);
  return *std::move(sk);
}

/// Connected pieces of the crossing graph: crossing -> piece id (0-based, in
/// order of first crossing).
inline std::vector<int> pieces_of(const Skeleton &sk, int *count = nullptr) {
  std::vector<int> piece(static_cast<std::size_t>(sk.n), -1);
  int next = 0;
  for (int c0 = 0; c0 < sk.n; ++c0) {
    if (piece[static_cast<std::size_t>(c0)] >= 0)
      continue;
    std::vector<int> stack{c0};
    piece[static_cast<std::size_t>(c0)] = next;
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      for (int s = 0; s < 4; ++s) {
        int other = sk.mate(dart(c, s)) / 4;
        if (piece[static_cast<std::size_t>(other)] < 0) {
          piece[static_cast<std::size_t>(other)] = next;
          stack.push_back(other);
        }
      }
    }
    ++next;
  }
  if (count)
    *count = next;
  return piece;
}

/// Face permutation: the dart following `d` around the face on its right.
/// Faces are the cycles of this map on all 4n darts.
inline int face_next(const Skeleton &sk, int d) {
  int m = sk.mate(d);
  return dart(m / 4, (m % 4 + 1) % 4);
}

/// Face id for every dart, faces numbered in order of their smallest dart.
inline std::vector<int> face_of_dart(const Skeleton &sk, int *count = nullptr) {
  std::vector<int> face(static_cast<std::size_t>(4 * sk.n), -1);
  int next = 0;
  for (int d0 = 0; d0 < 4 * sk.n; ++d0) {
    if (face[static_cast<std::size_t>(d0)] >= 0)
      continue;
    int d = d0;
    do {
      face[static_cast<std::size_t>(d)] = next;
      d = face_next(sk, d);
    } while (d != d0);
    ++next;
  }
  if (count)
    *count = next;
  return face;
}

inline std::vector<Finding> euler_findings(const Skeleton &sk) {
  std::vector<Finding> out;
  int npieces = 0;
  auto piece = pieces_of(sk, &npieces);
  int nfaces = 0;
  auto face = face_of_dart(sk, &nfaces);
  std::vector<int> v(static_cast<std::size_t>(npieces), 0);
  std::vector<int> f(static_cast<std::size_t>(npieces), 0);
  for (int c = 0; c < sk.n; ++c)
    ++v[static_cast<std::size_t>(piece[static_cast<std::size_t>(c)])];
  std::vector<std::uint8_t> counted(static_cast<std::size_t>(nfaces), 0);
  for (int d = 0; d < 4 * sk.n; ++d) {
    int id = face[static_cast<std::size_t>(d)];
    if (!counted[static_cast<std::size_t>(id)]) {
      counted[static_cast<std::size_t>(id)] = 1;
      ++f[static_cast<std::size_t>(piece[static_cast<std::size_t>(d / 4)])];
    }
  }
  for (int p = 0; p < npieces; ++p) {
    int V = v[static_cast<std::size_t>(p)], E = 2 * V, F = f[static_cast<std::size_t>(p)];
    if (V - E + F != 2) {
      int first = static_cast<int>(std::find(piece.begin(), piece.end(), p) - piece.begin());
      out.push_back({"EULER",
                     "piece containing crossing " + std::to_string(first) + " has V-E+F = " +
                         std::to_string(V - E + F) + " (not planar)",
                     {},
                     first});
    }
  }
  return out;
}

} // namespace detail

inline ValidationReport validate(const Diagram &d) {
  ValidationReport report;
  auto sk = detail::build_skeleton(d.quads(), d.free_loops(), &report.findings, /*dense=*/true);
  if (sk)
    report.findings = detail::euler_findings(*sk);
  return report;
}

/// Parses and validates PD text. Throws SyntaxError or StructureError.
inline Diagram parse_pd(std::string_view text) {
  Diagram d = parse_pd_unchecked(text);
  auto report = validate(d);
  if (!report.ok()) {
    const auto &f = report.findings.front();
    std::string detail = f.code;
    if (f.label)
      detail += " label=" + std::to_string(*f.label);
    if (f.crossing)
      detail += " crossing=" + std::to_string(*f.crossing);
    throw StructureError(f.message, detail);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Tracing

struct ArcMap {
  std::map<int, int> arc_of_edge; // edge label -> arc id
  int edge_arc_count = 0;         // arcs made of edges
  int arc_count = 0;              // plus one arc per free loop
};

struct EdgeDirection {
  int from_crossing, from_slot, to_crossing, to_slot;
};

struct TraceResult {
  int components = 0;
  int faces = 0;
  ArcMap arcs;
  std::map<int, EdgeDirection> orientation; // edge label -> direction
  std::map<int, int> component_of_edge;     // edge label -> component id
};

namespace detail {

/// Arc id per edge index; arcs start at edges leaving an under-passage and
/// are numbered in order of their smallest label.
inline std::vector<int> arc_ids(const Skeleton &sk, int *count) {
  const auto m = static_cast<std::size_t>(sk.edge_count());
  std::vector<int> arc(m, -1);
  int next = 0;
  for (std::size_t e0 = 0; e0 < m; ++e0) {
    if (arc[e0] >= 0)
      continue;
    // Walk back to the first edge of the arc (or all the way round).
    int start = static_cast<int>(e0);
    while (sk.tail[static_cast<std::size_t>(start)] % 4 != 2) {
      start = sk.prev_edge(start);
      if (start == static_cast<int>(e0))
        break;
    }
    int e = start;
    while (true) {
      arc[static_cast<std::size_t>(e)] = next;
      if (sk.head[static_cast<std::size_t>(e)] % 4 == 0)
        break;
      e = sk.next_edge(e);
      if (e == start)
        break;
    }
    ++next;
  }
  if (count)
    *count = next;
  return arc;
}

/// Component id per edge index, numbered in order of smallest label.
inline std::vector<int> component_ids(const Skeleton &sk, int *count) {
  const auto m = static_cast<std::size_t>(sk.edge_count());
  std::vector<int> comp(m, -1);
  int next = 0;
  for (std::size_t e0 = 0; e0 < m; ++e0) {
    if (comp[e0] >= 0)
      continue;
    int e = static_cast<int>(e0);
    do {
      comp[static_cast<std::size_t>(e)] = next;
      e = sk.next_edge(e);
    } while (e != static_cast<int>(e0));
    ++next;
  }
  if (count)
    *count = next;
  return comp;
}

} // namespace detail

inline TraceResult trace(const Diagram &d) {
  TraceResult r;
  auto sk = detail::make_skeleton(d);
  int strand_components = 0;
  auto comp = detail::component_ids(sk, &strand_components);
  r.components = strand_components + d.free_loops();

  int npieces = 0;
  detail::pieces_of(sk, &npieces);
  int nfaces = 0;
  detail::face_of_dart(sk, &nfaces);
  // Disjoint pieces share one sphere: each extra piece merges two faces.
  const int pieces = npieces + d.free_loops();
  r.faces = pieces == 0 ? 1 : nfaces + 2 * d.free_loops() - (pieces - 1);

  int edge_arcs = 0;
  auto arc = detail::arc_ids(sk, &edge_arcs);
  r.arcs.edge_arc_count = edge_arcs;
  r.arcs.arc_count = edge_arcs + d.free_loops();
  for (int e = 0; e < sk.edge_count(); ++e) {
    int label = sk.labels[static_cast<std::size_t>(e)];
    r.arcs.arc_of_edge[label] = arc[static_cast<std::size_t>(e)];
    int t = sk.tail[static_cast<std::size_t>(e)], h = sk.head[static_cast<std::size_t>(e)];
    r.orientation[label] = {t / 4, t % 4, h / 4, h % 4};
    r.component_of_edge[label] = comp[static_cast<std::size_t>(e)];
  }
  return r;
}

/// Signed extended Gauss code, for display only. Each component is listed
/// from its smallest edge label as "O<k><sign>" or "U<k><sign>" per passage,
/// with crossings numbered 1.. in emission order. A free loop is "()".
inline std::string emit_gauss(const Diagram &d) {
  auto sk = detail::make_skeleton(d);
  int comps = 0;
  auto comp = detail::component_ids(sk, &comps);
  std::string out;
  for (int k = 0; k < comps; ++k) {
    int start = 0;
    while (comp[static_cast<std::size_t>(start)] != k)
      ++start;
    std::string part;
    int e = start;
    do {
      const int h = sk.head[static_cast<std::size_t>(e)];
      part += part.empty() ? "" : " ";
      part += (h % 4 == 0 ? "U" : "O") + std::to_string(h / 4 + 1) + (sk.sign(h / 4) > 0 ? "+" : "-");
      e = sk.next_edge(e);
    } while (e != start);
    out += (out.empty() ? "(" : " (") + part + ")";
  }
  for (int i = 0; i < d.free_loops(); ++i)
    out += out.empty() ? "()" : " ()";
  return out;
}

// ---------------------------------------------------------------------------
// Canonical relabelling

namespace detail {

/// Canonical labels for the crossings of one connected piece. Labels run
/// consecutively along each component; the start edge is chosen to minimise
/// the emitted crossing list.
inline std::vector<Quad> canonical_piece(const Skeleton &sk, const std::vector<int> &crossings) {
  std::vector<int> edges;
  for (int c : crossings)
    for (int s = 0; s < 4; ++s)
      edges.push_back(sk.slot_edge[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)]);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  const auto m = static_cast<std::size_t>(sk.edge_count());
  std::vector<int> newlab(m, 0);
  std::vector<std::pair<int, bool>> order;
  std::vector<Crossing> best, cand;
  bool have_best = false;

  const auto run = [&](int e0, bool rev0) {
    for (int e : edges)
      newlab[static_cast<std::size_t>(e)] = 0;
    order.clear();
    int next = 0;
    const auto number = [&](int e, bool rev) {
      int cur = e;
      do {
        newlab[static_cast<std::size_t>(cur)] = ++next;
        order.emplace_back(cur, rev);
        cur = rev ? sk.prev_edge(cur) : sk.next_edge(cur);
      } while (cur != e);
    };
    number(e0, rev0);
    for (std::size_t i = 0; i < order.size(); ++i) {
      auto [e, rev] = order[i];
      int enter = rev ? sk.tail[static_cast<std::size_t>(e)] : sk.head[static_cast<std::size_t>(e)];
      int c = enter / 4, s = enter % 4;
      for (int k = 1; k < 4; ++k) {
        int slot = (s + k) % 4;
        int f = sk.slot_edge[static_cast<std::size_t>(c)][static_cast<std::size_t>(slot)];
        if (newlab[static_cast<std::size_t>(f)])
          continue;
        bool frev = sk.free_direction[static_cast<std::size_t>(f)] && sk.tail[static_cast<std::size_t>(f)] != dart(c, slot);
        number(f, frev);
      }
    }
    cand.clear();
    for (int c : crossings) {
      Crossing x;
      for (int s = 0; s < 4; ++s)
        x.quad[static_cast<std::size_t>(s)] =
            newlab[static_cast<std::size_t>(sk.slot_edge[static_cast<std::size_t>(c)][static_cast<std::size_t>(s)])];
      cand.push_back(x);
    }
    std::sort(cand.begin(), cand.end());
    if (!have_best || cand < best) {
      best = cand;
      have_best = true;
    }
  };

  for (int e : edges) {
    run(e, false);
    if (sk.free_direction[static_cast<std::size_t>(e)])
      run(e, true);
  }
  std::vector<Quad> out;
  for (const auto &c : best)
    out.push_back(c.quad);
  return out;
}

inline Diagram canonical_from_skeleton(const Skeleton &sk) {
  int npieces = 0;
  auto piece = pieces_of(sk, &npieces);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(npieces));
  for (int c = 0; c < sk.n; ++c)
    members[static_cast<std::size_t>(piece[static_cast<std::size_t>(c)])].push_back(c);
  std::vector<std::vector<Quad>> parts;
  for (const auto &mem : members)
    parts.push_back(canonical_piece(sk, mem));
  std::sort(parts.begin(), parts.end(), [](const auto &a, const auto &b) {
    if (a.size() != b.size())
      return a.size() < b.size();
    return a < b;
  });
  std::vector<Quad> all;
  int offset = 0;
  for (const auto &part : parts) {
    for (auto q : part) {
      for (int &l : q)
        l += offset;
      all.push_back(q);
    }
    offset += 2 * static_cast<int>(part.size());
  }
  return Diagram::from_quads(all, sk.free_loops);
}

/// Canonical form of crossings with arbitrary (twice-used) labels.
inline Diagram canonical_from_quads(const std::vector<Quad> &quads, int free_loops) {
  std::vector<Finding> findings;
  auto sk = build_skeleton(quads, free_loops, &findings);
  if (!sk)
    throw StructureError("canonical relabelling of an invalid diagram: " + findings.front().message);
  return canonical_from_skeleton(*sk);
}

} // namespace detail

/// Relabels `d` so that equal diagrams up to relabelling become equal values.
inline Diagram canonical(const Diagram &d) { return detail::canonical_from_quads(d.quads(), d.free_loops()); }

/// Stable text key of the canonical form.
inline std::string canonical_key(const Diagram &d) { return emit_pd(canonical(d)); }

inline Diagram Diagram::mirror() const {
  auto sk = detail::make_skeleton(*this);
  std::vector<Quad> out;
  for (int c = 0; c < sk.n; ++c) {
    // New under-strand enters where the old over-strand entered.
    int start = sk.over_from_b[static_cast<std::size_t>(c)] ? 1 : 3;
    const auto &q = sk.quads[static_cast<std::size_t>(c)];
    out.push_back({q[static_cast<std::size_t>(start)], q[static_cast<std::size_t>((start + 1) % 4)],
                   q[static_cast<std::size_t>((start + 2) % 4)], q[static_cast<std::size_t>((start + 3) % 4)]});
  }
  return Diagram::from_quads(out, free_loops_);
}

} // namespace knotlab
