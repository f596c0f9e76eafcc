#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "knotlab/diagram.hpp"
#include "knotlab/errors.hpp"

namespace knotlab {

enum class MoveKind { R1, R2, R3 };
enum class MoveDirection { reduce, grow, slide };
enum class Side { left, right };

/// Bit flags selecting (kind, direction) pairs for enumeration.
enum MoveType : unsigned {
  kR1Reduce = 1u << 0,
  kR1Grow = 1u << 1,
  kR2Reduce = 1u << 2,
  kR2Grow = 1u << 3,
  kR3Slide = 1u << 4,
};
using MoveSet = unsigned;
inline constexpr MoveSet kAllMoves = kR1Reduce | kR1Grow | kR2Reduce | kR2Grow | kR3Slide;
inline constexpr MoveSet kReduceMoves = kR1Reduce | kR2Reduce;
inline constexpr MoveSet kGrowMoves = kR1Grow | kR2Grow;

inline const char *to_string(MoveKind k) {
  switch (k) {
  case MoveKind::R1: return "R1";
  case MoveKind::R2: return "R2";
  default: return "R3";
  }
}
inline const char *to_string(MoveDirection d) {
  switch (d) {
  case MoveDirection::reduce: return "reduce";
  case MoveDirection::grow: return "grow";
  default: return "slide";
  }
}
inline const char *to_string(Side s) { return s == Side::left ? "left" : "right"; }

/// An applicable Reidemeister move on a specific labelled diagram.
///
/// locus: R1-reduce [loop edge]; R1-grow [edge] or [] on a free loop;
/// R2-reduce [bigon edges]; R2-grow [edge a, edge b] (ascending), or a
/// self-fold of one edge [edge] or of a free loop []; R3 [triangle edges].
struct MoveSite {
  MoveKind kind = MoveKind::R1;
  MoveDirection direction = MoveDirection::grow;
  std::vector<int> locus;
  // R1-grow
  int sign = 0;
  Side side = Side::left;
  // R2-grow: face side of each locus edge, and which locus edge passes over.
  // A self-fold uses `side` for the side of its kink and `over` = 0 when the
  // first passage runs over.
  std::array<Side, 2> sides{Side::left, Side::left};
  int over = 0;

  bool self_fold() const { return type() == kR2Grow && locus.size() < 2; }

  MoveType type() const {
    switch (kind) {
    case MoveKind::R1: return direction == MoveDirection::grow ? kR1Grow : kR1Reduce;
    case MoveKind::R2: return direction == MoveDirection::grow ? kR2Grow : kR2Reduce;
    default: return kR3Slide;
    }
  }

  /// Stable key: the compact wire serialization with sorted keys.
  std::string id() const {
    std::string s = "{\"direction\":\"";
    s += to_string(direction);
    s += "\",\"kind\":\"";
    s += to_string(kind);
    s += "\",\"locus\":[";
    for (std::size_t i = 0; i < locus.size(); ++i) {
      if (i)
        s += ',';
      s += std::to_string(locus[i]);
    }
    s += "],\"params\":{";
    if (type() == kR1Grow) {
      if (locus.empty())
        s += "\"free_loop\":true,";
      s += "\"side\":\"" + std::string(to_string(side)) + "\",\"sign\":" + std::to_string(sign);
    } else if (self_fold()) {
      s += std::string("\"fold\":\"") + (over == 0 ? "over" : "under") + "\",";
      if (locus.empty())
        s += "\"free_loop\":true,";
      s += "\"side\":\"" + std::string(to_string(side)) + "\"";
    } else if (type() == kR2Grow) {
      s += "\"over\":" + std::to_string(locus.at(static_cast<std::size_t>(over))) + ",\"sides\":[\"" +
           to_string(sides[0]) + "\",\"" + to_string(sides[1]) + "\"]";
    }
    s += "}}";
    return s;
  }

  friend bool operator==(const MoveSite &a, const MoveSite &b) { return a.id() == b.id(); }
  /// Enumeration order: kind, then locus, then parameters.
  friend bool operator<(const MoveSite &a, const MoveSite &b) {
    if (a.kind != b.kind)
      return a.kind < b.kind;
    if (a.locus != b.locus)
      return a.locus < b.locus;
    return a.id() < b.id();
  }
};

namespace detail {

inline int max_label(const std::vector<Quad> &quads) {
  int m = 0;
  for (const auto &q : quads)
    for (int l : q)
      m = std::max(m, l);
  return m;
}

/// Deletes crossings and joins each strand straight through them. Chains that
/// no longer touch a crossing become free loops.
inline Diagram remove_crossings(const std::vector<Quad> &quads, int free_loops, const std::vector<int> &removed) {
  std::vector<std::uint8_t> gone(quads.size(), 0);
  for (int c : removed)
    gone[static_cast<std::size_t>(c)] = 1;
  std::map<int, int> parent;
  const auto find = [&](int x) {
    while (true) {
      auto it = parent.find(x);
      if (it == parent.end() || it->second == x)
        return x;
      x = it->second;
    }
  };
  const auto join = [&](int a, int b) {
    int ra = find(a), rb = find(b);
    if (ra != rb)
      parent[std::max(ra, rb)] = std::min(ra, rb);
  };
  for (int c : removed) {
    const auto &q = quads[static_cast<std::size_t>(c)];
    join(q[0], q[2]);
    join(q[1], q[3]);
  }
  std::vector<Quad> kept;
  std::map<int, bool> touched; // root -> still meets a crossing
  for (int c : removed)
    for (int l : quads[static_cast<std::size_t>(c)])
      touched.emplace(find(l), false);
  for (std::size_t c = 0; c < quads.size(); ++c) {
    if (gone[c])
      continue;
    Quad q = quads[c];
    for (int &l : q) {
      int r = find(l);
      auto it = touched.find(r);
      if (it != touched.end())
        it->second = true;
      l = r;
    }
    kept.push_back(q);
  }
  int loops = free_loops;
  for (auto [root, hit] : touched)
    if (!hit)
      ++loops;
  return canonical_from_quads(kept, loops);
}

/// Face-walk helpers. Face of dart d lies on the right when travelling along
/// d's edge starting at d.
struct FaceData {
  std::vector<int> face;               // dart -> face id
  std::vector<std::vector<int>> darts; // face -> darts in walk order
};

inline FaceData faces(const Skeleton &sk) {
  FaceData fd;
  int count = 0;
  fd.face = face_of_dart(sk, &count);
  fd.darts.assign(static_cast<std::size_t>(count), {});
  std::vector<std::uint8_t> seen(fd.face.size(), 0);
  for (int d0 = 0; d0 < 4 * sk.n; ++d0) {
    if (seen[static_cast<std::size_t>(d0)])
      continue;
    auto &list = fd.darts[static_cast<std::size_t>(fd.face[static_cast<std::size_t>(d0)])];
    int d = d0;
    do {
      seen[static_cast<std::size_t>(d)] = 1;
      list.push_back(d);
      d = face_next(sk, d);
    } while (d != d0);
  }
  return fd;
}

/// Face on the given side of edge e (relative to its orientation).
inline int face_beside(const Skeleton &sk, const FaceData &fd, int e, Side side) {
  int start = side == Side::right ? sk.tail[static_cast<std::size_t>(e)] : sk.head[static_cast<std::size_t>(e)];
  return fd.face[static_cast<std::size_t>(start)];
}

inline int label_of(const Skeleton &sk, int e) { return sk.labels[static_cast<std::size_t>(e)]; }

inline int edge_index(const Skeleton &sk, int label) {
  auto it = std::lower_bound(sk.labels.begin(), sk.labels.end(), label);
  if (it == sk.labels.end() || *it != label)
    return -1;
  return static_cast<int>(it - sk.labels.begin());
}

inline void enumerate_r1_reduce(const Skeleton &sk, std::vector<MoveSite> &out) {
  // A lone crossing with two loops is one kink: either removal gives the
  // same free loop, so it is listed once, under its smaller label.
  std::vector<bool> seen(sk.quads.size(), false);
  for (int e = 0; e < sk.edge_count(); ++e) {
    auto [d1, d2] = sk.darts[static_cast<std::size_t>(e)];
    if (d1 / 4 != d2 / 4 || seen[static_cast<std::size_t>(d1 / 4)])
      continue;
    int gap = (d2 % 4 - d1 % 4 + 4) % 4;
    if (gap == 1 || gap == 3) {
      seen[static_cast<std::size_t>(d1 / 4)] = true;
      MoveSite s;
      s.kind = MoveKind::R1;
      s.direction = MoveDirection::reduce;
      s.locus = {label_of(sk, e)};
      out.push_back(s);
    }
  }
}

inline void enumerate_r1_grow(const Skeleton &sk, std::vector<MoveSite> &out) {
  const auto add = [&](std::vector<int> locus) {
    for (int sign : {-1, 1})
      for (Side side : {Side::left, Side::right}) {
        MoveSite s;
        s.kind = MoveKind::R1;
        s.direction = MoveDirection::grow;
        s.locus = locus;
        s.sign = sign;
        s.side = side;
        out.push_back(s);
      }
  };
  if (sk.free_loops > 0)
    add({});
  for (int e = 0; e < sk.edge_count(); ++e)
    add({label_of(sk, e)});
}

inline void enumerate_r2_reduce(const Skeleton &sk, const FaceData &fd, std::vector<MoveSite> &out) {
  for (const auto &ds : fd.darts) {
    if (ds.size() != 2 || ds[0] / 4 == ds[1] / 4)
      continue;
    int p = sk.edge_at(ds[0]);
    auto [a, b] = sk.darts[static_cast<std::size_t>(p)];
    if (a % 2 != b % 2)
      continue;
    MoveSite s;
    s.kind = MoveKind::R2;
    s.direction = MoveDirection::reduce;
    s.locus = {label_of(sk, p), label_of(sk, sk.edge_at(ds[1]))};
    std::sort(s.locus.begin(), s.locus.end());
    out.push_back(s);
  }
}

inline void enumerate_r2_fold(const Skeleton &sk, std::vector<MoveSite> &out) {
  const auto add = [&](std::vector<int> locus) {
    for (int over : {0, 1})
      for (Side side : {Side::left, Side::right}) {
        MoveSite s;
        s.kind = MoveKind::R2;
        s.direction = MoveDirection::grow;
        s.locus = locus;
        s.over = over;
        s.side = side;
        out.push_back(s);
      }
  };
  for (int e = 0; e < sk.edge_count(); ++e)
    add({label_of(sk, e)});
  if (sk.free_loops > 0)
    add({});
}

inline void enumerate_r2_grow(const Skeleton &sk, const FaceData &fd, std::vector<MoveSite> &out) {
  enumerate_r2_fold(sk, out);
  for (const auto &ds : fd.darts) {
    for (std::size_t i = 0; i < ds.size(); ++i)
      for (std::size_t j = i + 1; j < ds.size(); ++j) {
        int e = sk.edge_at(ds[i]), f = sk.edge_at(ds[j]);
        if (e == f)
          continue;
        // The face is on the right of a dart's walk; that walk is forward
        // along the edge exactly when the dart is its tail.
        Side se = sk.tail[static_cast<std::size_t>(e)] == ds[i] ? Side::right : Side::left;
        Side sf = sk.tail[static_cast<std::size_t>(f)] == ds[j] ? Side::right : Side::left;
        int le = label_of(sk, e), lf = label_of(sk, f);
        if (le > lf) {
          std::swap(le, lf);
          std::swap(se, sf);
        }
        for (int over : {0, 1}) {
          MoveSite s;
          s.kind = MoveKind::R2;
          s.direction = MoveDirection::grow;
          s.locus = {le, lf};
          s.sides = {se, sf};
          s.over = over;
          out.push_back(s);
        }
      }
  }
}

inline void enumerate_r3(const Skeleton &sk, const FaceData &fd, std::vector<MoveSite> &out) {
  for (const auto &ds : fd.darts) {
    if (ds.size() != 3)
      continue;
    int c0 = ds[0] / 4, c1 = ds[1] / 4, c2 = ds[2] / 4;
    if (c0 == c1 || c1 == c2 || c0 == c2)
      continue;
    bool coherent = false;
    for (int d : ds) {
      auto [a, b] = sk.darts[static_cast<std::size_t>(sk.edge_at(d))];
      if (a % 2 == b % 2)
        coherent = true;
    }
    if (!coherent)
      continue;
    MoveSite s;
    s.kind = MoveKind::R3;
    s.direction = MoveDirection::slide;
    for (int d : ds)
      s.locus.push_back(label_of(sk, sk.edge_at(d)));
    std::sort(s.locus.begin(), s.locus.end());
    out.push_back(s);
  }
}

inline std::vector<MoveSite> enumerate_on(const Skeleton &sk, MoveSet kinds) {
  std::vector<MoveSite> out;
  if (kinds & kR1Reduce)
    enumerate_r1_reduce(sk, out);
  if (kinds & kR1Grow)
    enumerate_r1_grow(sk, out);
  if (kinds & (kR2Reduce | kR2Grow | kR3Slide)) {
    auto fd = faces(sk);
    if (kinds & kR2Reduce)
      enumerate_r2_reduce(sk, fd, out);
    if (kinds & kR2Grow)
      enumerate_r2_grow(sk, fd, out);
    if (kinds & kR3Slide)
      enumerate_r3(sk, fd, out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// -- application ------------------------------------------------------------

inline Diagram apply_r1_grow(const Skeleton &sk, const MoveSite &site) {
  std::vector<Quad> work = sk.quads;
  int fresh = max_label(work);
  int loops = sk.free_loops;
  int e1, e2;
  if (site.locus.empty()) {
    --loops;
    e1 = e2 = ++fresh;
  } else {
    int e = edge_index(sk, site.locus[0]);
    int t = sk.tail[static_cast<std::size_t>(e)], h = sk.head[static_cast<std::size_t>(e)];
    e1 = ++fresh;
    e2 = ++fresh;
    work[static_cast<std::size_t>(t / 4)][static_cast<std::size_t>(t % 4)] = e1;
    work[static_cast<std::size_t>(h / 4)][static_cast<std::size_t>(h % 4)] = e2;
  }
  int loop = ++fresh;
  bool first_under = (site.side == Side::right) == (site.sign > 0);
  Quad q;
  if (site.side == Side::right)
    q = first_under ? Quad{e1, loop, loop, e2} : Quad{loop, loop, e2, e1};
  else
    q = first_under ? Quad{e1, e2, loop, loop} : Quad{loop, e1, e2, loop};
  work.push_back(q);
  return canonical_from_quads(work, loops);
}

/// One edge pushed across itself. Walking the edge: a, then crossings P and
/// Q joined by b, the kink c at Q, back through Q and P along d, then e.
inline Diagram apply_r2_fold(const Skeleton &sk, const MoveSite &site) {
  std::vector<Quad> work = sk.quads;
  int fresh = max_label(work);
  int loops = sk.free_loops;
  int a, e;
  if (site.locus.empty()) {
    --loops;
    a = e = ++fresh;
  } else {
    const int edge = edge_index(sk, site.locus[0]);
    const int t = sk.tail[static_cast<std::size_t>(edge)], h = sk.head[static_cast<std::size_t>(edge)];
    a = ++fresh;
    e = ++fresh;
    work[static_cast<std::size_t>(t / 4)][static_cast<std::size_t>(t % 4)] = a;
    work[static_cast<std::size_t>(h / 4)][static_cast<std::size_t>(h % 4)] = e;
  }
  const int b = ++fresh, c = ++fresh, d = ++fresh;
  // Kink on the right with the first passage over; the other cases are its
  // reflection (slots 1 and 3 swap) and its crossing change (rotate by one).
  Quad q{c, c, d, b}, p{d, a, e, b};
  if (site.over == 1) {
    q = Quad{b, c, c, d};
    p = Quad{a, e, b, d};
  }
  if (site.side == Side::left) {
    std::swap(q[1], q[3]);
    std::swap(p[1], p[3]);
  }
  work.push_back(q);
  work.push_back(p);
  return canonical_from_quads(work, loops);
}

inline Diagram apply_r2_grow(const Skeleton &sk, const MoveSite &site) {
  if (site.self_fold())
    return apply_r2_fold(sk, site);
  std::vector<Quad> work = sk.quads;
  int fresh = max_label(work);
  const int e = edge_index(sk, site.locus[0]);
  const int f = edge_index(sk, site.locus[1]);
  // Walk each edge with the shared face on its right.
  const bool e_fwd = site.sides[0] == Side::right;
  const bool f_fwd = site.sides[1] == Side::right;
  const int e1 = ++fresh, p = ++fresh, e2 = ++fresh;
  const int f1 = ++fresh, q = ++fresh, f2 = ++fresh;
  const auto rewire = [&](int edge, bool fwd, int before, int after) {
    int t = sk.tail[static_cast<std::size_t>(edge)], h = sk.head[static_cast<std::size_t>(edge)];
    int before_end = fwd ? t : h, after_end = fwd ? h : t;
    work[static_cast<std::size_t>(before_end / 4)][static_cast<std::size_t>(before_end % 4)] = before;
    work[static_cast<std::size_t>(after_end / 4)][static_cast<std::size_t>(after_end % 4)] = after;
  };
  rewire(e, e_fwd, e1, e2);
  rewire(f, f_fwd, f1, f2);
  // Counterclockwise positions E, N, W, S around each new crossing.
  enum { kE = 0, kN = 1, kW = 2, kS = 3 };
  const std::array<int, 4> x_ring{q, e1, f2, p};
  const std::array<int, 4> y_ring{f1, e2, q, p};
  const bool e_over = site.over == 0;
  const auto build = [&](const std::array<int, 4> &ring, int under_in) {
    return Quad{ring[static_cast<std::size_t>(under_in)], ring[static_cast<std::size_t>((under_in + 1) % 4)],
                ring[static_cast<std::size_t>((under_in + 2) % 4)], ring[static_cast<std::size_t>((under_in + 3) % 4)]};
  };
  // At X the e-walk runs N->S and the f-walk E->W; at Y, S->N and E->W.
  int x_in = e_over ? (f_fwd ? kE : kW) : (e_fwd ? kN : kS);
  int y_in = e_over ? (f_fwd ? kE : kW) : (e_fwd ? kS : kN);
  work.push_back(build(x_ring, x_in));
  work.push_back(build(y_ring, y_in));
  return canonical_from_quads(work, sk.free_loops);
}

inline Diagram apply_r3(const Skeleton &sk, const FaceData &fd, const MoveSite &site) {
  // Locate the triangle through its edges.
  int tri = -1;
  for (std::size_t fi = 0; fi < fd.darts.size() && tri < 0; ++fi) {
    const auto &ds = fd.darts[fi];
    if (ds.size() != 3)
      continue;
    std::vector<int> ls;
    for (int d : ds)
      ls.push_back(label_of(sk, sk.edge_at(d)));
    std::sort(ls.begin(), ls.end());
    if (ls == site.locus)
      tri = static_cast<int>(fi);
  }
  std::vector<Quad> work = sk.quads;
  for (int d : fd.darts[static_cast<std::size_t>(tri)]) {
    int t = sk.edge_at(d);
    auto [dk, dm] = sk.darts[static_cast<std::size_t>(t)];
    int ck = dk / 4, tk = dk % 4, cm = dm / 4, tm = dm % 4;
    int ok = (tk + 2) % 4, om = (tm + 2) % 4;
    int tl = label_of(sk, t);
    int outer_k = sk.quads[static_cast<std::size_t>(ck)][static_cast<std::size_t>(ok)];
    int outer_m = sk.quads[static_cast<std::size_t>(cm)][static_cast<std::size_t>(om)];
    work[static_cast<std::size_t>(ck)][static_cast<std::size_t>(tk)] = outer_m;
    work[static_cast<std::size_t>(cm)][static_cast<std::size_t>(tm)] = outer_k;
    work[static_cast<std::size_t>(ck)][static_cast<std::size_t>(ok)] = tl;
    work[static_cast<std::size_t>(cm)][static_cast<std::size_t>(om)] = tl;
  }
  return canonical_from_quads(work, sk.free_loops);
}

/// Applies a site known to be valid for `sk`.
inline Diagram apply_on(const Skeleton &sk, const MoveSite &site) {
  switch (site.type()) {
  case kR1Grow: return apply_r1_grow(sk, site);
  case kR2Grow: return apply_r2_grow(sk, site);
  case kR3Slide: return apply_r3(sk, faces(sk), site);
  case kR1Reduce: {
    int e = edge_index(sk, site.locus[0]);
    return remove_crossings(sk.quads, sk.free_loops, {sk.darts[static_cast<std::size_t>(e)][0] / 4});
  }
  case kR2Reduce: {
    int e = edge_index(sk, site.locus[0]);
    auto [a, b] = sk.darts[static_cast<std::size_t>(e)];
    return remove_crossings(sk.quads, sk.free_loops, {a / 4, b / 4});
  }
  }
  throw InvalidSite("unknown move type");
}

} // namespace detail

/// Every applicable site of the selected types, in canonical order.
inline std::vector<MoveSite> enumerate_sites(const Diagram &d, MoveSet kinds = kAllMoves) {
  return detail::enumerate_on(detail::make_skeleton(d), kinds);
}

/// Applies `site` to `d`; the result is canonically relabelled.
/// Throws InvalidSite when the site was not enumerated from `d`.
inline Diagram apply_move(const Diagram &d, const MoveSite &site) {
  auto sk = detail::make_skeleton(d);
  auto candidates = detail::enumerate_on(sk, site.type());
  if (std::find(candidates.begin(), candidates.end(), site) == candidates.end())
    throw InvalidSite("move " + site.id() + " does not apply to this diagram", site.id());
  return detail::apply_on(sk, site);
}

/// Replays `path` from `d`, validating each step.
inline Diagram replay(Diagram d, const std::vector<MoveSite> &path) {
  for (const auto &s : path)
    d = apply_move(d, s);
  return d;
}

inline MoveSet inverse_types(MoveType t) {
  switch (t) {
  case kR1Grow: return kR1Reduce;
  case kR1Reduce: return kR1Grow;
  case kR2Grow: return kR2Reduce;
  case kR2Reduce: return kR2Grow;
  default: return kR3Slide;
  }
}

/// A site on `after` that undoes `site` (result equals canonical(before)).
inline MoveSite inverse_site(const Diagram &before, const MoveSite &site, const Diagram &after) {
  const Diagram target = canonical(before);
  auto sk = detail::make_skeleton(after);
  for (const auto &s : detail::enumerate_on(sk, inverse_types(site.type())))
    if (detail::apply_on(sk, s) == target)
      return s;
  throw InvalidSite("no inverse for move " + site.id());
}

enum class WalkPolicy { any, grow_biased };

namespace detail {

/// Uniform integer in [0, n) by rejection, identical on every platform.
inline std::uint64_t uniform_below(std::mt19937_64 &rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do
    x = rng();
  while (x >= limit);
  return x % n;
}

} // namespace detail

struct WalkResult {
  Diagram diagram;
  std::vector<MoveSite> path;
};

/// Seeded random sequence of n moves. grow_biased draws a grow move 70% of
/// the time and any move type otherwise.
inline WalkResult random_walk(const Diagram &start, int n, std::uint64_t seed, WalkPolicy policy = WalkPolicy::any) {
  static constexpr std::array<MoveType, 5> kTypes{kR1Reduce, kR1Grow, kR2Reduce, kR2Grow, kR3Slide};
  static constexpr std::array<MoveType, 2> kGrow{kR1Grow, kR2Grow};
  std::mt19937_64 rng(seed);
  WalkResult r{start, {}};
  for (int step = 0; step < n; ++step) {
    auto sk = detail::make_skeleton(r.diagram);
    std::vector<MoveSite> sites;
    while (sites.empty()) {
      MoveType t;
      if (policy == WalkPolicy::grow_biased && detail::uniform_below(rng, 10) < 7)
        t = kGrow[detail::uniform_below(rng, kGrow.size())];
      else
        t = kTypes[detail::uniform_below(rng, kTypes.size())];
      sites = detail::enumerate_on(sk, t);
    }
    const auto &site = sites[detail::uniform_below(rng, sites.size())];
    r.path.push_back(site);
    r.diagram = detail::apply_on(sk, site);
  }
  return r;
}

} // namespace knotlab
