#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "knotlab/diagram.hpp"

namespace knotlab {

struct Point {
  double x = 0, y = 0;
  friend bool operator==(const Point &, const Point &) = default;
};

struct Circle {
  Point center;
  double radius = 1;
  friend bool operator==(const Circle &, const Circle &) = default;
};

/// Planar drawing of a diagram. Coordinates use a y-up frame in which each
/// crossing's slots appear counterclockwise.
struct Layout {
  std::vector<Point> position_of_crossing;     // indexed like Diagram::crossings()
  std::map<int, std::vector<Point>> edge_routes; // label -> polyline, tail to head
  std::vector<Circle> loops;                   // one per free loop
  Point min, max;                              // bounding box

  friend bool operator==(const Layout &, const Layout &) = default;
};

namespace detail {

/// Oriented map on the sphere given by half-edges. rot[h] is the next
/// half-edge counterclockwise around vert[h]; faces are the orbits of
/// h -> rot[twin[h]].
struct PlanarMap {
  int vertices = 0;
  std::vector<int> vert, twin, rot;

  int half_edges() const { return static_cast<int>(vert.size()); }
};

inline std::vector<int> map_faces(const PlanarMap &m, int *count) {
  std::vector<int> face(static_cast<std::size_t>(m.half_edges()), -1);
  int next = 0;
  for (int h0 = 0; h0 < m.half_edges(); ++h0) {
    if (face[static_cast<std::size_t>(h0)] >= 0)
      continue;
    for (int h = h0; face[static_cast<std::size_t>(h)] < 0; h = m.rot[static_cast<std::size_t>(m.twin[static_cast<std::size_t>(h)])])
      face[static_cast<std::size_t>(h)] = next;
    ++next;
  }
  *count = next;
  return face;
}

/// Edge id per half-edge, numbered by the smaller half-edge.
inline std::vector<int> map_edges(const PlanarMap &m, int *count) {
  std::vector<int> edge(static_cast<std::size_t>(m.half_edges()), -1);
  int next = 0;
  for (int h = 0; h < m.half_edges(); ++h)
    if (edge[static_cast<std::size_t>(h)] < 0) {
      edge[static_cast<std::size_t>(h)] = next;
      edge[static_cast<std::size_t>(m.twin[static_cast<std::size_t>(h)])] = next;
      ++next;
    }
  *count = next;
  return edge;
}

/// Barycentric subdivision. New vertices: old vertices (same ids), then one
/// per edge midpoint, then one per face centre. Old half-edge h spawns six
/// half-edges 6h..6h+5: vertex-midpoint (A), vertex-corner centre (C) for the
/// corner between h and rot[h], and midpoint-centre (D) for the face on the
/// right of h.
struct Subdivision {
  PlanarMap map;
  int first_midpoint = 0, first_centre = 0;
  std::vector<int> edge_of, face_of;
};

inline Subdivision subdivide(const PlanarMap &m) {
  Subdivision s;
  int ne = 0, nf = 0;
  s.edge_of = map_edges(m, &ne);
  s.face_of = map_faces(m, &nf);
  s.first_midpoint = m.vertices;
  s.first_centre = m.vertices + ne;
  const int H = m.half_edges();
  std::vector<int> rot_inv(static_cast<std::size_t>(H));
  for (int h = 0; h < H; ++h)
    rot_inv[static_cast<std::size_t>(m.rot[static_cast<std::size_t>(h)])] = h;

  auto &out = s.map;
  out.vertices = m.vertices + ne + nf;
  out.vert.resize(static_cast<std::size_t>(6 * H));
  out.twin.resize(static_cast<std::size_t>(6 * H));
  out.rot.resize(static_cast<std::size_t>(6 * H));
  const auto at = [](int h, int k) { return static_cast<std::size_t>(6 * h + k); };
  enum { Av, Am, Cv, Cc, Dm, Dc };
  for (int h = 0; h < H; ++h) {
    const auto hs = static_cast<std::size_t>(h);
    const int t = m.twin[hs], r = m.rot[hs];
    const int mid = s.first_midpoint + s.edge_of[hs];
    out.vert[at(h, Av)] = m.vert[hs];
    out.vert[at(h, Am)] = mid;
    out.vert[at(h, Cv)] = m.vert[hs];
    out.vert[at(h, Cc)] = s.first_centre + s.face_of[static_cast<std::size_t>(r)];
    out.vert[at(h, Dm)] = mid;
    out.vert[at(h, Dc)] = s.first_centre + s.face_of[hs];
    for (int k : {Av, Cv, Dm}) {
      out.twin[at(h, k)] = 6 * h + k + 1;
      out.twin[at(h, k + 1)] = 6 * h + k;
    }
    // Around an old vertex: A_h, C_h, A_rot(h), ...
    out.rot[at(h, Av)] = 6 * h + Cv;
    out.rot[at(h, Cv)] = 6 * r + Av;
    // Around a midpoint: towards the far end, its left face, the near end,
    // its right face.
    out.rot[at(h, Am)] = 6 * h + Dm;
    out.rot[at(h, Dm)] = 6 * t + Am;
    // Around a centre: the face walk runs clockwise, so step backwards.
    out.rot[at(h, Dc)] = 6 * rot_inv[hs] + Cc;
    out.rot[at(h, Cc)] = 6 * t + Dc;
  }
  return s;
}

/// Convex-combination placement: the neighbours of `removed` go on the unit
/// circle in clockwise order, every other vertex sits at the average of its
/// neighbours.
inline std::vector<Point> tutte_positions(const PlanarMap &m, int removed) {
  const auto nv = static_cast<std::size_t>(m.vertices);
  std::vector<Point> pos(nv);
  std::vector<int> ring;
  int h0 = -1;
  for (int h = 0; h < m.half_edges() && h0 < 0; ++h)
    if (m.vert[static_cast<std::size_t>(h)] == removed)
      h0 = h;
  std::vector<std::uint8_t> fixed(nv, 0);
  fixed[static_cast<std::size_t>(removed)] = 1;
  for (int h = h0;;) {
    ring.push_back(m.vert[static_cast<std::size_t>(m.twin[static_cast<std::size_t>(h)])]);
    h = m.rot[static_cast<std::size_t>(h)];
    if (h == h0)
      break;
  }
  for (std::size_t k = 0; k < ring.size(); ++k) {
    double a = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(ring.size());
    pos[static_cast<std::size_t>(ring[k])] = {std::cos(a), std::sin(a)};
    fixed[static_cast<std::size_t>(ring[k])] = 1;
  }
  std::vector<int> index(nv, -1);
  int unknowns = 0;
  for (std::size_t v = 0; v < nv; ++v)
    if (!fixed[v])
      index[v] = unknowns++;
  if (unknowns == 0)
    return pos;

  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd bx = Eigen::VectorXd::Zero(unknowns), by = Eigen::VectorXd::Zero(unknowns);
  for (int h = 0; h < m.half_edges(); ++h) {
    const auto v = static_cast<std::size_t>(m.vert[static_cast<std::size_t>(h)]);
    const auto w = static_cast<std::size_t>(m.vert[static_cast<std::size_t>(m.twin[static_cast<std::size_t>(h)])]);
    const int iv = index[v];
    if (iv < 0)
      continue;
    trips.emplace_back(iv, iv, 1.0);
    if (index[w] >= 0) {
      trips.emplace_back(iv, index[w], -1.0);
    } else {
      bx[iv] += pos[w].x;
      by[iv] += pos[w].y;
    }
  }
  Eigen::SparseMatrix<double> L(unknowns, unknowns);
  L.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(L);
  Eigen::VectorXd x = solver.solve(bx), y = solver.solve(by);
  for (std::size_t v = 0; v < nv; ++v)
    if (index[v] >= 0)
      pos[v] = {x[index[v]], y[index[v]]};
  return pos;
}

/// Canonical ordering of a simple triangulation with outer face (v1, v2, vn),
/// found by peeling chord-free outer vertices off from vn downwards.
inline std::vector<int> canonical_order(const PlanarMap &m, int v1, int v2, int vn) {
  const auto n = static_cast<std::size_t>(m.vertices);
  std::vector<std::vector<int>> nb(n);
  std::vector<int> first(n, -1);
  for (int h = 0; h < m.half_edges(); ++h)
    if (first[static_cast<std::size_t>(m.vert[static_cast<std::size_t>(h)])] < 0)
      first[static_cast<std::size_t>(m.vert[static_cast<std::size_t>(h)])] = h;
  for (std::size_t v = 0; v < n; ++v)
    for (int h = first[v];;) {
      nb[v].push_back(m.vert[static_cast<std::size_t>(m.twin[static_cast<std::size_t>(h)])]);
      h = m.rot[static_cast<std::size_t>(h)];
      if (h == first[v])
        break;
    }

  std::vector<std::uint8_t> removed(n, 0), outer(n, 0);
  std::vector<int> nxt(n, -1), prv(n, -1);
  const auto link = [&](int a, int b) {
    nxt[static_cast<std::size_t>(a)] = b;
    prv[static_cast<std::size_t>(b)] = a;
  };
  link(v1, v2);
  link(v2, vn);
  link(vn, v1);
  for (int v : {v1, v2, vn})
    outer[static_cast<std::size_t>(v)] = 1;

  std::vector<int> peeled;
  for (std::size_t remaining = n; remaining > 2; --remaining) {
    int pick = -1;
    for (std::size_t v = 0; v < n && pick < 0; ++v) {
      if (!outer[v] || static_cast<int>(v) == v1 || static_cast<int>(v) == v2)
        continue;
      int outer_nbrs = 0;
      for (int w : nb[v])
        outer_nbrs += outer[static_cast<std::size_t>(w)];
      if (outer_nbrs == 2)
        pick = static_cast<int>(v);
    }
    if (pick < 0)
      throw std::logic_error("canonical_order: no removable vertex");
    const auto pv = static_cast<std::size_t>(pick);
    const int a = prv[pv], b = nxt[pv];
    std::vector<int> live;
    for (int w : nb[pv])
      if (!removed[static_cast<std::size_t>(w)])
        live.push_back(w);
    const auto ia = static_cast<std::size_t>(std::find(live.begin(), live.end(), a) - live.begin());
    const auto ib = static_cast<std::size_t>(std::find(live.begin(), live.end(), b) - live.begin());
    std::vector<int> ab, ba;
    for (std::size_t i = (ia + 1) % live.size(); i != ib; i = (i + 1) % live.size())
      ab.push_back(live[i]);
    for (std::size_t i = (ib + 1) % live.size(); i != ia; i = (i + 1) % live.size())
      ba.push_back(live[i]);
    std::vector<int> path = ab;
    if (path.empty())
      path.assign(ba.rbegin(), ba.rend());
    removed[pv] = 1;
    outer[pv] = 0;
    int prev = a;
    for (int w : path) {
      outer[static_cast<std::size_t>(w)] = 1;
      link(prev, w);
      prev = w;
    }
    link(prev, b);
    peeled.push_back(pick);
  }
  std::vector<int> order{v1, v2};
  order.insert(order.end(), peeled.rbegin(), peeled.rend());
  return order;
}

/// Shift-method grid drawing (de Fraysseix, Pach, Pollack) of a simple
/// triangulation with `apex` on the outer face, scaled into the unit disk.
/// Slower to read than the Tutte drawing but its resolution only shrinks
/// polynomially with size.
inline std::vector<Point> grid_positions(const PlanarMap &m, int apex) {
  int h0 = -1;
  for (int h = 0; h < m.half_edges() && h0 < 0; ++h)
    if (m.vert[static_cast<std::size_t>(h)] == apex)
      h0 = h;
  const int h1 = m.rot[static_cast<std::size_t>(m.twin[static_cast<std::size_t>(h0)])];
  const int v1 = m.vert[static_cast<std::size_t>(h1)];
  const int v2 = m.vert[static_cast<std::size_t>(m.twin[static_cast<std::size_t>(h1)])];
  auto order = canonical_order(m, v1, v2, apex);

  const auto n = static_cast<std::size_t>(m.vertices);
  std::vector<long> x(n, 0), y(n, 0);
  std::vector<std::vector<int>> deps(n);
  std::vector<std::size_t> mark(n, 0);
  std::vector<std::vector<int>> nb(n);
  for (int h = 0; h < m.half_edges(); ++h)
    nb[static_cast<std::size_t>(m.vert[static_cast<std::size_t>(h)])].push_back(
        m.vert[static_cast<std::size_t>(m.twin[static_cast<std::size_t>(h)])]);

  const auto o = [&](std::size_t k) { return static_cast<std::size_t>(order[k]); };
  x[o(1)] = 2;
  x[o(2)] = 1;
  y[o(2)] = 1;
  for (std::size_t k = 0; k < 3; ++k)
    deps[o(k)] = {order[k]};
  std::vector<int> contour{order[0], order[2], order[1]};
  for (std::size_t k = 3; k < n; ++k) {
    const auto v = o(k);
    for (int w : nb[v])
      mark[static_cast<std::size_t>(w)] = k;
    std::size_t p = contour.size(), q = 0;
    for (std::size_t i = 0; i < contour.size(); ++i)
      if (mark[static_cast<std::size_t>(contour[i])] == k) {
        p = std::min(p, i);
        q = std::max(q, i);
      }
    for (std::size_t i = p + 1; i < contour.size(); ++i)
      for (int w : deps[static_cast<std::size_t>(contour[i])])
        x[static_cast<std::size_t>(w)] += i < q ? 1 : 2;
    const auto wp = static_cast<std::size_t>(contour[p]), wq = static_cast<std::size_t>(contour[q]);
    x[v] = (x[wp] - y[wp] + x[wq] + y[wq]) / 2;
    y[v] = (-x[wp] + y[wp] + x[wq] + y[wq]) / 2;
    deps[v] = {order[k]};
    for (std::size_t i = p + 1; i < q; ++i) {
      const auto &d = deps[static_cast<std::size_t>(contour[i])];
      deps[v].insert(deps[v].end(), d.begin(), d.end());
    }
    std::vector<int> next(contour.begin(), contour.begin() + static_cast<long>(p) + 1);
    next.push_back(order[k]);
    next.insert(next.end(), contour.begin() + static_cast<long>(q), contour.end());
    contour = std::move(next);
  }

  const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  const double cx = 0.5 * static_cast<double>(*xmin + *xmax), cy = 0.5 * static_cast<double>(*ymin + *ymax);
  double r = 0;
  for (std::size_t v = 0; v < n; ++v)
    r = std::max(r, std::hypot(static_cast<double>(x[v]) - cx, static_cast<double>(y[v]) - cy));
  std::vector<Point> pos(n);
  for (std::size_t v = 0; v < n; ++v)
    pos[v] = {(static_cast<double>(x[v]) - cx) / r, (static_cast<double>(y[v]) - cy) / r};
  return pos;
}

inline double cross(Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

inline double point_segment(Point p, Point a, Point b, Point *closest) {
  double dx = b.x - a.x, dy = b.y - a.y;
  double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0) : 0.0;
  *closest = {a.x + t * dx, a.y + t * dy};
  return std::hypot(p.x - closest->x, p.y - closest->y);
}

/// Distance between segments ab and cd, with a point where it is attained.
inline double segment_distance(Point a, Point b, Point c, Point d, Point *where) {
  double d1 = cross(a, b, c), d2 = cross(a, b, d), d3 = cross(c, d, a), d4 = cross(c, d, b);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    double t = d3 / (d3 - d4);
    *where = {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    return 0;
  }
  double best = 1e300;
  Point q;
  for (auto [p, s, e] : {std::array{a, c, d}, std::array{b, c, d}, std::array{c, a, b}, std::array{d, a, b}}) {
    double dist = point_segment(p, s, e, &q);
    if (dist < best) {
      best = dist;
      *where = p;
    }
  }
  return best;
}

/// A route as sampled for the separation check: `samples` points evenly
/// spaced by arc length plus every corner, and the crossings at its ends.
struct Chain {
  int label = 0; // 0 for a free loop
  std::vector<Point> pts;
  std::vector<Point> ends;
  Point lo, hi;
};

inline Chain sample_chain(int label, const std::vector<Point> &poly, std::vector<Point> ends, int samples, double tol) {
  std::vector<double> acc{0};
  for (std::size_t i = 1; i < poly.size(); ++i)
    acc.push_back(acc.back() + std::hypot(poly[i].x - poly[i - 1].x, poly[i].y - poly[i - 1].y));
  std::vector<std::pair<double, Point>> pts;
  for (std::size_t i = 0; i < poly.size(); ++i)
    pts.emplace_back(acc[i], poly[i]);
  std::size_t seg = 1;
  for (int k = 1; k + 1 < samples; ++k) {
    double s = acc.back() * k / (samples - 1);
    while (seg + 1 < poly.size() && acc[seg] < s)
      ++seg;
    double len = acc[seg] - acc[seg - 1];
    double t = len > 0 ? std::clamp((s - acc[seg - 1]) / len, 0.0, 1.0) : 0.0;
    pts.emplace_back(s, Point{poly[seg - 1].x + t * (poly[seg].x - poly[seg - 1].x),
                              poly[seg - 1].y + t * (poly[seg].y - poly[seg - 1].y)});
  }
  std::stable_sort(pts.begin(), pts.end(), [](const auto &x, const auto &y) { return x.first < y.first; });
  Chain ch{label, {}, std::move(ends), poly.front(), poly.front()};
  for (const auto &[s, p] : pts) {
    if (!ch.pts.empty() && std::hypot(p.x - ch.pts.back().x, p.y - ch.pts.back().y) <= tol)
      continue;
    ch.pts.push_back(p);
    ch.lo = {std::min(ch.lo.x, p.x), std::min(ch.lo.y, p.y)};
    ch.hi = {std::max(ch.hi.x, p.x), std::max(ch.hi.y, p.y)};
  }
  if (ch.pts.size() == 1)
    ch.pts.push_back(poly.back());
  return ch;
}

struct Near {
  std::size_t a, b;
  Point where;
};

/// Pairs of chains closer than `tol` anywhere other than at a crossing both
/// of them end on.
inline std::vector<Near> close_approaches(const std::vector<Chain> &chains, double tol) {
  std::vector<Near> out;
  const auto at_shared_end = [&](const Chain &a, const Chain &b, Point p) {
    for (auto x : a.ends)
      for (auto y : b.ends)
        if (x == y && std::hypot(p.x - x.x, p.y - x.y) <= tol)
          return true;
    return false;
  };
  for (std::size_t i = 0; i < chains.size(); ++i)
    for (std::size_t j = i; j < chains.size(); ++j) {
      const auto &A = chains[i], &B = chains[j];
      if (A.lo.x > B.hi.x + tol || B.lo.x > A.hi.x + tol || A.lo.y > B.hi.y + tol || B.lo.y > A.hi.y + tol)
        continue;
      const bool closed = A.label == 0;
      for (std::size_t s = 0; s + 1 < A.pts.size(); ++s)
        for (std::size_t t = (i == j ? s + 2 : 0); t + 1 < B.pts.size(); ++t) {
          if (i == j && closed && s == 0 && t + 2 == B.pts.size())
            continue; // a circle closes on itself
          Point where;
          if (segment_distance(A.pts[s], A.pts[s + 1], B.pts[t], B.pts[t + 1], &where) >= tol)
            continue;
          if (!at_shared_end(A, B, where))
            out.push_back({i, j, where});
        }
    }
  return out;
}

/// Unit-disk drawing of one connected piece. Fills crossing positions and
/// routes keyed by edge index. The Tutte drawing is used unless it puts two
/// routes closer than `tol`; then the grid drawing replaces it.
inline void layout_piece(const Skeleton &sk, const std::vector<int> &members, std::optional<int> outer_face,
                         double tol, std::map<int, Point> &crossing_pos, std::map<int, std::vector<Point>> &routes) {
  std::vector<int> local(static_cast<std::size_t>(sk.n), -1);
  for (std::size_t i = 0; i < members.size(); ++i)
    local[static_cast<std::size_t>(members[i])] = static_cast<int>(i);
  PlanarMap m0;
  m0.vertices = static_cast<int>(members.size());
  const int H = 4 * m0.vertices;
  m0.vert.resize(static_cast<std::size_t>(H));
  m0.twin.resize(static_cast<std::size_t>(H));
  m0.rot.resize(static_cast<std::size_t>(H));
  for (std::size_t i = 0; i < members.size(); ++i)
    for (int s = 0; s < 4; ++s) {
      const auto h = 4 * i + static_cast<std::size_t>(s);
      int mate = sk.mate(dart(members[i], s));
      m0.vert[h] = static_cast<int>(i);
      m0.twin[h] = 4 * local[static_cast<std::size_t>(mate / 4)] + mate % 4;
      m0.rot[h] = static_cast<int>(4 * i) + (s + 1) % 4;
    }

  // Twice subdivided, the map is a simple triangulation, which is what both
  // drawing methods need.
  auto s1 = subdivide(m0);
  auto s2 = subdivide(s1.map);

  int nf = 0;
  auto face = map_faces(m0, &nf);
  std::vector<int> size(static_cast<std::size_t>(nf), 0);
  for (int f : face)
    ++size[static_cast<std::size_t>(f)];
  int outer = outer_face.value_or(-1);
  if (outer < 0 || outer >= nf)
    outer = static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());
  const int apex = s1.first_centre + outer;

  std::map<int, std::vector<Point>> mine;
  const auto build = [&](const std::vector<Point> &pos) {
    mine.clear();
    const auto P = [&](int v) { return pos[static_cast<std::size_t>(v)]; };
    for (int e = 0; e < sk.edge_count(); ++e) {
      const int td = sk.tail[static_cast<std::size_t>(e)];
      const int li = local[static_cast<std::size_t>(td / 4)];
      if (li < 0)
        continue;
      // tail, middle of its half-edge, edge midpoint, middle of the other
      // half-edge, head
      const int h = 4 * li + td % 4, t = m0.twin[static_cast<std::size_t>(h)];
      mine[e] = {P(m0.vert[static_cast<std::size_t>(h)]), P(s2.first_midpoint + s2.edge_of[static_cast<std::size_t>(6 * h)]),
                 P(s1.first_midpoint + s1.edge_of[static_cast<std::size_t>(h)]),
                 P(s2.first_midpoint + s2.edge_of[static_cast<std::size_t>(6 * t)]), P(m0.vert[static_cast<std::size_t>(t)])};
    }
  };
  const auto crowded = [&](const std::vector<Point> &pos) {
    std::vector<Chain> chains;
    for (const auto &[e, r] : mine)
      chains.push_back(sample_chain(e + 1, r,
                                    {pos[static_cast<std::size_t>(local[static_cast<std::size_t>(sk.tail[static_cast<std::size_t>(e)] / 4)])],
                                     pos[static_cast<std::size_t>(local[static_cast<std::size_t>(sk.head[static_cast<std::size_t>(e)] / 4)])]},
                                    64, tol));
    return !close_approaches(chains, tol).empty();
  };

  auto pos = tutte_positions(s2.map, apex);
  build(pos);
  if (crowded(pos)) {
    pos = grid_positions(s2.map, apex);
    build(pos);
  }

  // Slots run counterclockwise exactly when the counterclockwise gaps
  // between successive slot directions add up to one full turn.
  const auto dir_of = [&](int c, int slot) {
    int d = dart(c, slot);
    int e = sk.edge_at(d);
    const auto &r = mine[e];
    return sk.tail[static_cast<std::size_t>(e)] == d ? r[1] : r[r.size() - 2];
  };
  const int c0 = members.front();
  const Point centre = pos[static_cast<std::size_t>(local[static_cast<std::size_t>(c0)])];
  double turn = 0;
  for (int s = 0; s < 4; ++s) {
    Point a = dir_of(c0, s), b = dir_of(c0, (s + 1) % 4);
    double gap = std::atan2(b.y - centre.y, b.x - centre.x) - std::atan2(a.y - centre.y, a.x - centre.x);
    while (gap <= 0)
      gap += 2 * std::numbers::pi;
    turn += gap;
  }
  const bool flip = turn > 3 * std::numbers::pi;
  for (auto &[e, r] : mine) {
    if (flip)
      for (auto &p : r)
        p.x = -p.x;
    routes[e] = r;
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    Point p = pos[i];
    if (flip)
      p.x = -p.x;
    crossing_pos[members[i]] = p;
  }
}

inline constexpr double kPiecePitch = 2.5;

inline double separation_tolerance(Point lo, Point hi) { return 1e-6 * std::hypot(hi.x - lo.x, hi.y - lo.y); }

} // namespace detail

/// Straight-line planar drawing from the rotation system. The diagram map is
/// subdivided twice and drawn by a Tutte embedding with the centre of the
/// outer face (the largest by default) pushed to infinity. Pieces sit side
/// by side; free loops are unit circles to their right.
inline Layout compute_layout(const Diagram &d, std::optional<int> outer_face = std::nullopt) {
  auto sk = detail::make_skeleton(d);
  int npieces = 0;
  auto piece = detail::pieces_of(sk, &npieces);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(npieces));
  for (int c = 0; c < sk.n; ++c)
    members[static_cast<std::size_t>(piece[static_cast<std::size_t>(c)])].push_back(c);

  // Every piece fits in a unit disk, so this box bounds the final drawing and
  // its tolerance is at least as strict as the one checked afterwards.
  const int slots = npieces + d.free_loops();
  const double tol =
      detail::separation_tolerance({-1, -1}, {1 + detail::kPiecePitch * std::max(0, slots - 1), 1});

  Layout out;
  out.position_of_crossing.resize(static_cast<std::size_t>(sk.n));
  double x = 0;
  for (const auto &mem : members) {
    std::map<int, Point> cpos;
    std::map<int, std::vector<Point>> routes;
    detail::layout_piece(sk, mem, npieces == 1 ? outer_face : std::nullopt, tol, cpos, routes);
    for (auto &[c, p] : cpos)
      out.position_of_crossing[static_cast<std::size_t>(c)] = {p.x + x, p.y};
    for (auto &[e, r] : routes) {
      for (auto &p : r)
        p.x += x;
      out.edge_routes[sk.labels[static_cast<std::size_t>(e)]] = std::move(r);
    }
    x += detail::kPiecePitch;
  }
  for (int i = 0; i < d.free_loops(); ++i, x += detail::kPiecePitch)
    out.loops.push_back({{x, 0}, 1.0});

  bool first = true;
  const auto grow = [&](Point p) {
    if (first) {
      out.min = out.max = p;
      first = false;
    }
    out.min = {std::min(out.min.x, p.x), std::min(out.min.y, p.y)};
    out.max = {std::max(out.max.x, p.x), std::max(out.max.y, p.y)};
  };
  for (const auto &[label, r] : out.edge_routes)
    for (auto p : r)
      grow(p);
  for (const auto &c : out.loops) {
    grow({c.center.x - c.radius, c.center.y - c.radius});
    grow({c.center.x + c.radius, c.center.y + c.radius});
  }
  return out;
}

/// A place where two routes come closer than the tolerance away from a
/// crossing they share.
struct LayoutDefect {
  int edge_a = 0, edge_b = 0; // labels; 0 for a free loop
  Point where;
};

/// Geometric self-check: routes sampled at `samples` points each must stay
/// at least 1e-6 of the bounding-box diagonal apart except where they meet
/// at a shared crossing.
inline std::vector<LayoutDefect> layout_defects(const Diagram &d, const Layout &l, int samples = 64) {
  auto sk = detail::make_skeleton(d);
  const double tol = detail::separation_tolerance(l.min, l.max);
  std::vector<detail::Chain> chains;
  for (int e = 0; e < sk.edge_count(); ++e) {
    const int label = sk.labels[static_cast<std::size_t>(e)];
    auto it = l.edge_routes.find(label);
    if (it == l.edge_routes.end() || it->second.size() < 2)
      continue;
    const auto at = [&](int dart) { return l.position_of_crossing.at(static_cast<std::size_t>(dart / 4)); };
    chains.push_back(detail::sample_chain(label, it->second,
                                          {at(sk.tail[static_cast<std::size_t>(e)]), at(sk.head[static_cast<std::size_t>(e)])},
                                          samples, tol));
  }
  for (const auto &c : l.loops) {
    std::vector<Point> circle;
    for (int k = 0; k <= samples; ++k) {
      double a = 2 * std::numbers::pi * k / samples;
      circle.push_back({c.center.x + c.radius * std::cos(a), c.center.y + c.radius * std::sin(a)});
    }
    auto ch = detail::sample_chain(0, circle, {}, 2, tol);
    chains.push_back(std::move(ch));
  }
  std::vector<LayoutDefect> out;
  for (const auto &n : detail::close_approaches(chains, tol))
    out.push_back({chains[n.a].label, chains[n.b].label, n.where});
  return out;
}

} // namespace knotlab
