#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "knotlab/catalog.hpp"
#include "knotlab/diagram.hpp"
#include "knotlab/errors.hpp"
#include "knotlab/invariants.hpp"
#include "knotlab/layout.hpp"

namespace knotlab {

/// Catalog diagrams get their preset drawing; anything else is laid out
/// from its rotation system.
inline Layout layout_diagram(const Diagram &d) {
  for (const auto &e : catalog())
    if (e.diagram == d && e.preset_layout)
      return *e.preset_layout;
  return compute_layout(d);
}

struct SvgOptions {
  double gap_width = 0.12; // layout units
  bool labels = false;
  std::optional<Coloring> coloring;
};

inline constexpr std::array<const char *, 3> kArcPalette{"#d62728", "#1f77b4", "#2ca02c"};
inline constexpr const char *kInk = "#222222";

namespace detail {

inline constexpr double kSvgScale = 100.0;
inline constexpr double kSvgMargin = 20.0;

inline std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000")
    s = "0.000";
  return s;
}

inline double poly_length(const std::vector<Point> &p) {
  double len = 0;
  for (std::size_t i = 1; i < p.size(); ++i)
    len += std::hypot(p[i].x - p[i - 1].x, p[i].y - p[i - 1].y);
  return len;
}

/// Drops `cut` of length from the front of a polyline.
inline std::vector<Point> trim_front(const std::vector<Point> &p, double cut) {
  for (std::size_t i = 1; i < p.size(); ++i) {
    double seg = std::hypot(p[i].x - p[i - 1].x, p[i].y - p[i - 1].y);
    if (cut < seg) {
      double t = cut / seg;
      std::vector<Point> out{{p[i - 1].x + t * (p[i].x - p[i - 1].x), p[i - 1].y + t * (p[i].y - p[i - 1].y)}};
      out.insert(out.end(), p.begin() + static_cast<long>(i), p.end());
      return out;
    }
    cut -= seg;
  }
  return {p.back(), p.back()};
}

inline std::vector<Point> trim_back(std::vector<Point> p, double cut) {
  std::reverse(p.begin(), p.end());
  p = trim_front(p, cut);
  std::reverse(p.begin(), p.end());
  return p;
}

inline void check_layout(const Skeleton &sk, const Layout &l) {
  const auto fail = [](const std::string &why) { throw BadRequest("inconsistent layout: " + why); };
  if (static_cast<int>(l.position_of_crossing.size()) != sk.n)
    fail("expected " + std::to_string(sk.n) + " crossing positions");
  if (static_cast<int>(l.loops.size()) != sk.free_loops)
    fail("expected " + std::to_string(sk.free_loops) + " free loop circles");
  const double tol = 1e-9 * (1 + std::hypot(l.max.x - l.min.x, l.max.y - l.min.y));
  for (int e = 0; e < sk.edge_count(); ++e) {
    const int label = sk.labels[static_cast<std::size_t>(e)];
    auto it = l.edge_routes.find(label);
    if (it == l.edge_routes.end() || it->second.size() < 2)
      fail("no route for edge " + std::to_string(label));
    const auto &r = it->second;
    const Point a = l.position_of_crossing[static_cast<std::size_t>(sk.tail[static_cast<std::size_t>(e)] / 4)];
    const Point b = l.position_of_crossing[static_cast<std::size_t>(sk.head[static_cast<std::size_t>(e)] / 4)];
    if (std::hypot(r.front().x - a.x, r.front().y - a.y) > tol || std::hypot(r.back().x - b.x, r.back().y - b.y) > tol)
      fail("route of edge " + std::to_string(label) + " does not meet its crossings");
  }
  if (l.edge_routes.size() != static_cast<std::size_t>(sk.edge_count()))
    fail("routes for edges the diagram does not have");
}

} // namespace detail

/// Standalone SVG: one path per arc, broken by a gap at each under-passage,
/// plus one invisible `gap` marker per crossing spanning the break.
inline std::string to_svg(const Diagram &d, const Layout &l, const SvgOptions &opts = {}) {
  using detail::num;
  auto sk = detail::make_skeleton(d);
  detail::check_layout(sk, l);
  int edge_arcs = 0;
  auto arc = detail::arc_ids(sk, &edge_arcs);
  const int arcs = edge_arcs + d.free_loops();
  if (opts.coloring) {
    const auto &c = opts.coloring->color_of_arc;
    if (static_cast<int>(c.size()) != arcs)
      throw BadRequest("coloring has " + std::to_string(c.size()) + " entries, diagram has " + std::to_string(arcs) +
                       " arcs");
    for (int v : c)
      if (v < 0 || v > 2)
        throw BadRequest("colors must be 0, 1 or 2");
  }
  const auto stroke = [&](int a) {
    return opts.coloring ? kArcPalette[static_cast<std::size_t>(opts.coloring->color_of_arc[static_cast<std::size_t>(a)])]
                         : kInk;
  };
  const double S = detail::kSvgScale, M = detail::kSvgMargin;
  const auto P = [&](Point p) { return num(p.x * S) + "," + num(p.y * S); };
  const auto route = [&](int e) -> const std::vector<Point> & {
    return l.edge_routes.at(sk.labels[static_cast<std::size_t>(e)]);
  };
  const double half_gap = opts.gap_width / 2;

  std::string out;
  const double vx = l.min.x * S - M, vy = l.min.y * S - M;
  const double vw = (l.max.x - l.min.x) * S + 2 * M, vh = (l.max.y - l.min.y) * S + 2 * M;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(vx) + " " + num(vy) + " " + num(vw) + " " +
         num(vh) + "\" width=\"" + num(vw) + "\" height=\"" + num(vh) + "\">\n";
  out += "<g class=\"arcs\" fill=\"none\" stroke-width=\"4\" stroke-linecap=\"round\" stroke-linejoin=\"round\">\n";
  for (int a = 0; a < edge_arcs; ++a) {
    int start = -1;
    for (int e = 0; e < sk.edge_count() && start < 0; ++e)
      if (arc[static_cast<std::size_t>(e)] == a && sk.tail[static_cast<std::size_t>(e)] % 4 == 2)
        start = e;
    const bool closed = start < 0;
    if (closed)
      for (int e = 0; e < sk.edge_count() && start < 0; ++e)
        if (arc[static_cast<std::size_t>(e)] == a)
          start = e;
    std::vector<Point> poly;
    int e = start;
    while (true) {
      const auto &r = route(e);
      poly.insert(poly.end(), poly.empty() ? r.begin() : r.begin() + 1, r.end());
      if (sk.head[static_cast<std::size_t>(e)] % 4 == 0)
        break;
      e = sk.next_edge(e);
      if (e == start)
        break;
    }
    if (!closed) {
      const double cut = std::min(half_gap, 0.4 * detail::poly_length(poly));
      poly = detail::trim_back(detail::trim_front(poly, cut), cut);
    }
    std::string path = "M" + P(poly.front());
    for (std::size_t i = 1; i < poly.size(); ++i)
      path += " L" + P(poly[i]);
    if (closed)
      path += " Z";
    out += "<path class=\"arc\" data-arc=\"" + std::to_string(a) + "\" stroke=\"" + stroke(a) + "\" d=\"" + path +
           "\"/>\n";
  }
  for (int i = 0; i < d.free_loops(); ++i) {
    const auto &c = l.loops[static_cast<std::size_t>(i)];
    const std::string r = num(c.radius * S);
    const std::string right = P({c.center.x + c.radius, c.center.y}), left = P({c.center.x - c.radius, c.center.y});
    out += "<path class=\"arc\" data-arc=\"" + std::to_string(edge_arcs + i) + "\" stroke=\"" + stroke(edge_arcs + i) +
           "\" d=\"M" + right + " A" + r + "," + r + " 0 1 0 " + left + " A" + r + "," + r + " 0 1 0 " + right +
           " Z\"/>\n";
  }
  out += "</g>\n<g class=\"gaps\">\n";
  for (int c = 0; c < sk.n; ++c) {
    const auto &in = route(sk.slot_edge[static_cast<std::size_t>(c)][0]);
    const auto &outr = route(sk.slot_edge[static_cast<std::size_t>(c)][2]);
    Point a = detail::trim_back(in, std::min(half_gap, 0.4 * detail::poly_length(in))).back();
    Point b = detail::trim_front(outr, std::min(half_gap, 0.4 * detail::poly_length(outr))).front();
    out += "<line class=\"gap\" data-crossing=\"" + std::to_string(c) + "\" x1=\"" + num(a.x * S) + "\" y1=\"" +
           num(a.y * S) + "\" x2=\"" + num(b.x * S) + "\" y2=\"" + num(b.y * S) + "\" stroke=\"none\"/>\n";
  }
  out += "</g>\n";
  if (opts.labels) {
    out += "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#555555\">\n";
    for (const auto &[label, r] : l.edge_routes) {
      const Point m = r[r.size() / 2];
      out += "<text x=\"" + num(m.x * S) + "\" y=\"" + num(m.y * S) + "\">" + std::to_string(label) + "</text>\n";
    }
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

} // namespace knotlab
