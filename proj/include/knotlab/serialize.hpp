#pragma once

// JSON forms of every payload that crosses the service or lands in a file.
// Each type has an ADL to_json/from_json pair so nlohmann's get<T>() works.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "knotlab/activities.hpp"
#include "knotlab/diagram.hpp"
#include "knotlab/equivalence.hpp"
#include "knotlab/errors.hpp"
#include "knotlab/invariants.hpp"
#include "knotlab/laurent.hpp"
#include "knotlab/layout.hpp"
#include "knotlab/moves.hpp"

namespace knotlab {

using json = nlohmann::json;

namespace detail {

inline const json &field(const json &j, const char *key) {
  if (!j.is_object())
    throw BadRequest(std::string("expected an object with field '") + key + "'");
  auto it = j.find(key);
  if (it == j.end())
    throw BadRequest(std::string("missing field '") + key + "'", key);
  return *it;
}

template <class T> T field_as(const json &j, const char *key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception &e) {
    throw BadRequest(std::string("field '") + key + "' has the wrong type: " + e.what(), key);
  }
}

inline Side side_from(const std::string &s) {
  if (s == "left")
    return Side::left;
  if (s == "right")
    return Side::right;
  throw BadRequest("side must be \"left\" or \"right\", got \"" + s + "\"");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Diagrams

inline void to_json(json &j, const Diagram &d) {
  json quads = json::array();
  for (const auto &q : d.quads())
    quads.push_back(q);
  j = json{{"pd", emit_pd(d)}, {"crossings", quads}, {"free_loops", d.free_loops()}};
}

/// Accepts PD text, {"pd": text}, or {"crossings": [[a,b,c,d],...],
/// "free_loops": n}. The result is validated either way.
inline void from_json(const json &j, Diagram &d) {
  if (j.is_string()) {
    d = parse_pd(j.get<std::string>());
    return;
  }
  if (j.is_object() && j.contains("pd")) {
    d = parse_pd(detail::field_as<std::string>(j, "pd"));
    return;
  }
  auto quads = detail::field_as<std::vector<Quad>>(j, "crossings");
  int loops = j.contains("free_loops") ? detail::field_as<int>(j, "free_loops") : 0;
  if (loops < 0)
    throw BadRequest("free_loops must be non-negative");
  // Round trip through text so structured input gets the same checks as PD.
  d = parse_pd(emit_pd(Diagram::from_quads(quads, loops)));
}

// ---------------------------------------------------------------------------
// Move sites

inline void to_json(json &j, const MoveSite &s) { j = json::parse(s.id()); }

inline void from_json(const json &j, MoveSite &s) {
  s = MoveSite{};
  const auto kind = detail::field_as<std::string>(j, "kind");
  const auto dir = detail::field_as<std::string>(j, "direction");
  if (kind == "R1")
    s.kind = MoveKind::R1;
  else if (kind == "R2")
    s.kind = MoveKind::R2;
  else if (kind == "R3")
    s.kind = MoveKind::R3;
  else
    throw BadRequest("unknown move kind \"" + kind + "\"");
  if (dir == "reduce")
    s.direction = MoveDirection::reduce;
  else if (dir == "grow")
    s.direction = MoveDirection::grow;
  else if (dir == "slide")
    s.direction = MoveDirection::slide;
  else
    throw BadRequest("unknown move direction \"" + dir + "\"");
  if ((s.kind == MoveKind::R3) != (s.direction == MoveDirection::slide))
    throw BadRequest("R3 moves, and only R3 moves, have direction \"slide\"");
  s.locus = detail::field_as<std::vector<int>>(j, "locus");
  const json params = j.contains("params") ? j.at("params") : json::object();
  if (s.type() == kR1Grow) {
    s.sign = detail::field_as<int>(params, "sign");
    if (s.sign != 1 && s.sign != -1)
      throw BadRequest("R1 grow sign must be +1 or -1");
    s.side = detail::side_from(detail::field_as<std::string>(params, "side"));
  } else if (s.type() == kR2Grow && s.locus.size() < 2) {
    const auto fold = detail::field_as<std::string>(params, "fold");
    if (fold != "over" && fold != "under")
      throw BadRequest("R2 fold must be \"over\" or \"under\"");
    s.over = fold == "over" ? 0 : 1;
    s.side = detail::side_from(detail::field_as<std::string>(params, "side"));
  } else if (s.type() == kR2Grow) {
    if (s.locus.size() != 2)
      throw BadRequest("R2 grow needs a locus of one or two edges");
    const int over = detail::field_as<int>(params, "over");
    if (over == s.locus[0])
      s.over = 0;
    else if (over == s.locus[1])
      s.over = 1;
    else
      throw BadRequest("R2 grow \"over\" must be one of the locus edges");
    auto sides = detail::field_as<std::vector<std::string>>(params, "sides");
    if (sides.size() != 2)
      throw BadRequest("R2 grow needs two sides");
    s.sides = {detail::side_from(sides[0]), detail::side_from(sides[1])};
  }
}

// ---------------------------------------------------------------------------
// Polynomials
//
// Terms always travel as "exp_quarters". For t that is the exponent in
// quarter units; for A, whose exponents are whole, it is the A exponent.

inline void to_json(json &j, const LaurentPoly &p) {
  const bool t = p.variable() == Variable::t;
  json terms = json::array();
  for (auto [e, c] : p.terms())
    terms.push_back({{"exp_quarters", e}, {"coef", c}});
  j = json{{"var", t ? "t" : "A"}, {"terms", terms}, {"text", p.to_string()}};
}

inline void from_json(const json &j, LaurentPoly &p) {
  const auto var = detail::field_as<std::string>(j, "var");
  if (var != "A" && var != "t")
    throw BadRequest("polynomial variable must be \"A\" or \"t\"");
  const bool t = var == "t";
  p = LaurentPoly(t ? Variable::t : Variable::A);
  for (const auto &term : detail::field(j, "terms"))
    p.add_term(detail::field_as<int>(term, "exp_quarters"), detail::field_as<std::int64_t>(term, "coef"));
}

// ---------------------------------------------------------------------------
// Colorings and invariant results

/// Colorings travel as arrays with null for an uncolored arc.
inline void to_json(json &j, const Coloring &c) {
  j = json::array();
  for (int v : c.color_of_arc)
    j.push_back(v == kUncolored ? json(nullptr) : json(v));
}

inline void from_json(const json &j, Coloring &c) {
  if (!j.is_array())
    throw BadRequest("coloring must be an array of 0, 1, 2 or null");
  c.color_of_arc.clear();
  for (const auto &v : j) {
    if (v.is_null())
      c.color_of_arc.push_back(kUncolored);
    else if (v.is_number_integer())
      c.color_of_arc.push_back(v.get<int>());
    else
      throw BadRequest("coloring entries must be 0, 1, 2 or null");
  }
}

inline void to_json(json &j, const ColoringFeedback &f) {
  j = json{{"valid", f.valid},
           {"monochromatic", f.monochromatic},
           {"violations", f.violations},
           {"colors_used", f.colors_used}};
}

inline void to_json(json &j, const TricolorResult &r) {
  j = json{{"count", r.count}, {"dimension", r.dimension}, {"tricolorable", r.tricolorable}};
  j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
}

inline void to_json(json &j, const SignData &s) {
  j = json{{"sign_of_crossing", s.sign_of_crossing}, {"writhe", s.writhe}};
}

inline void to_json(json &j, const TraceResult &t) {
  json arcs = json::object(), orient = json::object(), comps = json::object();
  for (auto [label, a] : t.arcs.arc_of_edge)
    arcs[std::to_string(label)] = a;
  for (const auto &[label, e] : t.orientation)
    orient[std::to_string(label)] = {{"from", {e.from_crossing, e.from_slot}}, {"to", {e.to_crossing, e.to_slot}}};
  for (auto [label, c] : t.component_of_edge)
    comps[std::to_string(label)] = c;
  j = json{{"components", t.components},
           {"faces", t.faces},
           {"arcs", {{"arc_of_edge", arcs}, {"edge_arc_count", t.arcs.edge_arc_count}, {"arc_count", t.arcs.arc_count}}},
           {"orientation", orient},
           {"component_of_edge", comps}};
}

inline void to_json(json &j, const Finding &f) {
  j = json{{"code", f.code}, {"message", f.message}};
  j["label"] = f.label ? json(*f.label) : json(nullptr);
  j["crossing"] = f.crossing ? json(*f.crossing) : json(nullptr);
}

inline void to_json(json &j, const ValidationReport &r) { j = json{{"ok", r.ok()}, {"findings", r.findings}}; }

// ---------------------------------------------------------------------------
// Search results

inline void to_json(json &j, const SearchStats &s) {
  j = json{{"nodes_expanded", s.nodes_expanded}, {"max_crossings", s.max_crossings}};
}

inline void from_json(const json &j, SearchStats &s) {
  s.nodes_expanded = detail::field_as<long>(j, "nodes_expanded");
  s.max_crossings = detail::field_as<int>(j, "max_crossings");
}

inline void to_json(json &j, const Separation &s) {
  j = json{{"name", s.name}, {"value_a", s.value_a}, {"value_b", s.value_b}};
}

inline void from_json(const json &j, Separation &s) {
  s = {detail::field_as<std::string>(j, "name"), detail::field_as<std::string>(j, "value_a"),
       detail::field_as<std::string>(j, "value_b")};
}

inline void to_json(json &j, const Verdict &v) {
  j = json{{"outcome", to_string(v.outcome)}, {"path", v.path}, {"search_stats", v.stats}};
  j["separating_invariant"] = v.separating_invariant ? json(*v.separating_invariant) : json(nullptr);
}

inline void from_json(const json &j, Verdict &v) {
  const auto o = detail::field_as<std::string>(j, "outcome");
  if (o == "equivalent")
    v.outcome = Outcome::equivalent;
  else if (o == "distinguished")
    v.outcome = Outcome::distinguished;
  else if (o == "unknown")
    v.outcome = Outcome::unknown;
  else
    throw BadRequest("unknown outcome \"" + o + "\"");
  v.path = detail::field_as<std::vector<MoveSite>>(j, "path");
  v.stats = detail::field_as<SearchStats>(j, "search_stats");
  const auto &sep = detail::field(j, "separating_invariant");
  v.separating_invariant = sep.is_null() ? std::nullopt : std::optional<Separation>(sep.get<Separation>());
}

inline void to_json(json &j, const SimplifyResult &r) {
  j = json{{"diagram", r.diagram},
           {"path", r.path},
           {"crossing_upper_bound", r.crossing_upper_bound()},
           {"budget_exhausted", r.budget_exhausted},
           {"search_stats", r.stats}};
}

// ---------------------------------------------------------------------------
// Layouts

inline void to_json(json &j, const Point &p) { j = json::array({p.x, p.y}); }

inline void from_json(const json &j, Point &p) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw BadRequest("points are [x, y] number pairs");
  p = {j[0].get<double>(), j[1].get<double>()};
}

inline void to_json(json &j, const Circle &c) { j = json{{"center", c.center}, {"radius", c.radius}}; }

inline void from_json(const json &j, Circle &c) {
  c = {detail::field_as<Point>(j, "center"), detail::field_as<double>(j, "radius")};
}

inline void to_json(json &j, const Layout &l) {
  json routes = json::object();
  for (const auto &[label, r] : l.edge_routes)
    routes[std::to_string(label)] = r;
  j = json{{"position_of_crossing", l.position_of_crossing},
           {"edge_routes", routes},
           {"loops", l.loops},
           {"min", l.min},
           {"max", l.max}};
}

inline void from_json(const json &j, Layout &l) {
  l = Layout{};
  l.position_of_crossing = detail::field_as<std::vector<Point>>(j, "position_of_crossing");
  const auto &routes = detail::field(j, "edge_routes");
  if (!routes.is_object())
    throw BadRequest("edge_routes must map edge labels to polylines");
  for (const auto &[key, r] : routes.items()) {
    int label = 0;
    try {
      std::size_t used = 0;
      label = std::stoi(key, &used);
      if (used != key.size())
        throw std::invalid_argument(key);
    } catch (const std::exception &) {
      throw BadRequest("edge_routes key \"" + key + "\" is not an edge label");
    }
    l.edge_routes[label] = r.get<std::vector<Point>>();
  }
  l.loops = detail::field_as<std::vector<Circle>>(j, "loops");
  l.min = detail::field_as<Point>(j, "min");
  l.max = detail::field_as<Point>(j, "max");
}

// ---------------------------------------------------------------------------
// Puzzles and sessions

inline void to_json(json &j, const Puzzle &p) {
  j = json{{"id", p.id},
           {"base", p.base},
           {"start", p.start},
           {"target_crossings", p.target_crossings},
           {"solution_path", p.solution_path},
           {"seed", p.seed},
           {"scramble_moves", p.scramble_moves}};
  j["target"] = p.target ? json(*p.target) : json(nullptr);
  j["move_budget"] = p.move_budget ? json(*p.move_budget) : json(nullptr);
}

inline void from_json(const json &j, Puzzle &p) {
  p = Puzzle{};
  p.id = detail::field_as<std::string>(j, "id");
  p.base = detail::field_as<std::string>(j, "base");
  p.start = detail::field_as<Diagram>(j, "start");
  p.target_crossings = detail::field_as<int>(j, "target_crossings");
  p.solution_path = detail::field_as<std::vector<MoveSite>>(j, "solution_path");
  p.seed = detail::field_as<std::uint64_t>(j, "seed");
  p.scramble_moves = detail::field_as<int>(j, "scramble_moves");
  if (j.contains("target") && !j.at("target").is_null())
    p.target = j.at("target").get<Diagram>();
  if (j.contains("move_budget") && !j.at("move_budget").is_null())
    p.move_budget = j.at("move_budget").get<int>();
}

/// What a player sees: everything but the hidden solution, plus its length.
inline json public_view(const Puzzle &p) {
  json j = p;
  j.erase("solution_path");
  j["par"] = p.solution_path.size();
  return j;
}

inline void to_json(json &j, const Session &s) {
  j = json{{"session_id", s.session_id}, {"puzzle", s.puzzle},     {"current", s.current},
           {"history", s.history},       {"move_count", s.move_count}, {"completed", s.completed},
           {"created_at", s.created_at}, {"updated_at", s.updated_at}};
}

inline void from_json(const json &j, Session &s) {
  s.session_id = detail::field_as<std::string>(j, "session_id");
  s.puzzle = detail::field_as<Puzzle>(j, "puzzle");
  s.current = detail::field_as<Diagram>(j, "current");
  s.history = detail::field_as<std::vector<MoveSite>>(j, "history");
  s.move_count = detail::field_as<int>(j, "move_count");
  s.completed = detail::field_as<bool>(j, "completed");
  s.created_at = detail::field_as<std::int64_t>(j, "created_at");
  s.updated_at = detail::field_as<std::int64_t>(j, "updated_at");
}

inline json public_view(const Session &s) {
  json j = s;
  j["puzzle"] = public_view(s.puzzle);
  const auto sc = score(s);
  j["score"] = {{"solved", sc.solved}, {"moves_used", sc.moves_used}, {"par", sc.par}};
  return j;
}

// ---------------------------------------------------------------------------
// Errors

inline json error_json(const std::string &code, const std::string &message, const std::string &detail = {}) {
  return json{{"error", {{"code", code}, {"message", message}, {"detail", detail}}}};
}

inline json error_json(const Error &e) { return error_json(e.code(), e.what(), e.detail()); }

} // namespace knotlab
