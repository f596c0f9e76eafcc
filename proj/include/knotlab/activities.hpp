#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "knotlab/catalog.hpp"
#include "knotlab/diagram.hpp"
#include "knotlab/equivalence.hpp"
#include "knotlab/errors.hpp"
#include "knotlab/invariants.hpp"
#include "knotlab/moves.hpp"

namespace knotlab {

// ---------------------------------------------------------------------------
// Scramble puzzles

struct Puzzle {
  std::string id;
  std::string base;
  Diagram start;
  int target_crossings = 0;
  std::optional<Diagram> target; // exact target; crossing count alone when unset
  std::vector<MoveSite> solution_path;
  std::optional<int> move_budget;
  std::uint64_t seed = 0;
  int scramble_moves = 0;

  /// Solved when the crossing count is down to the target, or when the
  /// diagram matches the exact target up to relabelling.
  bool met_by(const Diagram &d) const {
    if (target)
      return canonical(d) == canonical(*target);
    return d.crossing_count() <= target_crossings;
  }
};

inline std::string puzzle_id(const std::string &base, int n, std::uint64_t seed) {
  return base + "-" + std::to_string(n) + "-" + std::to_string(seed);
}

/// Scrambles a catalog diagram with `n` grow-biased random moves. The hidden
/// solution undoes the scramble move by move.
inline Puzzle make_puzzle(const std::string &base, int n, std::uint64_t seed, std::optional<int> move_budget = std::nullopt,
                          bool exact_target = false) {
  if (n < 0)
    throw BadRequest("scramble length must be non-negative");
  const auto &entry = catalog_get(base);
  auto walk = random_walk(entry.diagram, n, seed, WalkPolicy::grow_biased);
  Puzzle p;
  p.id = puzzle_id(base, n, seed);
  p.base = base;
  p.start = walk.diagram;
  p.target_crossings = entry.diagram.crossing_count();
  if (exact_target)
    p.target = entry.diagram;
  p.solution_path = detail::inverse_path(entry.diagram, walk.path);
  p.move_budget = move_budget;
  p.seed = seed;
  p.scramble_moves = n;
  if (!p.met_by(replay(p.start, p.solution_path)))
    throw std::logic_error("generated puzzle " + p.id + " is not solved by its own solution");
  return p;
}

// ---------------------------------------------------------------------------
// Tricoloring exercise

inline constexpr int kUncolored = -1;

struct ColoringFeedback {
  bool valid = false;
  bool monochromatic = false;
  std::vector<int> violations; // crossing indices where exactly two colors meet
  int colors_used = 0;
};

/// Checks a full arc coloring against the crossing rule. Arcs past the end of
/// the vector or marked kUncolored count as missing.
inline ColoringFeedback check_coloring(const Diagram &d, const Coloring &c) {
  auto sk = detail::make_skeleton(d);
  int edge_arcs = 0;
  auto arc = detail::arc_ids(sk, &edge_arcs);
  const int arcs = edge_arcs + d.free_loops();
  std::vector<int> missing;
  for (int a = 0; a < arcs; ++a) {
    const int v = a < static_cast<int>(c.color_of_arc.size()) ? c.color_of_arc[static_cast<std::size_t>(a)] : kUncolored;
    if (v == kUncolored)
      missing.push_back(a);
    else if (v < 0 || v > 2)
      throw BadRequest("arc " + std::to_string(a) + " has color " + std::to_string(v) + "; colors are 0, 1, 2");
  }
  if (static_cast<int>(c.color_of_arc.size()) > arcs)
    throw BadRequest("coloring has " + std::to_string(c.color_of_arc.size()) + " entries but the diagram has " +
                     std::to_string(arcs) + " arcs");
  if (!missing.empty()) {
    std::string list;
    for (int a : missing)
      list += (list.empty() ? "" : ",") + std::to_string(a);
    throw BadRequest("incomplete coloring; missing arcs: " + list, "missing_arcs=" + list);
  }

  ColoringFeedback fb;
  const auto color = [&](int e) { return c.color_of_arc[static_cast<std::size_t>(arc[static_cast<std::size_t>(e)])]; };
  for (int x = 0; x < sk.n; ++x) {
    const auto &se = sk.slot_edge[static_cast<std::size_t>(x)];
    std::set<int> seen{color(se[0]), color(se[1]), color(se[2])};
    if (seen.size() == 2)
      fb.violations.push_back(x);
  }
  std::set<int> used(c.color_of_arc.begin(), c.color_of_arc.end());
  fb.colors_used = static_cast<int>(used.size());
  fb.monochromatic = fb.colors_used <= 1;
  fb.valid = fb.violations.empty();
  return fb;
}

// ---------------------------------------------------------------------------
// Play sessions

struct Session {
  std::string session_id;
  Puzzle puzzle;
  Diagram current;
  std::vector<MoveSite> history;
  int move_count = 0;
  bool completed = false;
  std::int64_t created_at = 0; // seconds since the epoch
  std::int64_t updated_at = 0;
};

inline Session new_session(const Puzzle &p, std::string session_id, std::int64_t now) {
  Session s;
  s.session_id = std::move(session_id);
  s.puzzle = p;
  s.current = p.start;
  s.completed = p.met_by(p.start);
  s.created_at = s.updated_at = now;
  return s;
}

/// One move by the player. Moves can also undo a solved state, so
/// `completed` is recomputed every time.
inline Session play_move(Session s, const MoveSite &site, std::int64_t now) {
  if (s.puzzle.move_budget && s.move_count >= *s.puzzle.move_budget)
    throw BudgetExceeded("move budget of " + std::to_string(*s.puzzle.move_budget) + " is used up",
                         "move_budget=" + std::to_string(*s.puzzle.move_budget));
  s.current = apply_move(s.current, site);
  s.history.push_back(site);
  ++s.move_count;
  s.completed = s.puzzle.met_by(s.current);
  s.updated_at = now;
  return s;
}

inline Session reset_session(Session s, std::int64_t now) {
  s.current = s.puzzle.start;
  s.history.clear();
  s.move_count = 0;
  s.completed = s.puzzle.met_by(s.current);
  s.updated_at = now;
  return s;
}

struct Score {
  bool solved = false;
  int moves_used = 0;
  int par = 0;
  friend bool operator==(const Score &, const Score &) = default;
};

inline Score score(const Session &s) {
  return {s.completed, s.move_count, static_cast<int>(s.puzzle.solution_path.size())};
}

} // namespace knotlab
