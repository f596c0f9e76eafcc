#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "knotlab/diagram.hpp"
#include "knotlab/invariants.hpp"
#include "knotlab/moves.hpp"

namespace knotlab {

inline constexpr int kDefaultNodeBudget = 100000;

struct SearchStats {
  long nodes_expanded = 0;
  int max_crossings = 0;
};

struct SimplifyResult {
  Diagram diagram;
  std::vector<MoveSite> path;
  SearchStats stats;
  bool budget_exhausted = false;
  /// Crossings of the best diagram found: an upper bound on the crossing
  /// number, never the crossing number itself.
  int crossing_upper_bound() const { return diagram.crossing_count(); }
};

struct Separation {
  std::string name;
  std::string value_a;
  std::string value_b;
  friend bool operator==(const Separation &, const Separation &) = default;
};

struct DistinguishOptions {
  /// Largest crossing count for which the Jones polynomial is compared;
  /// 0 disables the Jones check.
  int jones_budget = kDefaultBracketBudget;
};

enum class Outcome { equivalent, distinguished, unknown };

inline const char *to_string(Outcome o) {
  switch (o) {
  case Outcome::equivalent: return "equivalent";
  case Outcome::distinguished: return "distinguished";
  default: return "unknown";
  }
}

struct Verdict {
  Outcome outcome = Outcome::unknown;
  std::vector<MoveSite> path;
  std::optional<Separation> separating_invariant;
  SearchStats stats;
};

namespace detail {

struct SearchNode {
  Diagram diagram;
  int parent = -1;
  MoveSite via;
};

inline std::vector<MoveSite> path_to(const std::vector<SearchNode> &nodes, int idx) {
  std::vector<MoveSite> out;
  for (int i = idx; nodes[static_cast<std::size_t>(i)].parent >= 0; i = nodes[static_cast<std::size_t>(i)].parent)
    out.push_back(nodes[static_cast<std::size_t>(i)].via);
  std::reverse(out.begin(), out.end());
  return out;
}

/// Breadth-first search from `start` for a diagram with fewer than `goal`
/// crossings, never exceeding `cap` crossings. Returns the path on success.
inline std::optional<std::pair<Diagram, std::vector<MoveSite>>>
find_smaller(const Diagram &start, int goal, int cap, MoveSet moves, long budget, SearchStats &stats) {
  std::vector<SearchNode> nodes{{start, -1, {}}};
  std::unordered_map<std::string, int> seen{{canonical_key(start), 0}};
  std::deque<int> queue{0};
  while (!queue.empty()) {
    if (stats.nodes_expanded >= budget)
      return std::nullopt;
    int idx = queue.front();
    queue.pop_front();
    ++stats.nodes_expanded;
    auto sk = make_skeleton(nodes[static_cast<std::size_t>(idx)].diagram);
    for (const auto &site : enumerate_on(sk, moves)) {
      Diagram child = apply_on(sk, site);
      int n = child.crossing_count();
      if (n > cap)
        continue;
      stats.max_crossings = std::max(stats.max_crossings, n);
      if (n < goal) {
        auto path = path_to(nodes, idx);
        path.push_back(site);
        return std::make_pair(std::move(child), std::move(path));
      }
      auto [it, fresh] = seen.emplace(emit_pd(child), static_cast<int>(nodes.size()));
      if (!fresh)
        continue;
      nodes.push_back({std::move(child), idx, site});
      queue.push_back(it->second);
    }
  }
  return std::nullopt;
}

} // namespace detail

/// Greedy reduction, then breadth-first search that may exceed the running
/// minimum by `max_extra_crossings` to escape local minima. Budget exhaustion
/// returns the best diagram found so far.
inline SimplifyResult simplify(const Diagram &d, int max_extra_crossings = 2, long node_budget = kDefaultNodeBudget) {
  SimplifyResult r{d, {}, {}, false};
  r.stats.max_crossings = d.crossing_count();
  while (true) {
    while (true) {
      auto sk = detail::make_skeleton(r.diagram);
      auto sites = detail::enumerate_on(sk, kReduceMoves);
      if (sites.empty())
        break;
      r.path.push_back(sites.front());
      r.diagram = detail::apply_on(sk, sites.front());
    }
    const int current = r.diagram.crossing_count();
    if (current == 0)
      break;
    bool improved = false;
    for (int extra = 0; extra <= max_extra_crossings && !improved; ++extra) {
      MoveSet moves = kReduceMoves | kR3Slide;
      if (extra >= 1)
        moves |= kR1Grow;
      if (extra >= 2)
        moves |= kR2Grow;
      auto found = detail::find_smaller(r.diagram, current, current + extra, moves, node_budget, r.stats);
      if (found) {
        r.diagram = std::move(found->first);
        r.path.insert(r.path.end(), found->second.begin(), found->second.end());
        improved = true;
      } else if (r.stats.nodes_expanded >= node_budget) {
        r.budget_exhausted = true;
        return r;
      }
    }
    if (!improved)
      break;
  }
  return r;
}

/// First invariant, in a fixed order, whose values differ.
inline std::optional<Separation> distinguish(const Diagram &a, const Diagram &b, const DistinguishOptions &opts = {}) {
  int ca = component_count(a), cb = component_count(b);
  if (ca != cb)
    return Separation{"component_count", std::to_string(ca), std::to_string(cb)};
  auto ta = tricolor_count(a).count, tb = tricolor_count(b).count;
  if (ta != tb)
    return Separation{"tricolor_count", std::to_string(ta), std::to_string(tb)};
  if (ca > 1) {
    auto la = linking_numbers(a), lb = linking_numbers(b);
    if (la != lb) {
      const auto text = [](const std::vector<int> &v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i)
          s += (i ? "," : "") + std::to_string(v[i]);
        return s + "]";
      };
      return Separation{"linking_numbers", text(la), text(lb)};
    }
  }
  if (opts.jones_budget > 0 && a.crossing_count() <= opts.jones_budget && b.crossing_count() <= opts.jones_budget &&
      !a.empty() && !b.empty()) {
    auto va = jones_polynomial(a, opts.jones_budget), vb = jones_polynomial(b, opts.jones_budget);
    if (va != vb)
      return Separation{"jones_polynomial", va.to_string(), vb.to_string()};
  }
  return std::nullopt;
}

namespace detail {

/// Moves that undo `path` (which took `from` to its end), in replay order.
inline std::vector<MoveSite> inverse_path(const Diagram &from, const std::vector<MoveSite> &path) {
  std::vector<Diagram> states{from};
  for (const auto &s : path)
    states.push_back(apply_move(states.back(), s));
  std::vector<MoveSite> out;
  for (std::size_t i = path.size(); i-- > 0;)
    out.push_back(inverse_site(states[i], path[i], states[i + 1]));
  return out;
}

} // namespace detail

/// Invariants first, then a bidirectional breadth-first search of the move
/// graph with crossing counts capped at `crossing_cap`. Both diagrams are
/// first reduced without exceeding their crossing counts. `unknown` means the
/// budgets ran out; it proves nothing either way.
inline Verdict decide_equivalent(const Diagram &a, const Diagram &b, int crossing_cap, long node_budget = kDefaultNodeBudget,
                                 const DistinguishOptions &opts = {}) {
  Verdict v;
  if (auto sep = distinguish(a, b, opts)) {
    v.outcome = Outcome::distinguished;
    v.separating_invariant = sep;
    return v;
  }
  auto sa = simplify(a, 0, node_budget);
  auto sb = simplify(b, 0, std::max(0L, node_budget - sa.stats.nodes_expanded));
  v.stats.nodes_expanded = sa.stats.nodes_expanded + sb.stats.nodes_expanded;
  v.stats.max_crossings = std::max(sa.stats.max_crossings, sb.stats.max_crossings);

  using detail::SearchNode;
  std::vector<SearchNode> fwd{{sa.diagram, -1, {}}}, bwd{{sb.diagram, -1, {}}};
  std::unordered_map<std::string, int> seen_f{{canonical_key(sa.diagram), 0}}, seen_b{{canonical_key(sb.diagram), 0}};
  std::deque<int> qf{0}, qb{0};

  const auto finish = [&](int fi, int bi) {
    v.outcome = Outcome::equivalent;
    v.path = sa.path;
    auto mid = detail::path_to(fwd, fi);
    v.path.insert(v.path.end(), mid.begin(), mid.end());
    auto back = detail::path_to(bwd, bi);
    auto undo_back = detail::inverse_path(sb.diagram, back);
    v.path.insert(v.path.end(), undo_back.begin(), undo_back.end());
    auto undo_b = detail::inverse_path(b, sb.path);
    v.path.insert(v.path.end(), undo_b.begin(), undo_b.end());
    return v;
  };

  if (auto it = seen_b.find(canonical_key(sa.diagram)); it != seen_b.end())
    return finish(0, it->second);

  // Expand one full level of the smaller frontier at a time.
  while (!qf.empty() && !qb.empty()) {
    const bool forward = qf.size() <= qb.size();
    auto &queue = forward ? qf : qb;
    auto &nodes = forward ? fwd : bwd;
    auto &seen = forward ? seen_f : seen_b;
    auto &other = forward ? seen_b : seen_f;
    const std::size_t level = queue.size();
    for (std::size_t i = 0; i < level; ++i) {
      if (v.stats.nodes_expanded >= node_budget)
        return v;
      int idx = queue.front();
      queue.pop_front();
      ++v.stats.nodes_expanded;
      auto sk = detail::make_skeleton(nodes[static_cast<std::size_t>(idx)].diagram);
      for (const auto &site : detail::enumerate_on(sk, kAllMoves)) {
        Diagram child = detail::apply_on(sk, site);
        if (child.crossing_count() > crossing_cap)
          continue;
        v.stats.max_crossings = std::max(v.stats.max_crossings, child.crossing_count());
        std::string key = emit_pd(child);
        if (seen.count(key))
          continue;
        int ci = static_cast<int>(nodes.size());
        seen.emplace(key, ci);
        nodes.push_back({std::move(child), idx, site});
        if (auto hit = other.find(key); hit != other.end())
          return forward ? finish(ci, hit->second) : finish(hit->second, ci);
        queue.push_back(ci);
      }
    }
  }
  return v;
}

} // namespace knotlab
