#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "knotlab/diagram.hpp"
#include "knotlab/errors.hpp"
#include "knotlab/laurent.hpp"

namespace knotlab {

inline constexpr int kDefaultBracketBudget = 20;

/// color_of_arc[i] in {0,1,2} for arc id i (as numbered by trace()).
struct Coloring {
  std::vector<int> color_of_arc;
  friend bool operator==(const Coloring &, const Coloring &) = default;
};

struct TricolorResult {
  std::int64_t count = 0;
  int dimension = 0; // count = 3^dimension
  bool tricolorable = false;
  std::optional<Coloring> witness;
};

struct SignData {
  std::vector<int> sign_of_crossing; // indexed like Diagram::crossings()
  int writhe = 0;
};

namespace detail {

/// Rows of the mod-3 crossing system 2*over - under_in - under_out = 0, one
/// per crossing, over the diagram's arcs (free loops included, unconstrained).
inline std::vector<std::vector<int>> coloring_system(const Skeleton &sk, int *arc_count) {
  int edge_arcs = 0;
  auto arc = arc_ids(sk, &edge_arcs);
  const int arcs = edge_arcs + sk.free_loops;
  std::vector<std::vector<int>> rows;
  for (int c = 0; c < sk.n; ++c) {
    std::vector<int> row(static_cast<std::size_t>(arcs), 0);
    const auto &se = sk.slot_edge[static_cast<std::size_t>(c)];
    auto over = static_cast<std::size_t>(arc[static_cast<std::size_t>(se[1])]);
    auto in = static_cast<std::size_t>(arc[static_cast<std::size_t>(se[0])]);
    auto out = static_cast<std::size_t>(arc[static_cast<std::size_t>(se[2])]);
    row[over] = (row[over] + 2) % 3;
    row[in] = (row[in] + 2) % 3;
    row[out] = (row[out] + 2) % 3;
    rows.push_back(std::move(row));
  }
  *arc_count = arcs;
  return rows;
}

/// Nullspace basis over GF(3) by row reduction.
inline std::vector<std::vector<int>> nullspace_mod3(std::vector<std::vector<int>> rows, int cols) {
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (int col = 0; col < cols && r < rows.size(); ++col) {
    auto c = static_cast<std::size_t>(col);
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0)
      ++p;
    if (p == rows.size())
      continue;
    std::swap(rows[p], rows[r]);
    int inv = rows[r][c]; // 1 and 2 are self-inverse mod 3
    for (auto &x : rows[r])
      x = (x * inv) % 3;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0)
        continue;
      int f = rows[i][c];
      for (std::size_t j = 0; j < static_cast<std::size_t>(cols); ++j)
        rows[i][j] = ((rows[i][j] - f * rows[r][j]) % 3 + 3) % 3;
    }
    pivot_col.push_back(col);
    ++r;
  }
  std::vector<std::uint8_t> is_pivot(static_cast<std::size_t>(cols), 0);
  for (int pc : pivot_col)
    is_pivot[static_cast<std::size_t>(pc)] = 1;
  std::vector<std::vector<int>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)])
      continue;
    std::vector<int> v(static_cast<std::size_t>(cols), 0);
    v[static_cast<std::size_t>(free)] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
      v[static_cast<std::size_t>(pivot_col[i])] = (3 - rows[i][static_cast<std::size_t>(free)]) % 3;
    basis.push_back(std::move(v));
  }
  return basis;
}

} // namespace detail

/// Number of arc 3-colorings obeying the crossing rule, via the mod-3
/// nullspace. Tricolorable means some valid coloring uses at least two
/// colors, i.e. count > 3.
inline TricolorResult tricolor_count(const Diagram &d) {
  auto sk = detail::make_skeleton(d);
  int arcs = 0;
  auto rows = detail::coloring_system(sk, &arcs);
  auto basis = detail::nullspace_mod3(std::move(rows), arcs);
  TricolorResult r;
  r.dimension = static_cast<int>(basis.size());
  if (r.dimension > 39)
    throw std::overflow_error("tricolor_count: 3^" + std::to_string(r.dimension) + " does not fit");
  r.count = 1;
  for (int i = 0; i < r.dimension; ++i)
    r.count *= 3;
  r.tricolorable = r.count > 3;
  if (r.tricolorable) {
    for (const auto &v : basis) {
      bool constant = std::all_of(v.begin(), v.end(), [&](int x) { return x == v.front(); });
      if (!constant) {
        r.witness = Coloring{v};
        break;
      }
    }
  }
  return r;
}

/// Crossing signs: +1 when the over-strand enters at slot 1 of the quad.
inline SignData signs_and_writhe(const Diagram &d) {
  auto sk = detail::make_skeleton(d);
  SignData out;
  for (int c = 0; c < sk.n; ++c) {
    out.sign_of_crossing.push_back(sk.sign(c));
    out.writhe += sk.sign(c);
  }
  return out;
}

/// Component ids: strand components numbered by smallest label, then free
/// loops.
inline int component_count(const Diagram &d) {
  auto sk = detail::make_skeleton(d);
  int comps = 0;
  detail::component_ids(sk, &comps);
  return comps + d.free_loops();
}

inline int linking_number(const Diagram &d, int comp_a, int comp_b) {
  auto sk = detail::make_skeleton(d);
  int strands = 0;
  auto comp = detail::component_ids(sk, &strands);
  const int total = strands + d.free_loops();
  if (comp_a == comp_b || comp_a < 0 || comp_b < 0 || comp_a >= total || comp_b >= total)
    throw BadRequest("linking_number: need two distinct components in 0.." + std::to_string(total - 1));
  int sum = 0;
  for (int c = 0; c < sk.n; ++c) {
    const auto &se = sk.slot_edge[static_cast<std::size_t>(c)];
    int under = comp[static_cast<std::size_t>(se[0])];
    int over = comp[static_cast<std::size_t>(se[1])];
    if ((under == comp_a && over == comp_b) || (under == comp_b && over == comp_a))
      sum += sk.sign(c);
  }
  return sum / 2;
}

/// All pairwise linking numbers, sorted.
inline std::vector<int> linking_numbers(const Diagram &d) {
  int k = component_count(d);
  std::vector<int> out;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      out.push_back(linking_number(d, a, b));
  std::sort(out.begin(), out.end());
  return out;
}

/// delta = -A^2 - A^-2
inline LaurentPoly bracket_delta() {
  return LaurentPoly::monomial(-1, 2) + LaurentPoly::monomial(-1, -2);
}

/// Kauffman bracket by enumerating all 2^n states. The A-smoothing joins
/// slots (0,3) and (1,2); the B-smoothing joins (0,1) and (2,3).
inline LaurentPoly kauffman_bracket(const Diagram &d, int budget = kDefaultBracketBudget) {
  const int n = d.crossing_count();
  if (n > budget)
    throw BudgetExceeded("bracket needs " + std::to_string(n) + " crossings, budget is " + std::to_string(budget) +
                             "; simplify first",
                         "crossings=" + std::to_string(n));
  if (d.empty())
    throw BadRequest("the empty diagram has no bracket");
  auto sk = detail::make_skeleton(d);
  const int m = sk.edge_count();
  const int max_loops = m + d.free_loops() + 1;
  // tally[a - b + n][loops]
  std::vector<std::vector<std::int64_t>> tally(static_cast<std::size_t>(2 * n + 1),
                                               std::vector<std::int64_t>(static_cast<std::size_t>(max_loops + 1), 0));
  std::vector<int> parent(static_cast<std::size_t>(m));
  const auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  const std::uint64_t states = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < states; ++mask) {
    std::iota(parent.begin(), parent.end(), 0);
    int classes = m;
    const auto join = [&](int x, int y) {
      int rx = find(x), ry = find(y);
      if (rx != ry) {
        parent[static_cast<std::size_t>(rx)] = ry;
        --classes;
      }
    };
    int b = 0;
    for (int c = 0; c < n; ++c) {
      const auto &se = sk.slot_edge[static_cast<std::size_t>(c)];
      if (mask >> c & 1u) {
        ++b;
        join(se[0], se[1]);
        join(se[2], se[3]);
      } else {
        join(se[0], se[3]);
        join(se[1], se[2]);
      }
    }
    int a = n - b;
    ++tally[static_cast<std::size_t>(a - b + n)][static_cast<std::size_t>(classes + d.free_loops())];
  }
  const LaurentPoly delta = bracket_delta();
  std::vector<LaurentPoly> delta_pow{LaurentPoly::constant(1)};
  for (int k = 1; k <= max_loops; ++k)
    delta_pow.push_back(delta_pow.back() * delta);
  LaurentPoly result(Variable::A);
  for (int ab = 0; ab <= 2 * n; ++ab)
    for (int loops = 1; loops <= max_loops; ++loops) {
      auto cnt = tally[static_cast<std::size_t>(ab)][static_cast<std::size_t>(loops)];
      if (cnt)
        result += delta_pow[static_cast<std::size_t>(loops - 1)].shifted(ab - n).scaled(cnt);
    }
  return result;
}

/// V = (-A)^(-3w) <D>, then A = t^(-1/4).
inline LaurentPoly jones_polynomial(const Diagram &d, int budget = kDefaultBracketBudget) {
  LaurentPoly bracket = kauffman_bracket(d, budget);
  int w = signs_and_writhe(d).writhe;
  LaurentPoly factor = LaurentPoly::monomial((w % 2 == 0) ? 1 : -1, -3 * w);
  return (factor * bracket).substitute_a_to_t();
}

} // namespace knotlab
