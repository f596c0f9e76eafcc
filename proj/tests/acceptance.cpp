// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include "cli_cases.hpp"
#include "golden.hpp"
#include "service_cases.hpp"
#include "support.hpp"

using namespace knotlab;
using testsupport::cat;

namespace {

struct Failure {
  std::string why;
};

void require(bool ok, const std::string &why) {
  if (!ok)
    throw Failure{why};
}

struct Criterion {
  std::string name;
  double limit_seconds; // 0 means no time limit
  std::function<std::string()> body; // returns a short summary
};

// 1
std::string trefoil_minimality() {
  auto r = simplify(cat("trefoil"), 2, 100000);
  require(r.crossing_upper_bound() == 3, "got " + std::to_string(r.crossing_upper_bound()) + " crossings");
  return "3 crossings after " + std::to_string(r.stats.nodes_expanded) + " nodes";
}

// 2
std::string hopf_minimal() {
  auto r = simplify(cat("hopf"));
  require(r.crossing_upper_bound() == 2, "simplify(hopf) gave " + std::to_string(r.crossing_upper_bound()));
  auto s = distinguish(cat("trefoil"), cat("hopf"));
  require(s && *s == Separation{"component_count", "1", "2"}, "trefoil and hopf not separated by components");
  return "hopf 2 crossings; component_count 1 vs 2";
}

// 3
std::string tricolor_invariance() {
  long checks = 0;
  for (const auto &e : catalog()) {
    const auto want = tricolor_count(e.diagram).count;
    Diagram d = e.diagram;
    for (std::uint64_t i = 0; i < 200; ++i) {
      d = random_walk(d, 1, 1000 + i).diagram;
      // Keep the walk wandering without letting diagrams grow without bound.
      if (d.crossing_count() > 14)
        d = e.diagram;
      require(tricolor_count(d).count == want, e.name + " changed at step " + std::to_string(i) + ": " + emit_pd(d));
      ++checks;
    }
  }
  return std::to_string(checks) + " moves checked";
}

// 4
std::string tricolor_values() {
  require(tricolor_count(cat("trefoil")).count == 9, "trefoil");
  require(tricolor_count(cat("unknot")).count == 3, "unknot");
  require(tricolor_count(cat("figure_eight")).count == 3, "figure_eight");
  require(tricolor_count(cat("hopf")).count == 3, "hopf");
  auto corpus = testsupport::walk_corpus(40, 6, 77);
  for (const auto &e : catalog())
    corpus.push_back(e.diagram);
  corpus.push_back(testsupport::pd("O O"));
  int compared = 0;
  for (const auto &d : corpus) {
    if (trace(d).arcs.arc_count > 8)
      continue;
    require(tricolor_count(d).count == testsupport::brute_force_tricolorings(d), "brute force disagrees: " + emit_pd(d));
    ++compared;
  }
  return "9/3/3/3; brute force agrees on " + std::to_string(compared) + " diagrams";
}

// 5
std::string bracket_jones() {
  const auto mA3 = [](int e) { return LaurentPoly::monomial(-1, 3 * e); };
  int randomized = 0;
  for (const auto &e : catalog())
    for (std::uint64_t seed = 0; randomized < 100 || seed < 20; ++seed) {
      auto d = random_walk(e.diagram, 2, seed + 500).diagram;
      auto sites = enumerate_sites(d);
      const auto &s = sites[seed % sites.size()];
      auto r = apply_move(d, s);
      auto before = kauffman_bracket(d), after = kauffman_bracket(r);
      const int dw = signs_and_writhe(r).writhe - signs_and_writhe(d).writhe;
      if (s.kind == MoveKind::R1) {
        const bool grow = s.direction == MoveDirection::grow;
        require(grow ? after == before * mA3(dw) : before == after * mA3(-dw), "R1 factor wrong at " + s.id());
      } else {
        require(after == before, "bracket changed under " + s.id());
      }
      require(jones_polynomial(r) == jones_polynomial(d), "Jones changed under " + s.id());
      ++randomized;
      if (seed >= 40)
        break;
    }
  require(randomized >= 100, "only " + std::to_string(randomized) + " randomized checks");
  require(jones_polynomial(cat("unknot")) == LaurentPoly::constant(1, Variable::t), "V(unknot) != 1");
  const auto &t = cat("trefoil");
  const auto v = jones_polynomial(t);
  require(v.to_string() == "-t^4 + t^3 + t", "V(trefoil) = " + v.to_string());
  require(testsupport::to_poly(v) == testsupport::oracle_jones(t, testsupport::oracle_writhe_sequential(t)),
          "state-sum oracle disagrees");
  const auto vm = jones_polynomial(t.mirror());
  require(vm != v, "mirror trefoil has the same Jones polynomial");
  require(vm == v.inverted_variable(), "V(mirror) != V(1/t)");
  return std::to_string(randomized) + " randomized move checks; V(trefoil) = " + v.to_string();
}

// 6
std::string linking() {
  require(std::abs(linking_number(cat("hopf"), 0, 1)) == 1, "hopf");
  require(std::abs(linking_number(cat("solomon"), 0, 1)) == 2, "solomon");
  require(linking_number(testsupport::pd("O O"), 0, 1) == 0, "split union");
  return "|lk| hopf 1, solomon 2, split 0";
}

// 7
std::string scramble_closure() {
  int solved = 0, worst = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int moves = 1 + static_cast<int>(seed % 8);
    auto d = random_walk(cat("unknot"), moves, seed, WalkPolicy::grow_biased).diagram;
    auto v = decide_equivalent(d, cat("unknot"), d.crossing_count() + 2);
    if (v.outcome == Outcome::equivalent && replay(d, v.path).crossing_count() == 0)
      ++solved;
    else
      throw Failure{"seed " + std::to_string(seed) + " (" + std::to_string(moves) + " moves) not closed: " +
                    emit_pd(d)};
    worst = std::max(worst, d.crossing_count());
  }
  return std::to_string(solved) + "/100 closed; largest scramble " + std::to_string(worst) + " crossings";
}

// 8
std::string structural() {
  auto corpus = testsupport::walk_corpus(30, 8, 99);
  for (const auto &e : catalog())
    corpus.push_back(e.diagram);
  int euler_checked = 0, arc_checked = 0;
  for (const auto &d : corpus) {
    require(parse_pd(emit_pd(d)) == d, "round trip failed: " + emit_pd(d));
    auto t = trace(d);
    auto sk = detail::make_skeleton(d);
    int pieces = 0;
    detail::pieces_of(sk, &pieces);
    if (pieces + d.free_loops() == 1) {
      require(d.crossing_count() - d.edge_count() + t.faces == 2, "Euler characteristic: " + emit_pd(d));
      ++euler_checked;
    }
    if (t.components == 1 && pieces == 1 && d.free_loops() == 0) {
      require(t.arcs.arc_count == d.crossing_count(), "arc count: " + emit_pd(d));
      ++arc_checked;
    }
    const auto svg = to_svg(d, layout_diagram(d));
    int gaps = 0;
    for (auto p = svg.find("class=\"gap\""); p != std::string::npos; p = svg.find("class=\"gap\"", p + 1))
      ++gaps;
    require(gaps == d.crossing_count(), "gap count: " + emit_pd(d));
  }
  return std::to_string(corpus.size()) + " diagrams; Euler " + std::to_string(euler_checked) + ", arcs " +
         std::to_string(arc_checked);
}

// 9
std::string conformance() {
  const auto dir = std::filesystem::temp_directory_path() / ("knotlab-accept-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  int n = 0;
  {
    Service svc(testsupport::deterministic_config(dir));
    for (const auto &c : testsupport::service_cases()) {
      auto msg = testsupport::golden_mismatch("service/" + c.name + ".txt",
                                              testsupport::transcript(svc.handle(c.method, c.path, c.body)));
      require(msg.empty(), "service " + c.name);
      ++n;
    }
  }
  std::filesystem::remove_all(dir);
  int m = 0;
  for (const auto &c : testsupport::cli_cases()) {
    auto r = testsupport::run_cli(c.args);
    require(r.exit_code == c.exit_code, "cli " + c.name + " exit " + std::to_string(r.exit_code));
    auto msg = testsupport::golden_mismatch("cli/" + c.name + ".txt", "exit " + std::to_string(r.exit_code) + "\n" + r.out);
    require(msg.empty(), "cli " + c.name);
    ++m;
  }
  return std::to_string(n) + " service and " + std::to_string(m) + " CLI golden cases";
}

} // namespace

int main() {
  if (testsupport::updating_golden()) {
    std::cerr << "refusing to run with KNOTLAB_UPDATE_GOLDEN set\n";
    return 2;
  }
  const std::vector<Criterion> criteria = {
      {"trefoil_minimality", 10, trefoil_minimality},
      {"hopf_minimal_diagram", 0, hopf_minimal},
      {"tricolor_invariance", 30, tricolor_invariance},
      {"tricolor_values", 0, tricolor_values},
      {"bracket_jones_behaviour", 10, bracket_jones},
      {"linking_numbers", 0, linking},
      {"scramble_closure", 60, scramble_closure},
      {"structural_suite", 0, structural},
      {"cli_service_conformance", 0, conformance},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string summary, error;
    try {
      summary = c.body();
    } catch (const Failure &f) {
      error = f.why;
    } catch (const std::exception &e) {
      error = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (error.empty() && c.limit_seconds > 0 && secs >= c.limit_seconds) {
      std::ostringstream os;
      os << "took " << secs << " s, limit " << c.limit_seconds << " s";
      error = os.str();
    }
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (error.empty() ? "PASS " : "FAIL ") << c.name << " (" << secs << " s): "
         << (error.empty() ? summary : error);
    std::cout << line.str() << std::endl;
    failed += error.empty() ? 0 : 1;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - static_cast<std::size_t>(failed) << "/"
            << criteria.size() << std::endl;
  return failed ? 1 : 0;
}
