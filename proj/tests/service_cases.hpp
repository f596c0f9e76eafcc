#pragma once

// The request script behind the service golden files. It runs against a
// fresh Service with a fixed clock and sequential session ids so every
// response is reproducible byte for byte.

#include <atomic>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "knotlab/service.hpp"
#include "knotlab/serialize.hpp"

namespace testsupport {

struct ServiceCase {
  std::string name;
  std::string method;
  std::string path;
  std::string body;
};

inline constexpr std::int64_t kFixedClock = 1700000000;

inline knotlab::ServiceConfig deterministic_config(const std::filesystem::path &dir) {
  knotlab::ServiceConfig cfg;
  cfg.session_dir = dir;
  cfg.clock = [] { return kFixedClock; };
  auto counter = std::make_shared<std::atomic<int>>(0);
  cfg.new_id = [counter] {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016x", ++*counter);
    return std::string(buf);
  };
  return cfg;
}

inline std::vector<ServiceCase> service_cases() {
  using knotlab::json;
  const auto post = [](std::string name, std::string path, json body) {
    return ServiceCase{std::move(name), "POST", std::move(path), body.dump()};
  };
  const std::string trefoil = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
  const std::string hopf = knotlab::emit_pd(knotlab::catalog_get("hopf").diagram);
  const std::string eight = knotlab::emit_pd(knotlab::catalog_get("figure_eight").diagram);
  const auto puzzle = knotlab::make_puzzle("unknot", 5, 42);
  const json first_move = puzzle.solution_path.front();
  const json kink_site = knotlab::enumerate_sites(knotlab::catalog_get("unknot").diagram, knotlab::kR1Grow).front();

  return {
      {"catalog", "GET", "/catalog", ""},
      post("parse_trefoil", "/parse", {{"pd", trefoil}}),
      post("parse_unknot", "/parse", {{"pd", "O"}}),
      post("parse_syntax_error", "/parse", {{"pd", "X(1,5,2"}}),
      post("parse_structure_error", "/parse", {{"pd", "X(1,2,3,4)"}}),
      post("validate_ok", "/validate", {{"pd", trefoil}}),
      post("validate_findings", "/validate", {{"pd", "X(1,1,2,3)"}}),
      post("validate_structured", "/validate", {{"pd", {{"crossings", {{1, 3, 2, 4}, {3, 1, 4, 2}}}}}}),
      post("invariants_trefoil", "/invariants", {{"pd", trefoil}}),
      post("invariants_hopf", "/invariants", {{"pd", hopf}}),
      post("invariants_figure_eight", "/invariants", {{"pd", eight}}),
      post("invariants_small_budget", "/invariants", {{"pd", trefoil}, {"budget", 2}}),
      post("invariants_over_cap", "/invariants", {{"pd", trefoil}, {"budget", 500}}),
      post("enumerate_unknot", "/moves/enumerate", {{"pd", "O"}}),
      post("enumerate_trefoil_r1", "/moves/enumerate", {{"pd", trefoil}, {"kinds", {"R1"}}}),
      post("enumerate_trefoil_reduce", "/moves/enumerate", {{"pd", trefoil}, {"kinds", {"reduce", "R3-slide"}}}),
      post("enumerate_bad_kind", "/moves/enumerate", {{"pd", trefoil}, {"kinds", {"R7"}}}),
      post("apply_kink", "/moves/apply", {{"pd", "O"}, {"site", kink_site}}),
      post("apply_invalid", "/moves/apply",
           {{"pd", trefoil}, {"site", {{"kind", "R1"}, {"direction", "reduce"}, {"locus", {1}}}}}),
      post("coloring_valid", "/coloring/check", {{"pd", trefoil}, {"coloring", {0, 1, 2}}}),
      post("coloring_violation", "/coloring/check", {{"pd", trefoil}, {"coloring", {0, 0, 1}}}),
      post("coloring_partial", "/coloring/check", {{"pd", trefoil}, {"coloring", {0, nullptr, 1}}}),
      post("equivalence_trefoil_hopf", "/equivalence", {{"pd_a", trefoil}, {"pd_b", hopf}}),
      post("equivalence_scrambled_unknot", "/equivalence",
           {{"pd_a", knotlab::emit_pd(puzzle.start)}, {"pd_b", "O"}}),
      post("equivalence_mirror_without_jones", "/equivalence",
           {{"pd_a", trefoil},
            {"pd_b", knotlab::emit_pd(knotlab::parse_pd(trefoil).mirror())},
            {"budgets", {{"jones_budget", 0}, {"node_budget", 300}}}}),
      post("equivalence_over_cap", "/equivalence", {{"pd_a", trefoil}, {"pd_b", "O"}, {"budgets", {{"crossing_cap", 99}}}}),
      post("render_trefoil", "/render", {{"pd", trefoil}, {"options", {{"labels", true}}}}),
      post("render_colored", "/render", {{"pd", trefoil}, {"options", {{"coloring", {0, 1, 2}}}}}),
      post("puzzle_new", "/puzzle/new", {{"base", "unknot"}, {"n", 5}, {"seed", 42}}),
      {"session_get", "GET", "/session/0000000000000001", ""},
      post("session_move", "/session/0000000000000001/move", {{"site", first_move}}),
      post("session_move_invalid", "/session/0000000000000001/move",
           {{"site", {{"kind", "R2"}, {"direction", "reduce"}, {"locus", {900, 901}}}}}),
      post("session_reset", "/session/0000000000000001/reset", json::object()),
      {"session_missing", "GET", "/session/ffffffffffffffff", ""},
      post("puzzle_unknown_base", "/puzzle/new", {{"base", "granny"}, {"n", 3}, {"seed", 1}}),
      {"unknown_route", "GET", "/nope", ""},
      {"wrong_method", "GET", "/parse", ""},
      {"invalid_json", "POST", "/parse", "{\"pd\": "},
      post("missing_field", "/invariants", json::object()),
  };
}

/// Golden file text for one response: status line, then the body.
inline std::string transcript(const knotlab::Response &r) { return "HTTP " + std::to_string(r.status) + "\n" + r.body; }

} // namespace testsupport
