#pragma once

// Command lines behind the CLI golden files, and a small runner that
// captures stdout and the exit status.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>
#include <vector>

namespace testsupport {

struct CliCase {
  std::string name;
  std::string args; // shell-quoted
  int exit_code;
};

struct CliRun {
  int exit_code = -1;
  std::string out;
};

inline CliRun run_cli(const std::string &args, bool merge_stderr = false) {
  std::string cmd = std::string("'") + KNOTLAB_CLI + "' " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  CliRun r;
  FILE *p = ::popen(cmd.c_str(), "r");
  if (!p)
    return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0)
    r.out.append(buf.data(), n);
  const int status = ::pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::vector<CliCase> cli_cases() {
  const std::string trefoil = "'X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)'";
  return {
      {"parse_trefoil", "parse --pd " + trefoil, 0},
      {"parse_catalog_structured", "parse --catalog hopf --format structured", 0},
      {"parse_syntax_error", "parse --pd 'X(1,5,2'", 1},
      {"validate_ok", "validate --catalog figure_eight", 0},
      {"validate_findings", "validate --pd 'X(1,1,2,3)'", 1},
      {"invariants_trefoil", "invariants --catalog trefoil", 0},
      {"invariants_hopf", "invariants --catalog hopf", 0},
      {"invariants_structured", "invariants --catalog figure_eight --format structured", 0},
      {"invariants_small_budget", "invariants --catalog trefoil --budget 2", 0},
      {"moves_trefoil_r1", "moves --catalog trefoil --kinds R1", 0},
      {"moves_unknot_apply", "moves --pd O --apply 1", 0},
      {"moves_apply_out_of_range", "moves --pd O --apply 9", 1},
      {"simplify_trefoil", "simplify --catalog trefoil", 0},
      {"simplify_scramble", "simplify --pd 'X(1,4,2,5) X(8,4,1,3) X(2,6,3,5) X(7,6,8,7)'", 0},
      {"equiv_trefoil_hopf", "equiv --catalog trefoil --catalog hopf", 0},
      {"equiv_scramble_unknot", "equiv --pd 'X(1,4,2,5) X(8,4,1,3) X(2,6,3,5) X(7,6,8,7)' --catalog unknot", 0},
      {"equiv_structured", "equiv --catalog trefoil --catalog figure_eight --format structured", 0},
      {"color_valid", "color --catalog trefoil --colors 0,1,2", 0},
      {"color_violation", "color --catalog trefoil --colors 0,0,1", 1},
      {"color_partial", "color --catalog trefoil --colors 0,_,1", 1},
      {"render_trefoil", "render --catalog trefoil --labels", 0},
      {"render_colored", "render --catalog trefoil --colors 0,1,2", 0},
      {"puzzle_new", "puzzle new --base unknot --moves 5 --seed 42", 0},
      {"usage_no_subcommand", "", 2},
      {"usage_unknown_subcommand", "frobnicate", 2},
      {"usage_bad_format", "parse --catalog hopf --format xml", 2},
      {"usage_no_diagram", "invariants", 2},
      {"unknown_catalog", "invariants --catalog granny", 2},
      {"unknown_catalog_in_file", "puzzle show /nonexistent/puzzle.json", 1},
  };
}

} // namespace testsupport
