#include <gtest/gtest.h>

#include <filesystem>

#include <unistd.h>

#include "cli_cases.hpp"
#include "golden.hpp"
#include "support.hpp"

using namespace knotlab;
using testsupport::run_cli;
namespace fs = std::filesystem;

TEST(CliGolden, EveryCaseMatchesOutputAndExitCode) {
  for (const auto &c : testsupport::cli_cases()) {
    SCOPED_TRACE(c.name);
    auto r = run_cli(c.args);
    EXPECT_EQ(r.exit_code, c.exit_code) << c.args;
    EXPECT_GOLDEN("cli/" + c.name + ".txt", "exit " + std::to_string(r.exit_code) + "\n" + r.out);
  }
}

TEST(Cli, ErrorsGoToStderr) {
  auto quiet = run_cli("parse --pd 'X(1,5,2'");
  EXPECT_EQ(quiet.out, "");
  auto loud = run_cli("parse --pd 'X(1,5,2'", true);
  EXPECT_NE(loud.out.find("SYNTAX"), std::string::npos) << loud.out;
}

TEST(Cli, StructuredOutputIsJson) {
  auto r = run_cli("invariants --catalog trefoil --format structured");
  ASSERT_EQ(r.exit_code, 0);
  auto j = json::parse(r.out);
  EXPECT_EQ(j["tricolor"]["count"], 9);
  EXPECT_EQ(j["jones"]["text"], "-t^4 + t^3 + t");
}

TEST(Cli, EquivalenceOrderFollowsCommandLine) {
  auto ab = json::parse(run_cli("equiv --catalog trefoil --catalog hopf --format structured").out);
  auto ba = json::parse(run_cli("equiv --catalog hopf --catalog trefoil --format structured").out);
  EXPECT_EQ(ab["separating_invariant"]["value_a"], "1");
  EXPECT_EQ(ba["separating_invariant"]["value_a"], "2");
}

TEST(Cli, PuzzleFileRoundTrip) {
  const auto file = fs::temp_directory_path() / ("knotlab-cli-" + std::to_string(::getpid()) + ".json");
  auto made = run_cli("puzzle new --base trefoil --moves 4 --seed 3 --out '" + file.string() + "'");
  ASSERT_EQ(made.exit_code, 0);
  auto p = json::parse(testsupport::read_file(file)).get<Puzzle>();
  EXPECT_EQ(json(p), json(make_puzzle("trefoil", 4, 3)));

  auto solved = run_cli("puzzle solve '" + file.string() + "'");
  EXPECT_EQ(solved.exit_code, 0);
  EXPECT_NE(solved.out.find("solved"), std::string::npos) << solved.out;

  auto shown = run_cli("puzzle show '" + file.string() + "' --format structured");
  EXPECT_EQ(shown.exit_code, 0);
  auto view = json::parse(shown.out);
  EXPECT_FALSE(view.contains("solution_path"));
  EXPECT_EQ(view["par"], 4);
  fs::remove(file);
}

TEST(Cli, OutFlagWritesFile) {
  const auto file = fs::temp_directory_path() / ("knotlab-svg-" + std::to_string(::getpid()) + ".svg");
  auto r = run_cli("render --catalog hopf --out '" + file.string() + "'");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "");
  const auto svg = testsupport::read_file(file);
  EXPECT_EQ(svg, to_svg(testsupport::cat("hopf"), layout_diagram(testsupport::cat("hopf"))));
  fs::remove(file);
}

TEST(Cli, HelpExitsCleanly) {
  auto r = run_cli("--help");
  EXPECT_EQ(r.exit_code, 0);
  for (const char *sub : {"parse", "validate", "invariants", "moves", "simplify", "equiv", "color", "render",
                          "puzzle", "serve"})
    EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
}
