// knotlab command-line tool. Exit status: 0 success, 1 domain error or a
// negative answer (invalid diagram or coloring, unsolved puzzle), 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "knotlab/http_server.hpp"
#include "knotlab/knotlab.hpp"

#include <CLI11.hpp>

namespace {

using namespace knotlab;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> pds, catalogs;
  std::string format = "text";
  std::string out;
  std::optional<long> budget;
  std::uint64_t seed = 0;
  int moves = 5;
  std::string base = "unknot";
  std::vector<std::string> kinds;
  std::optional<int> apply_index;
  int max_extra = 2;
  std::optional<int> crossing_cap;
  std::string colors;
  bool labels = false;
  std::string file;
  ServiceConfig serve;
};

bool structured(const Options &o) { return o.format == "structured"; }

std::string signed_int(int v) { return (v > 0 ? "+" : "") + std::to_string(v); }

std::string crossings(int n) { return std::to_string(n) + (n == 1 ? " crossing" : " crossings"); }

std::string join(const std::vector<int> &v, const std::string &sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

/// Diagrams in the order their flags appeared on the command line.
std::vector<Diagram> diagrams(const CLI::App &cmd, const Options &o) {
  std::vector<Diagram> out;
  std::size_t pd_i = 0, cat_i = 0;
  for (const CLI::Option *opt : cmd.parse_order()) {
    if (opt->get_name() == "--pd")
      out.push_back(parse_pd(o.pds.at(pd_i++)));
    else if (opt->get_name() == "--catalog")
      out.push_back(catalog_get(o.catalogs.at(cat_i++)).diagram);
  }
  return out;
}

Diagram one_diagram(const CLI::App &cmd, const Options &o) {
  auto ds = diagrams(cmd, o);
  if (ds.size() != 1)
    throw UsageError("give exactly one diagram with --pd or --catalog");
  return ds.front();
}

std::string describe(const MoveSite &s) {
  std::string t = std::string(to_string(s.kind)) + " " + to_string(s.direction);
  if (s.locus.empty())
    t += " on a free loop";
  else
    t += (s.locus.size() == 1 ? " at edge " : " at edges ") + join(s.locus);
  if (s.type() == kR1Grow)
    t += ", sign " + signed_int(s.sign) + ", " + to_string(s.side) + " side";
  else if (s.self_fold())
    t += std::string(", folded ") + (s.over == 0 ? "over" : "under") + " itself, kink on the " + to_string(s.side);
  else if (s.type() == kR2Grow)
    t += ", edge " + std::to_string(s.locus.at(static_cast<std::size_t>(s.over))) + " over, sides " +
         to_string(s.sides[0]) + "/" + to_string(s.sides[1]);
  return t;
}

void print_path(std::ostream &os, const std::vector<MoveSite> &path) {
  for (std::size_t i = 0; i < path.size(); ++i)
    os << "  " << i + 1 << ". " << describe(path[i]) << "\n";
}

void emit(const Options &o, const json &j, const std::string &text) {
  std::string body = structured(o) ? j.dump(2) + "\n" : text;
  if (o.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(o.out, std::ios::trunc);
  f << body;
  if (!f)
    throw std::runtime_error("could not write " + o.out);
}

std::string read_file(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw NotFound("cannot open " + path, path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Puzzle load_puzzle(const std::string &path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error &e) {
    throw SyntaxError(path + " is not a puzzle file", e.byte);
  }
  return j.get<Puzzle>();
}

// ---------------------------------------------------------------------------

void cmd_parse(const CLI::App &cmd, const Options &o) {
  auto d = one_diagram(cmd, o);
  auto t = trace(d);
  std::ostringstream s;
  s << emit_pd(d) << "\n"
    << "gauss: " << emit_gauss(d) << "\n"
    << "crossings: " << d.crossing_count() << "\n"
    << "components: " << t.components << "\n"
    << "arcs: " << t.arcs.arc_count << "\n"
    << "faces: " << t.faces << "\n";
  emit(o, json{{"diagram", d}, {"gauss", emit_gauss(d)}, {"trace", t}}, s.str());
}

int cmd_validate(const Options &o) {
  if (o.pds.size() + o.catalogs.size() != 1)
    throw UsageError("give exactly one diagram with --pd or --catalog");
  Diagram d = o.pds.empty() ? catalog_get(o.catalogs.front()).diagram : parse_pd_unchecked(o.pds.front());
  auto r = validate(d);
  std::ostringstream s;
  if (r.ok())
    s << "valid\n";
  for (const auto &f : r.findings)
    s << f.code << ": " << f.message << "\n";
  emit(o, json{{"report", r}}, s.str());
  return r.ok() ? 0 : 1;
}

void cmd_invariants(const CLI::App &cmd, const Options &o) {
  auto d = one_diagram(cmd, o);
  auto r = invariant_report(d, static_cast<int>(o.budget.value_or(kDefaultBracketBudget)));
  std::ostringstream s;
  s << "diagram: " << emit_pd(d) << "\n"
    << "crossings: " << d.crossing_count() << "\n"
    << "components: " << r.components << "\n"
    << "tricolor count: " << r.tricolor.count << (r.tricolor.tricolorable ? " (tricolorable)" : " (not tricolorable)")
    << "\n"
    << "writhe: " << signed_int(r.signs.writhe) << "\n"
    << "linking numbers: " << (r.linking.empty() ? "none" : join(r.linking, " ")) << "\n";
  if (r.bracket) {
    s << "bracket: " << r.bracket->to_string() << "\n"
      << "jones: " << r.jones->to_string() << "\n";
  } else {
    s << "bracket: skipped (" << d.crossing_count() << " crossings, budget " << r.budget << ")\n"
      << "jones: skipped\n";
  }
  emit(o, r, s.str());
}

void cmd_moves(const CLI::App &cmd, const Options &o) {
  auto d = one_diagram(cmd, o);
  MoveSet kinds = o.kinds.empty() ? kAllMoves : parse_move_kinds(o.kinds);
  auto sites = enumerate_sites(d, kinds);
  if (o.apply_index) {
    const int i = *o.apply_index;
    if (i < 1 || i > static_cast<int>(sites.size()))
      throw InvalidSite("site " + std::to_string(i) + " does not exist; there are " + std::to_string(sites.size()));
    const auto &site = sites[static_cast<std::size_t>(i - 1)];
    auto next = apply_move(d, site);
    emit(o, json{{"site", site}, {"diagram", next}}, describe(site) + "\n" + emit_pd(next) + "\n");
    return;
  }
  std::ostringstream s;
  s << sites.size() << " sites\n";
  print_path(s, sites);
  emit(o, json{{"sites", sites}}, s.str());
}

void cmd_simplify(const CLI::App &cmd, const Options &o) {
  auto d = one_diagram(cmd, o);
  auto r = simplify(d, o.max_extra, o.budget.value_or(kDefaultNodeBudget));
  std::ostringstream s;
  const int n = r.crossing_upper_bound();
  if (r.path.empty())
    s << crossings(n) << " (no reduction found)\n";
  else {
    s << crossings(n) << " after " << r.path.size() << " moves (from " << d.crossing_count() << ")\n";
    print_path(s, r.path);
    s << emit_pd(r.diagram) << "\n";
  }
  if (r.budget_exhausted)
    s << "search budget exhausted after " << r.stats.nodes_expanded << " nodes\n";
  emit(o, r, s.str());
}

void cmd_equiv(const CLI::App &cmd, const Options &o) {
  auto ds = diagrams(cmd, o);
  if (ds.size() != 2)
    throw UsageError("give exactly two diagrams with --pd and --catalog");
  const int cap = o.crossing_cap.value_or(std::max(ds[0].crossing_count(), ds[1].crossing_count()) + 2);
  auto v = decide_equivalent(ds[0], ds[1], cap, o.budget.value_or(kDefaultNodeBudget));
  std::ostringstream s;
  switch (v.outcome) {
  case Outcome::equivalent:
    s << "equivalent (" << v.path.size() << " moves)\n";
    print_path(s, v.path);
    break;
  case Outcome::distinguished:
    s << "distinguished by " << v.separating_invariant->name << ": " << v.separating_invariant->value_a << " vs "
      << v.separating_invariant->value_b << "\n";
    break;
  default:
    s << "unknown (search stopped after " << v.stats.nodes_expanded << " nodes, crossing cap " << cap << ")\n";
  }
  emit(o, v, s.str());
}

Coloring parse_colors(const std::string &text) {
  Coloring c;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "_" || item == "-")
      c.color_of_arc.push_back(kUncolored);
    else if (item == "0" || item == "1" || item == "2")
      c.color_of_arc.push_back(item[0] - '0');
    else
      throw UsageError("colors are a comma list of 0, 1, 2 or _ for uncolored");
  }
  return c;
}

int cmd_color(const CLI::App &cmd, const Options &o) {
  auto d = one_diagram(cmd, o);
  auto fb = check_coloring(d, parse_colors(o.colors));
  std::ostringstream s;
  if (fb.valid)
    s << (fb.monochromatic ? "valid (monochromatic)" : "valid tricoloring") << "\n";
  else
    s << "invalid: two colors meet at crossing" << (fb.violations.size() > 1 ? "s " : " ") << join(fb.violations, " ")
      << "\n";
  s << "colors used: " << fb.colors_used << "\n";
  emit(o, fb, s.str());
  return fb.valid ? 0 : 1;
}

void cmd_render(const CLI::App &cmd, const Options &o) {
  auto d = one_diagram(cmd, o);
  SvgOptions so;
  so.labels = o.labels;
  if (!o.colors.empty())
    so.coloring = parse_colors(o.colors);
  auto l = layout_diagram(d);
  auto svg = to_svg(d, l, so);
  emit(o, json{{"svg", svg}, {"layout", l}}, svg);
}

void cmd_puzzle_new(const Options &o) {
  std::optional<int> budget;
  if (o.budget)
    budget = static_cast<int>(*o.budget);
  auto p = make_puzzle(o.base, o.moves, o.seed, budget);
  const std::string text = json(p).dump(2) + "\n";
  if (o.out.empty())
    std::cout << text;
  else {
    std::ofstream f(o.out, std::ios::trunc);
    f << text;
    if (!f)
      throw std::runtime_error("could not write " + o.out);
    std::cerr << "wrote puzzle " << p.id << " to " << o.out << "\n";
  }
}

void cmd_puzzle_show(const Options &o) {
  auto p = load_puzzle(o.file);
  std::ostringstream s;
  s << "puzzle " << p.id << "\n"
    << "start: " << emit_pd(p.start) << "\n"
    << "crossings: " << p.start.crossing_count() << "\n"
    << "goal: " << (p.target ? "reach " + emit_pd(*p.target) : "at most " + std::to_string(p.target_crossings) + " crossings")
    << "\n"
    << "par: " << p.solution_path.size() << " moves\n";
  if (p.move_budget)
    s << "move budget: " << *p.move_budget << "\n";
  std::string text = s.str();
  auto o2 = o;
  o2.out.clear();
  emit(o2, public_view(p), text);
}

int cmd_puzzle_solve(const Options &o) {
  auto p = load_puzzle(o.file);
  auto s = new_session(p, "replay", 0);
  std::ostringstream text;
  text << "puzzle " << p.id << ": " << crossings(s.current.crossing_count()) << "\n";
  for (std::size_t i = 0; i < p.solution_path.size(); ++i) {
    s = play_move(s, p.solution_path[i], 0);
    text << "  " << i + 1 << ". " << describe(p.solution_path[i]) << " -> " << crossings(s.current.crossing_count()) << "\n";
  }
  text << (s.completed ? "solved" : "not solved") << "\n";
  auto sc = score(s);
  auto o2 = o;
  o2.out.clear();
  emit(o2, json{{"solved", sc.solved}, {"moves_used", sc.moves_used}, {"par", sc.par}, {"final", s.current}},
       text.str());
  return s.completed ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"knotlab: knot and link diagrams, Reidemeister moves and invariants"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "structured"}));

  const auto diagram_flags = [&](CLI::App *c) {
    c->add_option("--pd", o.pds, "Diagram as PD text, e.g. \"X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)\"")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    c->add_option("--catalog", o.catalogs, "Catalog diagram name")
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
        ->check(CLI::IsMember(catalog_names()));
    c->add_option("--out", o.out, "Write output to this file instead of stdout");
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "structured"}));
  };

  auto *parse = app.add_subcommand("parse", "Parse a diagram and print its canonical PD and structure");
  diagram_flags(parse);
  auto *validate_cmd = app.add_subcommand("validate", "Report structural problems in a PD code");
  diagram_flags(validate_cmd);
  auto *inv = app.add_subcommand("invariants", "Tricolorings, writhe, linking numbers, bracket and Jones");
  diagram_flags(inv);
  inv->add_option("--budget", o.budget, "Largest crossing count for the bracket");
  auto *moves = app.add_subcommand("moves", "List Reidemeister move sites, or apply one");
  diagram_flags(moves);
  moves->add_option("--kinds", o.kinds, "Filter: R1 R2 R3 R1-reduce R1-grow R2-reduce R2-grow")->delimiter(',');
  moves->add_option("--apply", o.apply_index, "Apply the numbered site and print the result");
  auto *simp = app.add_subcommand("simplify", "Search for a diagram with fewer crossings");
  diagram_flags(simp);
  simp->add_option("--budget", o.budget, "Search node budget");
  simp->add_option("--max-extra", o.max_extra, "Crossings the search may add above the current minimum");
  auto *equiv = app.add_subcommand("equiv", "Decide whether two diagrams are related by Reidemeister moves");
  diagram_flags(equiv);
  equiv->add_option("--budget", o.budget, "Search node budget");
  equiv->add_option("--cap", o.crossing_cap, "Largest crossing count the search may visit");
  auto *color = app.add_subcommand("color", "Check an arc coloring against the tricoloring rule");
  diagram_flags(color);
  color->add_option("--colors", o.colors, "Comma list of arc colors (0, 1, 2; _ for uncolored)")->required();
  auto *render = app.add_subcommand("render", "Draw the diagram as SVG");
  diagram_flags(render);
  render->add_option("--colors", o.colors, "Color arcs with a tricoloring");
  render->add_flag("--labels", o.labels, "Print edge labels");

  auto *puzzle = app.add_subcommand("puzzle", "Scramble puzzles");
  puzzle->require_subcommand(1);
  auto *pnew = puzzle->add_subcommand("new", "Scramble a catalog diagram into a puzzle file");
  pnew->add_option("--base", o.base, "Catalog diagram to scramble")->check(CLI::IsMember(catalog_names()));
  pnew->add_option("--moves", o.moves, "Scramble length")->check(CLI::Range(0, 64));
  pnew->add_option("--seed", o.seed, "Random seed");
  pnew->add_option("--budget", o.budget, "Move budget for players");
  pnew->add_option("--out", o.out, "Puzzle file to write");
  auto *psolve = puzzle->add_subcommand("solve", "Replay a puzzle's hidden solution");
  psolve->add_option("file", o.file, "Puzzle file")->required();
  psolve->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "structured"}));
  auto *pshow = puzzle->add_subcommand("show", "Describe a puzzle without its solution");
  pshow->add_option("file", o.file, "Puzzle file")->required();
  pshow->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "structured"}));

  auto *serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--host", o.serve.host, "Address to bind");
  serve_cmd->add_option("--port", o.serve.port, "Port to listen on");
  serve_cmd->add_option("--sessions", o.serve.session_dir, "Directory for session files");
  serve_cmd->add_option("--bracket-budget", o.serve.bracket_budget, "Largest crossing count for bracket and Jones");
  serve_cmd->add_option("--budget", o.serve.node_budget, "Search node budget cap");
  serve_cmd->add_option("--crossing-cap", o.serve.crossing_cap, "Largest crossing cap for equivalence searches");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*parse)
      cmd_parse(*parse, o);
    else if (*validate_cmd)
      return cmd_validate(o);
    else if (*inv)
      cmd_invariants(*inv, o);
    else if (*moves)
      cmd_moves(*moves, o);
    else if (*simp)
      cmd_simplify(*simp, o);
    else if (*equiv)
      cmd_equiv(*equiv, o);
    else if (*color)
      return cmd_color(*color, o);
    else if (*render)
      cmd_render(*render, o);
    else if (*pnew)
      cmd_puzzle_new(o);
    else if (*psolve)
      return cmd_puzzle_solve(o);
    else if (*pshow)
      cmd_puzzle_show(o);
    else if (*serve_cmd)
      serve(o.serve);
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const Error &e) {
    if (structured(o))
      std::cout << error_json(e).dump(2) << "\n";
    else
      std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
