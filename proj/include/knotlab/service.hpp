#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "knotlab/activities.hpp"
#include "knotlab/catalog.hpp"
#include "knotlab/diagram.hpp"
#include "knotlab/equivalence.hpp"
#include "knotlab/errors.hpp"
#include "knotlab/invariants.hpp"
#include "knotlab/moves.hpp"
#include "knotlab/render.hpp"
#include "knotlab/serialize.hpp"

namespace knotlab {

// ---------------------------------------------------------------------------
// Invariant report shared by the service and the CLI

struct InvariantReport {
  Diagram diagram;
  int components = 0;
  TricolorResult tricolor;
  SignData signs;
  std::vector<int> linking;
  int budget = kDefaultBracketBudget;
  std::optional<LaurentPoly> bracket; // unset when the diagram is over budget
  std::optional<LaurentPoly> jones;
};

inline InvariantReport invariant_report(const Diagram &d, int budget) {
  InvariantReport r;
  r.diagram = d;
  r.components = component_count(d);
  r.tricolor = tricolor_count(d);
  r.signs = signs_and_writhe(d);
  r.linking = linking_numbers(d);
  r.budget = budget;
  if (d.crossing_count() <= budget) {
    r.bracket = kauffman_bracket(d, budget);
    r.jones = jones_polynomial(d, budget);
  }
  return r;
}

inline void to_json(json &j, const InvariantReport &r) {
  j = json{{"diagram", r.diagram},
           {"crossings", r.diagram.crossing_count()},
           {"components", r.components},
           {"tricolor", r.tricolor},
           {"signs", r.signs},
           {"linking_numbers", r.linking},
           {"budget", r.budget}};
  j["bracket"] = r.bracket ? json(*r.bracket) : json(nullptr);
  j["jones"] = r.jones ? json(*r.jones) : json(nullptr);
  j["polynomials_skipped"] = !r.bracket;
}

/// Parses a move-type filter such as ["R1", "R2-grow", "R3"]. A bare kind
/// means both of its directions.
inline MoveSet parse_move_kinds(const std::vector<std::string> &kinds) {
  MoveSet set = 0;
  for (const auto &k : kinds) {
    if (k == "R1")
      set |= kR1Reduce | kR1Grow;
    else if (k == "R2")
      set |= kR2Reduce | kR2Grow;
    else if (k == "R3" || k == "R3-slide")
      set |= kR3Slide;
    else if (k == "R1-reduce")
      set |= kR1Reduce;
    else if (k == "R1-grow")
      set |= kR1Grow;
    else if (k == "R2-reduce")
      set |= kR2Reduce;
    else if (k == "R2-grow")
      set |= kR2Grow;
    else if (k == "reduce")
      set |= kReduceMoves;
    else if (k == "grow")
      set |= kGrowMoves;
    else
      throw BadRequest("unknown move kind \"" + k + "\"; use R1, R2, R3, R1-reduce, R1-grow, R2-reduce, R2-grow",
                       k);
  }
  return set;
}

// ---------------------------------------------------------------------------
// Service

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path session_dir = "sessions";
  int bracket_budget = kDefaultBracketBudget; // hard cap on /invariants budget
  long node_budget = kDefaultNodeBudget;      // hard cap on search nodes
  int crossing_cap = 30;                      // hard cap on equivalence search
  std::function<std::int64_t()> clock;        // epoch seconds; system clock when empty
  std::function<std::string()> new_id;        // session ids; random hex when empty
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

inline int status_for(const std::string &code) {
  if (code == "NOT_FOUND")
    return 404;
  if (code == "STRUCTURE" || code == "INVALID_SITE" || code == "BUDGET")
    return 422;
  if (code == "INTERNAL")
    return 500;
  return 400;
}

/// Request dispatcher. handle() is safe to call from many threads; requests
/// that touch the same session are serialized on that session's mutex.
class Service {
public:
  explicit Service(ServiceConfig cfg) : cfg_(std::move(cfg)) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg_.session_dir, ec);
    if (ec || !fs::is_directory(cfg_.session_dir))
      throw std::runtime_error("cannot create session directory " + cfg_.session_dir.string() + ": " + ec.message());
    const auto probe = cfg_.session_dir / ".write-test";
    if (!std::ofstream(probe))
      throw std::runtime_error("session directory " + cfg_.session_dir.string() + " is not writable");
    fs::remove(probe, ec);
    for (const auto &entry : fs::directory_iterator(cfg_.session_dir)) {
      if (entry.path().extension() != ".json")
        continue;
      std::ifstream in(entry.path());
      std::stringstream buf;
      buf << in.rdbuf();
      Session s;
      try {
        s = json::parse(buf.str()).get<Session>();
      } catch (const std::exception &e) {
        throw std::runtime_error("corrupt session file " + entry.path().string() + ": " + e.what());
      }
      auto slot = std::make_shared<Slot>();
      slot->session = std::move(s);
      sessions_[slot->session.session_id] = slot;
    }
  }

  const ServiceConfig &config() const { return cfg_; }

  std::size_t session_count() const {
    std::lock_guard lock(map_mutex_);
    return sessions_.size();
  }

  Response handle(const std::string &method, const std::string &path, const std::string &body) {
    try {
      return {200, route(method, path, body).dump(2) + "\n"};
    } catch (const Error &e) {
      return {status_for(e.code()), error_json(e).dump(2) + "\n"};
    } catch (const std::exception &e) {
      return {500, error_json("INTERNAL", e.what()).dump(2) + "\n"};
    }
  }

private:
  struct Slot {
    std::mutex mutex;
    Session session;
  };

  static json parse_body(const std::string &body) {
    if (body.find_first_not_of(" \t\r\n") == std::string::npos)
      return json::object();
    try {
      return json::parse(body);
    } catch (const json::parse_error &e) {
      // The parser counts bytes read; offsets elsewhere are 0-based.
      throw SyntaxError("request body is not valid JSON", e.byte > 0 ? e.byte - 1 : 0);
    }
  }

  static Diagram diagram_field(const json &j, const char *key) {
    const auto &v = detail::field(j, key);
    try {
      return v.get<Diagram>();
    } catch (const json::exception &e) {
      throw BadRequest(std::string("field '") + key + "' is not a diagram: " + e.what(), key);
    }
  }

  template <class T> static T optional_field(const json &j, const char *key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null())
      return fallback;
    return detail::field_as<T>(j, key);
  }

  std::int64_t now() const {
    if (cfg_.clock)
      return cfg_.clock();
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
  }

  std::string fresh_id() {
    if (cfg_.new_id)
      return cfg_.new_id();
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
    return buf;
  }

  void persist(const Session &s) const {
    const auto file = cfg_.session_dir / (s.session_id + ".json");
    const auto tmp = cfg_.session_dir / (s.session_id + ".json.tmp");
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << json(s).dump(2) << "\n";
      if (!out)
        throw std::runtime_error("could not write " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
  }

  std::shared_ptr<Slot> slot_for(const std::string &id) {
    std::lock_guard lock(map_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end())
      throw NotFound("no session with id '" + id + "'", id);
    return it->second;
  }

  json route(const std::string &method, const std::string &path, const std::string &body) {
    const auto need = [&](const char *want) {
      if (method != want)
        throw BadRequest(path + " expects " + want + ", got " + method);
    };
    if (path == "/catalog") {
      need("GET");
      return catalog_json();
    }
    if (path.rfind("/session/", 0) == 0)
      return session_route(method, path.substr(9), body);

    using Handler = json (Service::*)(const json &);
    static const std::map<std::string, Handler> post_routes{
        {"/parse", &Service::do_parse},
        {"/validate", &Service::do_validate},
        {"/invariants", &Service::do_invariants},
        {"/moves/enumerate", &Service::do_enumerate},
        {"/moves/apply", &Service::do_apply},
        {"/coloring/check", &Service::do_coloring},
        {"/equivalence", &Service::do_equivalence},
        {"/render", &Service::do_render},
        {"/puzzle/new", &Service::do_puzzle_new},
    };
    auto it = post_routes.find(path);
    if (it == post_routes.end())
      throw NotFound("no endpoint " + method + " " + path, path);
    need("POST");
    return (this->*it->second)(parse_body(body));
  }

  static json catalog_json() {
    json entries = json::array();
    for (const auto &e : catalog()) {
      json item{{"name", e.name}, {"diagram", e.diagram}, {"notes", e.notes}};
      item["preset_layout"] = e.preset_layout ? json(*e.preset_layout) : json(nullptr);
      entries.push_back(item);
    }
    return json{{"entries", entries}};
  }

  json do_parse(const json &req) {
    auto d = diagram_field(req, "pd");
    return json{{"diagram", d}, {"gauss", emit_gauss(d)}, {"trace", trace(d)}};
  }

  /// Unlike every other endpoint, structural problems are the answer here
  /// rather than an error; only unreadable input fails.
  json do_validate(const json &req) {
    const auto &pd = detail::field(req, "pd");
    Diagram d;
    if (pd.is_string())
      d = parse_pd_unchecked(pd.get<std::string>());
    else {
      auto quads = detail::field_as<std::vector<Quad>>(pd, "crossings");
      d = Diagram::from_quads(quads, optional_field<int>(pd, "free_loops", 0));
    }
    return json{{"report", validate(d)}};
  }

  json do_invariants(const json &req) {
    auto d = diagram_field(req, "pd");
    const int budget = optional_field<int>(req, "budget", cfg_.bracket_budget);
    if (budget < 0)
      throw BadRequest("budget must be non-negative");
    if (budget > cfg_.bracket_budget)
      throw BudgetExceeded("requested bracket budget " + std::to_string(budget) + " exceeds the server cap of " +
                               std::to_string(cfg_.bracket_budget),
                           "cap=" + std::to_string(cfg_.bracket_budget));
    return invariant_report(d, budget);
  }

  json do_enumerate(const json &req) {
    auto d = diagram_field(req, "pd");
    MoveSet kinds = kAllMoves;
    if (req.contains("kinds") && !req.at("kinds").is_null())
      kinds = parse_move_kinds(detail::field_as<std::vector<std::string>>(req, "kinds"));
    return json{{"sites", enumerate_sites(d, kinds)}};
  }

  json do_apply(const json &req) {
    auto d = diagram_field(req, "pd");
    auto site = detail::field_as<MoveSite>(req, "site");
    return json{{"diagram", apply_move(d, site)}};
  }

  json do_coloring(const json &req) {
    auto d = diagram_field(req, "pd");
    auto c = detail::field_as<Coloring>(req, "coloring");
    return json{{"feedback", check_coloring(d, c)}};
  }

  json do_equivalence(const json &req) {
    auto a = diagram_field(req, "pd_a");
    auto b = diagram_field(req, "pd_b");
    const json budgets = req.contains("budgets") && !req.at("budgets").is_null() ? req.at("budgets") : json::object();
    const int cap = optional_field<int>(budgets, "crossing_cap",
                                        std::max(a.crossing_count(), b.crossing_count()) + 2);
    const long nodes = optional_field<long>(budgets, "node_budget", cfg_.node_budget);
    const int jones = optional_field<int>(budgets, "jones_budget", cfg_.bracket_budget);
    if (cap > cfg_.crossing_cap)
      throw BudgetExceeded("crossing_cap " + std::to_string(cap) + " exceeds the server cap of " +
                               std::to_string(cfg_.crossing_cap),
                           "cap=" + std::to_string(cfg_.crossing_cap));
    if (nodes > cfg_.node_budget)
      throw BudgetExceeded("node_budget " + std::to_string(nodes) + " exceeds the server cap of " +
                               std::to_string(cfg_.node_budget),
                           "cap=" + std::to_string(cfg_.node_budget));
    if (jones > cfg_.bracket_budget)
      throw BudgetExceeded("jones_budget " + std::to_string(jones) + " exceeds the server cap of " +
                               std::to_string(cfg_.bracket_budget),
                           "cap=" + std::to_string(cfg_.bracket_budget));
    if (cap < 0 || nodes < 0 || jones < 0)
      throw BadRequest("budgets must be non-negative");
    return json(decide_equivalent(a, b, cap, nodes, DistinguishOptions{jones}));
  }

  json do_render(const json &req) {
    auto d = diagram_field(req, "pd");
    const json opts = req.contains("options") && !req.at("options").is_null() ? req.at("options") : json::object();
    SvgOptions so;
    so.gap_width = optional_field<double>(opts, "gap_width", so.gap_width);
    if (!(so.gap_width >= 0))
      throw BadRequest("gap_width must be non-negative");
    so.labels = optional_field<bool>(opts, "labels", false);
    if (opts.contains("coloring") && !opts.at("coloring").is_null())
      so.coloring = opts.at("coloring").get<Coloring>();
    Layout l = opts.contains("layout") && !opts.at("layout").is_null() ? opts.at("layout").get<Layout>()
                                                                       : layout_diagram(d);
    return json{{"svg", to_svg(d, l, so)}, {"layout", l}};
  }

  json do_puzzle_new(const json &req) {
    const auto base = detail::field_as<std::string>(req, "base");
    const int n = detail::field_as<int>(req, "n");
    const auto seed = detail::field_as<std::uint64_t>(req, "seed");
    std::optional<int> move_budget;
    if (req.contains("move_budget") && !req.at("move_budget").is_null())
      move_budget = detail::field_as<int>(req, "move_budget");
    if (n > 64)
      throw BudgetExceeded("scrambles are limited to 64 moves", "cap=64");
    auto p = make_puzzle(base, n, seed, move_budget, optional_field<bool>(req, "exact_target", false));

    auto slot = std::make_shared<Slot>();
    {
      std::lock_guard lock(map_mutex_);
      std::string id;
      do
        id = fresh_id();
      while (sessions_.count(id));
      slot->session = new_session(p, id, now());
      sessions_[id] = slot;
    }
    std::lock_guard lock(slot->mutex);
    persist(slot->session);
    return json{{"puzzle", public_view(p)}, {"session", public_view(slot->session)}};
  }

  json session_route(const std::string &method, const std::string &rest, const std::string &body) {
    const auto slash = rest.find('/');
    const std::string id = rest.substr(0, slash);
    const std::string action = slash == std::string::npos ? "" : rest.substr(slash + 1);
    if (action != "" && action != "move" && action != "reset")
      throw NotFound("no endpoint " + method + " /session/" + rest, rest);
    if (method != (action.empty() ? "GET" : "POST"))
      throw BadRequest("/session/{id}" + (action.empty() ? "" : "/" + action) + " expects " +
                       (action.empty() ? "GET" : "POST") + ", got " + method);
    auto slot = slot_for(id);
    std::lock_guard lock(slot->mutex);
    if (action == "move") {
      auto req = parse_body(body);
      auto site = detail::field_as<MoveSite>(req, "site");
      auto next = play_move(slot->session, site, now());
      persist(next);
      slot->session = std::move(next);
    } else if (action == "reset") {
      auto next = reset_session(slot->session, now());
      persist(next);
      slot->session = std::move(next);
    }
    return public_view(slot->session);
  }

  ServiceConfig cfg_;
  mutable std::mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

} // namespace knotlab
