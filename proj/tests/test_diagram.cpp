#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "support.hpp"

using namespace knotlab;
using testsupport::cat;
using testsupport::pd;

namespace {

const char *kTrefoil = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

/// Applies a label permutation to every quad.
Diagram relabel(const Diagram &d, const std::map<int, int> &to) {
  std::vector<Quad> qs;
  for (auto q : d.quads()) {
    for (auto &l : q)
      l = to.at(l);
    qs.push_back(q);
  }
  return Diagram::from_quads(qs, d.free_loops());
}

std::string syntax_detail(const std::string &text) {
  try {
    parse_pd(text);
  } catch (const SyntaxError &e) {
    return e.detail();
  }
  return "accepted";
}

std::vector<std::string> finding_codes(const std::string &text) {
  std::vector<std::string> out;
  for (const auto &f : validate(parse_pd_unchecked(text)).findings)
    out.push_back(f.code);
  return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Parsing and emission

TEST(ParsePd, Trefoil) {
  auto d = pd(kTrefoil);
  EXPECT_EQ(d.crossing_count(), 3);
  EXPECT_EQ(d.edge_count(), 6);
  EXPECT_EQ(d.free_loops(), 0);
  EXPECT_EQ(trace(d).components, 1);
}

TEST(ParsePd, UnknotToken) {
  auto d = pd("O");
  EXPECT_EQ(d.crossing_count(), 0);
  EXPECT_EQ(d.free_loops(), 1);
  EXPECT_EQ(d, Diagram::unknot());
}

TEST(ParsePd, HopfInEitherLabelling) {
  EXPECT_EQ(trace(pd("X(1,4,2,3) X(3,2,4,1)")).components, 2);
  EXPECT_EQ(trace(pd("X(1,3,2,4) X(4,2,3,1)")).components, 2);
}

TEST(ParsePd, WhitespaceAndEmptyInput) {
  EXPECT_EQ(pd("X(1,4,2,5)\nX(3,6,4,1)  \n X(5,2,6,3)"), pd(kTrefoil));
  EXPECT_EQ(syntax_detail(" X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"), "offset=0");
  EXPECT_EQ(syntax_detail("O "), "offset=2");
  EXPECT_TRUE(pd("").empty());
  EXPECT_EQ(pd("O O").free_loops(), 2);
}

TEST(ParsePd, SyntaxErrorsCarryByteOffsets) {
  EXPECT_EQ(syntax_detail("X(1,2,3)"), "offset=7");
  EXPECT_EQ(syntax_detail("not a pd"), "offset=0");
  EXPECT_EQ(syntax_detail("X(0,1,1,0)"), "offset=2");
  EXPECT_EQ(syntax_detail("X(1,4,2,5)X(3,6,4,1)"), "offset=10");
  EXPECT_EQ(syntax_detail("X(1,4,2,5"), "offset=9");
  EXPECT_EQ(syntax_detail("X(-1,4,2,5)"), "offset=2");
}

TEST(ParsePd, StructureErrorsNameTheProblem) {
  try {
    parse_pd("X(1,1,2,2) X(2,2,1,1)");
    FAIL() << "accepted a triple-use diagram";
  } catch (const StructureError &e) {
    EXPECT_NE(e.detail().find("DOUBLE_USE"), std::string::npos) << e.detail();
  }
  EXPECT_THROW(parse_pd("X(1,2,3,4)"), StructureError);
  EXPECT_THROW(parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,7)"), StructureError);
}

TEST(EmitPd, CatalogStrings) {
  EXPECT_EQ(emit_pd(cat("trefoil")), kTrefoil);
  EXPECT_EQ(emit_pd(cat("unknot")), "O");
  EXPECT_EQ(emit_pd(pd("O O")), "O O");
}

TEST(EmitPd, CrossingsSortedBySmallestLabel) {
  auto d = pd("X(5,2,6,3) X(3,6,4,1) X(1,4,2,5)");
  EXPECT_EQ(emit_pd(d), kTrefoil);
}

TEST(EmitPd, RoundTripOnCatalogAndWalks) {
  for (const auto &e : catalog())
    EXPECT_EQ(parse_pd(emit_pd(e.diagram)), e.diagram) << e.name;
  for (const auto &d : testsupport::walk_corpus(20, 8))
    ASSERT_EQ(parse_pd(emit_pd(d)), d) << emit_pd(d);
}

TEST(EmitGauss, TrefoilAlternates) {
  EXPECT_EQ(emit_gauss(cat("trefoil")), "(U1+ O3+ U2+ O1+ U3+ O2+)");
  EXPECT_EQ(emit_gauss(cat("unknot")), "()");
  auto hopf = emit_gauss(cat("hopf"));
  EXPECT_EQ(std::count(hopf.begin(), hopf.end(), '('), 2);
}

// ---------------------------------------------------------------------------
// Validation

TEST(Validate, CatalogIsClean) {
  for (const auto &e : catalog())
    EXPECT_TRUE(validate(e.diagram).ok()) << e.name;
}

TEST(Validate, DoubleUse) {
  auto codes = finding_codes("X(1,1,2,2) X(2,2,1,1)");
  ASSERT_FALSE(codes.empty());
  EXPECT_EQ(codes.front(), "DOUBLE_USE");
}

TEST(Validate, OrientationConflict) {
  // Label 1 is the incoming under-edge at both of its ends.
  auto codes = finding_codes("X(1,3,2,4) X(1,4,2,3)");
  ASSERT_FALSE(codes.empty());
  EXPECT_EQ(codes.front(), "ORIENTATION");
}

TEST(Validate, VirtualPatternFailsEuler) {
  // Consistent labels and orientation, but the rotation system has only
  // 3 faces for 3 crossings and 6 edges, so it does not lie on a sphere.
  auto r = validate(parse_pd_unchecked("X(5,3,4,6) X(1,3,5,2) X(4,6,2,1)"));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.findings.front().code, "EULER");
  EXPECT_THROW(parse_pd("X(5,3,4,6) X(1,3,5,2) X(4,6,2,1)"), StructureError);
}

TEST(Validate, LabelsMustBeDense) {
  auto codes = finding_codes("X(1,4,2,7) X(3,6,4,1) X(7,2,6,3)");
  EXPECT_FALSE(codes.empty());
}

// ---------------------------------------------------------------------------
// Trace

TEST(Trace, Trefoil) {
  auto t = trace(cat("trefoil"));
  EXPECT_EQ(t.components, 1);
  EXPECT_EQ(t.faces, 5);
  EXPECT_EQ(t.arcs.arc_count, 3);
  EXPECT_EQ(t.orientation.size(), 6u);
}

TEST(Trace, Hopf) {
  auto t = trace(cat("hopf"));
  EXPECT_EQ(t.components, 2);
  EXPECT_EQ(t.faces, 4);
  EXPECT_EQ(t.arcs.arc_count, 2);
}

TEST(Trace, Unknot) {
  auto t = trace(cat("unknot"));
  EXPECT_EQ(t.components, 1);
  EXPECT_EQ(t.faces, 2);
  EXPECT_EQ(t.arcs.arc_count, 1);
}

TEST(Trace, OrientationFollowsLabels) {
  // Catalog labels run consecutively along the strand.
  auto t = trace(cat("trefoil"));
  for (int l = 1; l <= 6; ++l) {
    const auto &here = t.orientation.at(l);
    const auto &next = t.orientation.at(l % 6 + 1);
    EXPECT_EQ(here.to_crossing, next.from_crossing);
    EXPECT_EQ((here.to_slot + 2) % 4, next.from_slot);
  }
}

TEST(Trace, ArcsBreakOnlyAtUnderpasses) {
  for (const auto &d : testsupport::walk_corpus(10, 6)) {
    auto t = trace(d);
    for (const auto &c : d.crossings())
      EXPECT_EQ(t.arcs.arc_of_edge.at(c[1]), t.arcs.arc_of_edge.at(c[3]));
    const auto oracle = testsupport::arc_classes(d);
    EXPECT_EQ(static_cast<std::size_t>(t.arcs.edge_arc_count), oracle.size()) << emit_pd(d);
    for (const auto &arc : oracle)
      for (int l : arc)
        EXPECT_EQ(t.arcs.arc_of_edge.at(l), t.arcs.arc_of_edge.at(arc.front()));
  }
}

TEST(Trace, EulerHoldsPerPiece) {
  for (const auto &d : testsupport::walk_corpus(20, 8)) {
    auto t = trace(d);
    auto sk = detail::make_skeleton(d);
    int pieces = 0;
    detail::pieces_of(sk, &pieces);
    // On one sphere: V - E + F = 1 + number of pieces (free loops included).
    const int all = pieces + d.free_loops();
    EXPECT_EQ(d.crossing_count() - d.edge_count() + t.faces, 1 + all) << emit_pd(d);
  }
}

TEST(Trace, ConnectedKnotsHaveOneArcPerCrossing) {
  for (const auto &d : testsupport::walk_corpus(20, 8)) {
    auto t = trace(d);
    if (t.components == 1 && d.free_loops() == 0 && d.crossing_count() > 0) {
      EXPECT_EQ(t.arcs.arc_count, d.crossing_count()) << emit_pd(d);
    }
  }
}

// ---------------------------------------------------------------------------
// Canonical form and mirror

TEST(Canonical, InvariantUnderRelabelling) {
  std::mt19937 rng(99);
  for (const auto &d : testsupport::walk_corpus(15, 8)) {
    // Rotate labels along each component by a random offset.
    auto t = trace(d);
    std::map<int, std::vector<int>> by_comp;
    for (auto [label, comp] : t.component_of_edge)
      by_comp[comp].push_back(label);
    std::map<int, int> to;
    for (auto &[comp, labels] : by_comp) {
      // Order labels along the strand.
      std::vector<int> order{labels.front()};
      auto sk = detail::make_skeleton(d);
      int e = detail::edge_index(sk, labels.front());
      for (std::size_t i = 1; i < labels.size(); ++i) {
        e = sk.next_edge(e);
        order.push_back(sk.labels[static_cast<std::size_t>(e)]);
      }
      std::vector<int> sorted = labels;
      std::sort(sorted.begin(), sorted.end());
      const auto shift = std::uniform_int_distribution<std::size_t>(0, order.size() - 1)(rng);
      for (std::size_t i = 0; i < order.size(); ++i)
        to[order[i]] = sorted[(i + shift) % order.size()];
    }
    auto r = relabel(d, to);
    ASSERT_TRUE(validate(r).ok());
    EXPECT_EQ(canonical(r), canonical(d)) << emit_pd(d) << " vs " << emit_pd(r);
    EXPECT_EQ(canonical_key(r), canonical_key(d));
  }
}

TEST(Canonical, Idempotent) {
  for (const auto &d : testsupport::walk_corpus(10, 8))
    EXPECT_EQ(canonical(canonical(d)), canonical(d));
  for (const auto &e : catalog())
    EXPECT_EQ(canonical(e.diagram), e.diagram) << e.name;
}

TEST(Mirror, InvolutionAndValidity) {
  for (const auto &d : testsupport::walk_corpus(10, 8)) {
    auto m = d.mirror();
    EXPECT_TRUE(validate(m).ok());
    EXPECT_EQ(canonical(m.mirror()), canonical(d));
    EXPECT_EQ(signs_and_writhe(m).writhe, -signs_and_writhe(d).writhe);
  }
}

TEST(Catalog, NamesAndLookup) {
  EXPECT_EQ(catalog_names(), (std::vector<std::string>{"unknot", "trefoil", "figure_eight", "hopf", "solomon"}));
  EXPECT_EQ(cat("trefoil").crossing_count(), 3);
  EXPECT_EQ(trace(cat("hopf")).components, 2);
  try {
    catalog_get("granny");
    FAIL();
  } catch (const NotFound &e) {
    EXPECT_NE(std::string(e.what()).find("figure_eight"), std::string::npos);
  }
}
