// The verification harness: honest constructions pass every check, and each
// named check catches a deliberately corrupted construction with a concrete
// counterexample. Every mutant below documents the corruption it plants and
// the one check that is expected to flag it; a corruption may trip other
// checks too, but the targeted check must fail.
#include <memory>
#include <vector>

#include "support/catch.hpp"
#include "support/fixtures.hpp"

#include "conetop/moves.hpp"
#include "conetop/promotion.hpp"
#include "conetop/verify.hpp"
#include "conetop/vertex_swap.hpp"

using namespace conetop;

namespace {

Rat Q(const char* s) { return rat_parse(s); }

void expect_fail(const VerificationReport& rep, const std::string& check) {
  const CheckResult* c = find_check(rep, check);
  REQUIRE(c != nullptr);
  REQUIRE(!c->pass);
  REQUIRE(!c->counterexample.empty());
}

void expect_all_pass(const VerificationReport& rep) {
  INFO(report_text(rep));
  REQUIRE(rep.pass());
  for (const CheckResult& c : rep.checks) REQUIRE(c.samples > 0);
}

// A scaled copy of the square-chart geometry parked near the ambient edge,
// far outside the images of the standard planar pair.
ConeChart far_chart(const Ambient& amb, const Rat& cx) {
  BaseGraph g = fx::square_cycle();
  std::vector<Vec2> dirs{{Rat(1), Rat(1)},
                         {Rat(-1), Rat(1)},
                         {Rat(-1), Rat(-1)},
                         {Rat(1), Rat(-1)}};
  WidthProfile prof = scale_width_profile(
      make_width_profile(Rat(6), {{Rat(1, 2), Rat(4)}}), Rat(1, 8));
  return make_planar_chart(amb, g, dirs, {cx, Rat(0)}, prof);
}

} // namespace

TEST_CASE("honest vertex swaps pass the full suite") {
  fx::ChartPair f0 = fx::identity_pair();
  InterlacedPair p0 = make_interlaced_pair(f0.phi, f0.psi);
  VerificationReport r0 = verify_vertex_swap(p0, build_vertex_swap(p0), 7);
  expect_all_pass(r0);
  REQUIRE(r0.notes.size() == 1);

  fx::ChartPair off = fx::offset_pair();
  InterlacedPair po = make_interlaced_pair(off.phi, off.psi);
  expect_all_pass(verify_vertex_swap(po, build_vertex_swap(po), 7));

  fx::ChartPair f2 = fx::planar_pair();
  InterlacedPair p2 = make_interlaced_pair(f2.phi, f2.psi);
  expect_all_pass(verify_vertex_swap(p2, build_vertex_swap(p2), 7));
}

TEST_CASE("both swap constructions pass the black-box contract") {
  fx::ChartPair f2 = fx::planar_pair();
  InterlacedPair p2 = make_interlaced_pair(f2.phi, f2.psi);
  expect_all_pass(verify_swap_contract(p2, swap_as_piecewise(build_vertex_swap(p2)), 7));
  expect_all_pass(verify_swap_contract(p2, build_vertex_swap_via_tower(f2.phi, f2.psi), 7));

  fx::ChartPair f0 = fx::identity_pair();
  InterlacedPair p0 = make_interlaced_pair(f0.phi, f0.psi);
  expect_all_pass(verify_swap_contract(p0, build_vertex_swap_via_tower(f0.phi, f0.psi), 7));
}

TEST_CASE("honest promotions pass at several depths") {
  fx::ChartPair f0 = fx::identity_pair();
  ChartTower tw = make_chart_tower(f0.phi, f0.psi, 3);
  for (int k = 2; k <= 4; ++k)
    expect_all_pass(verify_promotion(tw.stage[size_t(k) - 2], f0.psi, k,
                                     tw.stage[size_t(k) - 1], 7));
}

TEST_CASE("honest limit charts pass on flat and planar pairs") {
  fx::ChartPair f0 = fx::identity_pair();
  InterlacedPair p0 = make_interlaced_pair(f0.phi, f0.psi);
  auto tw0 = std::make_shared<ChartTower>(make_chart_tower(f0.phi, f0.psi));
  expect_all_pass(verify_limit_chart(p0, limit_view(tw0), 7));

  fx::ChartPair f2 = fx::planar_pair();
  InterlacedPair p2 = make_interlaced_pair(f2.phi, f2.psi);
  auto tw2 = std::make_shared<ChartTower>(make_chart_tower(f2.phi, f2.psi));
  expect_all_pass(verify_limit_chart(p2, limit_view(tw2), 7));
}

TEST_CASE("honest generic maps pass and reports carry sample counts") {
  fx::ChartPair f0 = fx::identity_pair();
  InterlacedPair p0 = make_interlaced_pair(f0.phi, f0.psi);
  std::vector<AmbientPoint> probes = probe_points(f0.amb);
  VerificationReport rep =
      verify_generic_homeo(swap_as_piecewise(build_vertex_swap(p0)), probes, 7);
  expect_all_pass(rep);
  REQUIRE(find_check(rep, "determinism")->samples == long(probes.size()));
  expect_all_pass(verify_generic_homeo(ph_identity(f0.amb), probes, 7));

  std::string text = report_text(rep);
  REQUIRE(text.find("subject: generic homeomorphism: swap") != std::string::npos);
  REQUIRE(text.find("status: PASS") != std::string::npos);
  REQUIRE(text.find("pass  inverse round trip") != std::string::npos);
}

TEST_CASE("failing reports name the check and the counterexample") {
  fx::ChartPair f0 = fx::identity_pair();
  InterlacedPair p0 = make_interlaced_pair(f0.phi, f0.psi);
  SwapHomeo mh = build_vertex_swap(p0);
  // Corrupt the transfer maps so the pocket lands one level short.
  mh.maps.lift = pl_make({{Rat(1), Rat(2)}, {Q("7/2"), Q("7/2")}});
  VerificationReport rep = verify_vertex_swap(p0, mh, 7);
  REQUIRE(!rep.pass());
  std::string text = report_text(rep);
  REQUIRE(text.find("status: FAIL") != std::string::npos);
  REQUIRE(text.find("FAIL  inverse round trip") != std::string::npos);
  REQUIRE(text.find("  at ") != std::string::npos);
}

// Mutant: the swap bundle carries a mate chart recentered at (1/4, 0), so
// phi's vertex is sent to the wrong point. Caught by: vertex mapping.
TEST_CASE("mutant swap with a recentered mate fails the vertex mapping check") {
  fx::ChartPair f2 = fx::planar_pair();
  InterlacedPair p2 = make_interlaced_pair(f2.phi, f2.psi);
  SwapHomeo mh = build_vertex_swap(p2);
  mh.pair.psi = fx::square_chart(f2.amb, {Rat(1, 4), Rat(0)});
  expect_fail(verify_vertex_swap(p2, mh, 7), "vertex mapping");
}

// Mutant: a swap built honestly for a shrunken chart pair parked at (7, 0),
// far outside the reference images; it moves points the reference pair never
// touches. Caught by: support. Its internal consistency keeps round trips
// exact, so only the support claim breaks.
TEST_CASE("mutant swap acting outside the chart images fails the support check") {
  fx::ChartPair f2 = fx::planar_pair();
  InterlacedPair p2 = make_interlaced_pair(f2.phi, f2.psi);
  InterlacedPair far = make_interlaced_pair(far_chart(f2.amb, Rat(7)),
                                            far_chart(f2.amb, Rat(7) + Rat(1, 64)));
  SwapHomeo mh = build_vertex_swap(far);
  VerificationReport rep = verify_vertex_swap(p2, mh, 7);
  expect_fail(rep, "support");
  REQUIRE(find_check(rep, "support")->counterexample == "(7,0)");
  REQUIRE(find_check(rep, "inverse round trip")->pass);
}

// Mutant: the lift map starts at level 2 instead of 3, so pocket images land
// one level short of the region the inverse expects. Caught by: inverse
// round trip.
TEST_CASE("mutant swap with a short lift fails the round trip check") {
  fx::ChartPair f0 = fx::identity_pair();
  InterlacedPair p0 = make_interlaced_pair(f0.phi, f0.psi);
  SwapHomeo mh = build_vertex_swap(p0);
  mh.maps.lift = pl_make({{Rat(1), Rat(2)}, {Rat(3) + mh.r, Rat(3) + mh.r}});
  expect_fail(verify_vertex_swap(p0, mh, 7), "inverse round trip");
}

// Mutant: the lift map is the identity, so the pocket formula and the
// adjacent band formula disagree on their shared boundary at phi level 3.
// Caught by: overlap agreement.
TEST_CASE("mutant swap skipping the lift fails the overlap agreement check") {
  fx::ChartPair f0 = fx::identity_pair();
  InterlacedPair p0 = make_interlaced_pair(f0.phi, f0.psi);
  SwapHomeo mh = build_vertex_swap(p0);
  mh.maps.lift = pl_make({{Rat(1), Rat(1)}, {Rat(3) + mh.r, Rat(3) + mh.r}});
  expect_fail(verify_vertex_swap(p0, mh, 7), "overlap agreement");
}

// Mutant: the stretch map overshoots to level 6, pushing pocket images past
// their target region into the next one. Caught by: region mapping.
TEST_CASE("mutant swap with an overshooting stretch fails the region mapping check") {
  fx::ChartPair f0 = fx::identity_pair();
  InterlacedPair p0 = make_interlaced_pair(f0.phi, f0.psi);
  SwapHomeo mh = build_vertex_swap(p0);
  mh.maps.stretch = pl_make({{Rat(2) - mh.r, Rat(2) - mh.r}, {Rat(2), Rat(6)}});
  expect_fail(verify_vertex_swap(p0, mh, 7), "region mapping");
}

// Mutant: the bundle's phi chart has extra deep profile knots, so points the
// reference pair places very deep are classified shallow and land too close
// to the mate's vertex. Caught by: basis mapping.
TEST_CASE("mutant swap misreading deep levels fails the basis mapping check") {
  fx::ChartPair f2 = fx::planar_pair();
  InterlacedPair p2 = make_interlaced_pair(f2.phi, f2.psi);
  SwapHomeo mh = build_vertex_swap(p2);
  BaseGraph g = fx::square_cycle();
  std::vector<Vec2> dirs{{Rat(1), Rat(1)},
                         {Rat(-1), Rat(1)},
                         {Rat(-1), Rat(-1)},
                         {Rat(1), Rat(-1)}};
  WidthProfile deep = make_width_profile(
      Rat(6), {{Rat(1, 2), Rat(4)},
               {Rat(8), Rat(1, 4)},
               {Rat(9), Rat(1, 6)},
               {Rat(10), Rat(1, 8)},
               {Rat(12), Rat(1, 12)}});
  mh.pair.phi = make_planar_chart(f2.amb, g, dirs, {Rat(0), Rat(0)}, deep);
  expect_fail(verify_vertex_swap(p2, mh, 7), "basis mapping");
}

// Mutant: the promoted chart's lower map shifts even the levels it must
// preserve. Caught by: agreement below the seam.
TEST_CASE("mutant promotion moving low levels fails the seam agreement check") {
  fx::ChartPair f0 = fx::identity_pair();
  ConeChart honest = promote(f0.phi, f0.psi, 2);
  TowerStep step = chart_tower(honest);
  step.maps.lower = pl_make({{Rat(1), Q("3/2")}, {Rat(3), Rat(2)}, {Rat(5), Rat(3)}},
                            true, true);
  ConeChart bad;
  bad.ambient = honest.ambient;
  bad.form = std::make_shared<const TowerStep>(std::move(step));
  expect_fail(verify_promotion(f0.phi, f0.psi, 2, bad, 7), "agreement below the seam");
}

// Mutant: the unpromoted chart offered as its own promotion; the planar pair
// is 2- but not 3-interlaced. Caught by: interlacing depth.
TEST_CASE("an unpromoted chart fails the interlacing depth check") {
  fx::ChartPair f2 = fx::planar_pair();
  VerificationReport rep = verify_promotion(f2.phi, f2.psi, 2, f2.phi, 7);
  REQUIRE(find_check(rep, "agreement below the seam")->pass);
  expect_fail(rep, "interlacing depth");
}

// Mutant: the limit chart's eval nudges every finite level upward, so it no
// longer restricts to phi near the vertex end. Caught by: agreement at low
// levels.
TEST_CASE("mutant limit chart shifted off phi fails the low level check") {
  fx::ChartPair f0 = fx::identity_pair();
  InterlacedPair p0 = make_interlaced_pair(f0.phi, f0.psi);
  auto tw = std::make_shared<ChartTower>(make_chart_tower(f0.phi, f0.psi));
  LimitChartView v = limit_view(tw);
  v.eval = [tw](const BasePoint& y, const Level& t) {
    if (t.inf) return limit_eval(*tw, y, t);
    return limit_eval(*tw, y, level(t.v + Rat(1, 4)));
  };
  expect_fail(verify_limit_chart(p0, v, 7), "agreement at low levels");
}

// Mutant: the limit chart's inverse gives up on deep points and reports them
// outside. Caught by: surjectivity.
TEST_CASE("mutant limit chart dropping deep preimages fails the surjectivity check") {
  fx::ChartPair f0 = fx::identity_pair();
  InterlacedPair p0 = make_interlaced_pair(f0.phi, f0.psi);
  auto tw = std::make_shared<ChartTower>(make_chart_tower(f0.phi, f0.psi));
  LimitChartView v = limit_view(tw);
  v.invert = [tw](const AmbientPoint& x) {
    ChartPos pos = limit_invert(*tw, x);
    if (pos.kind == ChartPos::Kind::interior && pos.t.v > Rat(9))
      pos.kind = ChartPos::Kind::outside;
    return pos;
  };
  expect_fail(verify_limit_chart(p0, v, 7), "surjectivity");
}

// Mutant: the tower is truncated at stage 3, as if promotion had stopped;
// deep levels then stay too shallow in the mate chart. Caught by:
// continuity at infinity.
TEST_CASE("a truncated tower fails the continuity at infinity check") {
  fx::ChartPair f0 = fx::identity_pair();
  InterlacedPair p0 = make_interlaced_pair(f0.phi, f0.psi);
  auto tw = std::make_shared<ChartTower>(make_chart_tower(f0.phi, f0.psi));
  LimitChartView v = limit_view(tw);
  v.eval = [tw](const BasePoint& y, const Level& t) {
    if (t.inf) return limit_vertex(*tw);
    int i = limit_governing_index(t.v);
    if (i > 3) i = 3;
    return chart_eval(tower_stage(*tw, i), y, t);
  };
  expect_fail(verify_limit_chart(p0, v, 7), "continuity at infinity");
}

// Mutant: eval saturates at level 7, so arbitrarily deep levels pile onto a
// compact set instead of escaping toward the vertex. Caught by: properness.
TEST_CASE("mutant limit chart saturating at level 7 fails the properness check") {
  fx::ChartPair f0 = fx::identity_pair();
  InterlacedPair p0 = make_interlaced_pair(f0.phi, f0.psi);
  auto tw = std::make_shared<ChartTower>(make_chart_tower(f0.phi, f0.psi));
  LimitChartView v = limit_view(tw);
  v.eval = [tw](const BasePoint& y, const Level& t) {
    if (t.inf || t.v <= 7) return limit_eval(*tw, y, t);
    return limit_eval(*tw, y, level(Rat(7)));
  };
  expect_fail(verify_limit_chart(p0, v, 7), "properness");
}

// Mutant: an honest map whose declared support is empty. The planar pair
// keeps the two vertices distinct, so the swap moves probe points and the
// lie about the support is observable. Caught by: support containment.
TEST_CASE("a map with an understated support fails the support containment check") {
  fx::ChartPair f2 = fx::planar_pair();
  InterlacedPair p2 = make_interlaced_pair(f2.phi, f2.psi);
  PiecewiseHomeo mh = ph_with_support(swap_as_piecewise(build_vertex_swap(p2)),
                                      "swap-understated",
                                      [](const AmbientPoint&) { return false; });
  VerificationReport rep = verify_generic_homeo(mh, probe_points(f2.amb), 7);
  expect_fail(rep, "support containment");
  REQUIRE(find_check(rep, "inverse round trip")->pass);
}

// Mutant: the forward map of the swap glued to the identity as its inverse.
// Caught by: inverse round trip.
TEST_CASE("a map glued to the wrong inverse fails the round trip check") {
  fx::ChartPair f2 = fx::planar_pair();
  InterlacedPair p2 = make_interlaced_pair(f2.phi, f2.psi);
  PiecewiseHomeo mh = swap_as_piecewise(build_vertex_swap(p2));
  mh.inv = [](const AmbientPoint& x) { return x; };
  expect_fail(verify_generic_homeo(mh, probe_points(f2.amb), 7), "inverse round trip");
}

// Mutant: a stateful inverse that answers honestly inside the round-trip
// probes but nudges every third call, the one the determinism check makes.
// Caught by: determinism.
TEST_CASE("a stateful map fails the determinism check") {
  fx::ChartPair f0 = fx::identity_pair();
  PiecewiseHomeo mh = ph_identity(f0.amb);
  mh.name = "flicker";
  mh.inv = [n = std::make_shared<int>(0)](const AmbientPoint& x) {
    ++*n;
    if (*n % 3 == 0 && x.tag == AmbientPoint::Tag::ray)
      return ray_point(x.at, x.s + rat_frac(1, 64));
    return x;
  };
  VerificationReport rep = verify_generic_homeo(mh, probe_points(f0.amb), 7);
  expect_fail(rep, "determinism");
  REQUIRE(find_check(rep, "inverse round trip")->pass);
}
