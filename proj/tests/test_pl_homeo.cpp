// Exact-arithmetic core: rationals, levels, PL homeomorphisms, and the
// collar/promotion map factories. Expected values here were derived by hand
// from the defining anchor points before the implementation existed.
#include "support/catch.hpp"
#include "support/random_rat.hpp"

#include "conetop/level.hpp"
#include "conetop/pl_homeo.hpp"
#include "conetop/rational.hpp"

using namespace conetop;
using conetop::testsupport::random_rat_open;
using conetop::testsupport::thrown_code;

namespace {
Rat Q(const char* s) { return rat_parse(s); }
}

TEST_CASE("rational parsing and formatting") {
  REQUIRE(rat_parse("7/2") == Rat(7, 2));
  REQUIRE(rat_parse("-3/9") == Rat(-1, 3));
  REQUIRE(rat_parse("4/6") == Rat(2, 3));
  REQUIRE(rat_parse("0") == 0);
  REQUIRE(rat_str(Rat(7, 2)) == "7/2");
  REQUIRE(rat_str(Rat(-5)) == "-5");
  for (const char* bad : {"", "1.5", "1/0", "a", "1/2/3", " 1", "1 ", "+2", "1/-2", "/3", "2/"}) {
    REQUIRE(thrown_code([&] { rat_parse(bad); }) == errc::parse_error);
  }
}

TEST_CASE("levels") {
  REQUIRE(level(Q("1/2")).v == Rat(1, 2));
  REQUIRE(thrown_code([] { level(Rat(0)); }) == errc::out_of_domain);
  REQUIRE(thrown_code([] { level(Rat(-1)); }) == errc::out_of_domain);
  REQUIRE(level_inf().inf);
  REQUIRE(level_parse("inf") == level_inf());
  REQUIRE(level_parse("3/2") == level(Q("3/2")));
  REQUIRE(level(Rat(1)) < level_inf());
  REQUIRE(level_inf() <= level_inf());
  REQUIRE(level(Rat(2)) > level(Rat(1)));
  REQUIRE(level_str(level_inf()) == "inf");
  REQUIRE(level_str(level(Q("5/3"))) == "5/3");
}

TEST_CASE("pl_make validation") {
  REQUIRE(thrown_code([] { pl_make({{Rat(0), Rat(0)}}); }) == errc::empty_domain);
  REQUIRE(thrown_code([] { pl_make({{Rat(0), Rat(0)}, {Rat(1), Rat(0)}}); }) ==
          errc::non_monotone);
  REQUIRE(thrown_code([] { pl_make({{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}); }) ==
          errc::non_monotone);
  REQUIRE(thrown_code([] { pl_make({{Rat(0), Rat(0)}, {Rat(0), Rat(1)}}); }) ==
          errc::non_monotone);
}

TEST_CASE("pl evaluation, inversion, tails") {
  PLHomeo f = pl_make({{Rat(1), Rat(2)}, {Rat(3), Rat(3)}, {Rat(4), Rat(7)}});
  REQUIRE(pl_eval(f, Rat(1)) == 2);
  REQUIRE(pl_eval(f, Rat(2)) == Q("5/2"));
  REQUIRE(pl_eval(f, Rat(4)) == 7);
  REQUIRE(pl_eval(f, Q("7/2")) == 5);
  REQUIRE(thrown_code([&] { pl_eval(f, Q("1/2")); }) == errc::out_of_domain);
  REQUIRE(thrown_code([&] { pl_eval(f, Rat(5)); }) == errc::out_of_domain);
  REQUIRE(thrown_code([&] { pl_eval(f, level_inf()); }) == errc::out_of_domain);

  PLHomeo g = pl_make({{Rat(0), Rat(1)}, {Rat(2), Rat(2)}}, true, true);
  REQUIRE(pl_eval(g, Rat(-5)) == -4);   // lower tail, offset +1
  REQUIRE(pl_eval(g, Rat(10)) == 10);   // upper tail, offset 0
  REQUIRE(pl_eval(g, level_inf()) == level_inf());

  PLHomeo fi = pl_invert(f);
  REQUIRE(pl_eval(fi, Rat(5)) == Q("7/2"));
  REQUIRE(pl_eval(fi, Rat(2)) == 1);
  REQUIRE(pl_eval_inv(f, Rat(7)) == 4);
}

TEST_CASE("pl composition restricts to the common interval") {
  // f over [2, 6], g over [0, 8] with range [0, 16].
  PLHomeo f = pl_make({{Rat(2), Rat(0)}, {Rat(6), Rat(2)}});
  PLHomeo g = pl_make({{Rat(0), Rat(0)}, {Rat(8), Rat(16)}});
  PLHomeo h = pl_compose(f, g);
  REQUIRE(pl_domain_lo(h).value() == 1);  // g(1) = 2
  REQUIRE(pl_domain_hi(h).value() == 3);  // g(3) = 6
  REQUIRE(pl_eval(h, Rat(2)) == 1);
  REQUIRE(thrown_code([&] { pl_eval(h, Rat(4)); }) == errc::out_of_domain);

  PLHomeo far = pl_make({{Rat(20), Rat(20)}, {Rat(21), Rat(21)}});
  REQUIRE(thrown_code([&] { pl_compose(far, g); }) == errc::domain_mismatch);
  // Touching in exactly one point is still rejected.
  PLHomeo touch = pl_make({{Rat(16), Rat(0)}, {Rat(17), Rat(1)}});
  REQUIRE(thrown_code([&] { pl_compose(touch, g); }) == errc::domain_mismatch);
}

TEST_CASE("pl canonical and equality") {
  PLHomeo a = pl_make({{Rat(0), Rat(0)}, {Rat(1), Rat(1)}, {Rat(2), Rat(2)}});
  REQUIRE(pl_equal(a, pl_identity(Rat(0), Rat(2))));
  PLHomeo b = pl_make({{Rat(0), Rat(3)}, {Rat(1), Rat(4)}}, true, true);
  PLHomeo c = pl_make({{Rat(7), Rat(10)}, {Rat(9), Rat(12)}}, true, true);
  REQUIRE(pl_equal(b, c));  // both are translation by 3 of the whole line
  REQUIRE_FALSE(pl_equal(a, b));
  REQUIRE_FALSE(pl_equal(a, pl_make({{Rat(0), Rat(0)}, {Rat(2), Rat(2)}}, false, true)));
}

TEST_CASE("collar transfer maps, margin 1/2") {
  TransferMaps m = make_transfer_maps(Q("1/2"));
  // stretch: [3/2, 2] -> [3/2, 4]
  REQUIRE(pl_eval(m.stretch, Q("3/2")) == Q("3/2"));
  REQUIRE(pl_eval(m.stretch, Rat(2)) == 4);
  REQUIRE(pl_eval(m.stretch, Q("7/4")) == Q("11/4"));
  REQUIRE(pl_eval_inv(m.stretch, Rat(4)) == 2);
  // lift: [1, 7/2] -> [3, 7/2]
  REQUIRE(pl_eval(m.lift, Rat(1)) == 3);
  REQUIRE(pl_eval(m.lift, Q("7/2")) == Q("7/2"));
  REQUIRE(pl_eval(m.lift, Q("11/4")) == Q("67/20"));
  REQUIRE(pl_eval(m.lift, Q("3/2")) == Q("31/10"));

  PLHomeo pocket = pl_compose(m.lift, m.stretch);
  REQUIRE(pl_eval(pocket, Q("3/2")) == Q("31/10"));
  REQUIRE(pl_domain_lo(pocket).value() == Q("3/2"));
  REQUIRE(pl_domain_hi(pocket).value() == Q("19/10"));  // stretch^-1(7/2)

  REQUIRE(thrown_code([] { make_transfer_maps(Rat(0)); }) == errc::non_positive_r);
  REQUIRE(thrown_code([] { make_transfer_maps(Rat(-1)); }) == errc::non_positive_r);
  REQUIRE(thrown_code([] { make_transfer_maps(Rat(1)); }) == errc::invalid_r);
}

TEST_CASE("collar transfer maps, random margins") {
  std::mt19937_64 rng(20260815);
  for (int i = 0; i < 50; ++i) {
    Rat r = random_rat_open(rng, Rat(0), Rat(1));
    TransferMaps m = make_transfer_maps(r);
    REQUIRE(pl_eval(m.stretch, Rat(2) - r) == Rat(2) - r);
    REQUIRE(pl_eval(m.stretch, Rat(2)) == 4);
    REQUIRE(pl_eval(m.lift, Rat(1)) == 3);
    REQUIRE(pl_eval(m.lift, Rat(3) + r) == Rat(3) + r);
    // Round trips through the inverse.
    Rat t = random_rat_open(rng, Rat(2) - r, Rat(2));
    REQUIRE(pl_eval_inv(m.stretch, pl_eval(m.stretch, t)) == t);
  }
}

TEST_CASE("promotion triple at depth 2, margin 1/2") {
  PromotionTriple t = make_promotion_triple(Q("1/2"), 2);
  REQUIRE(pl_eval(t.lower, Rat(1)) == 1);
  REQUIRE(pl_eval(t.lower, Q("1/2")) == Q("1/2"));
  REQUIRE(pl_eval(t.lower, Rat(3)) == Q("3/2"));
  REQUIRE(pl_eval(t.lower, Rat(5)) == 3);
  REQUIRE(pl_eval(t.lower, Rat(7)) == 5);  // slope-1 tail, offset -2
  REQUIRE(pl_eval(t.lower, level_inf()) == level_inf());
  REQUIRE(pl_eval(t.raise, Rat(2)) == 2);
  REQUIRE(pl_eval(t.raise, Q("5/2")) == 4);
  REQUIRE(pl_eval(t.raise, Rat(3)) == Q("30/7"));
  REQUIRE(pl_eval(t.raise, Rat(6)) == 6);
  REQUIRE(pl_eval(t.raise, Rat(10)) == 10);
  REQUIRE(pl_eval(t.restore, Q("3/2")) == 3);
  REQUIRE(pl_eval(t.restore, Q("15/8")) == Q("99/32"));
  REQUIRE(pl_eval(t.restore, Q("7/2")) == Q("7/2"));
  // restore undoes lower through depth 3.
  PLHomeo round = pl_compose(t.restore, t.lower);
  REQUIRE(pl_fixes_up_to(round, Rat(3)));
  REQUIRE(pl_eval(round, Q("5/2")) == Q("5/2"));
  REQUIRE(pl_eval(round, Rat(5)) != 5);
}

TEST_CASE("promotion triple at depth 3, margin 1/2") {
  PromotionTriple t = make_promotion_triple(Q("1/2"), 3);
  REQUIRE(pl_eval(t.lower, Rat(3)) == 3);
  REQUIRE(pl_eval(t.lower, Rat(5)) == Q("7/2"));
  REQUIRE(pl_eval(t.lower, Rat(7)) == 5);
  REQUIRE(pl_eval(t.lower, Rat(9)) == 7);
  REQUIRE(pl_eval(t.raise, Q("9/2")) == 6);
  REQUIRE(pl_eval(t.restore, Q("7/2")) == 5);
  REQUIRE(pl_fixes_up_to(pl_compose(t.restore, t.lower), Rat(5)));
}

TEST_CASE("promotion triples, random margins and depths") {
  std::mt19937_64 rng(917);
  for (int i = 0; i < 50; ++i) {
    Rat r = random_rat_open(rng, Rat(0), Rat(1));
    for (int k = 2; k <= 6; ++k) {
      PromotionTriple t = make_promotion_triple(r, k);
      const Rat c(2 * k - 1);
      REQUIRE(pl_eval(t.lower, Rat(2 * k + 1)) == c);
      REQUIRE(pl_eval(t.lower, c) == Rat(2 * k - 3) + r);
      REQUIRE(pl_eval(t.raise, Rat(2 * k - 2) + r) == Rat(2 * k));
      REQUIRE(pl_fixes_up_to(pl_compose(t.restore, t.lower), c));
      Rat s = random_rat_open(rng, Rat(1, 2), c);
      REQUIRE(pl_eval(pl_compose(t.restore, t.lower), s) == s);
    }
  }
  REQUIRE(thrown_code([] { make_promotion_triple(Q("1/2"), 1); }) == errc::invalid_k);
  REQUIRE(thrown_code([] { make_promotion_triple(Rat(0), 2); }) == errc::non_positive_r);
  REQUIRE(thrown_code([] { make_promotion_triple(Rat(2), 2); }) == errc::invalid_r);
}

TEST_CASE("inverse composition is the identity on the domain") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 25; ++i) {
    std::vector<std::pair<Rat, Rat>> pts;
    Rat x(-3), y(-7);
    int n = 2 + int(rng() % 4);
    for (int j = 0; j < n; ++j) {
      x += random_rat_open(rng, Rat(0), Rat(3));
      y += random_rat_open(rng, Rat(0), Rat(3));
      pts.emplace_back(x, y);
    }
    PLHomeo f = pl_make(pts);
    PLHomeo round = pl_compose(pl_invert(f), f);
    REQUIRE(pl_equal(round, pl_identity(pts.front().first, pts.back().first)));
    Rat t = random_rat_open(rng, pts.front().first, pts.back().first);
    REQUIRE(pl_eval(round, t) == t);
  }
}
