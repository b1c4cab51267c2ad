// Base graphs, points on them, PL functions and isomorphisms over them.
#include "support/catch.hpp"
#include "support/fixtures.hpp"

#include "conetop/base_graph.hpp"

using namespace conetop;
using conetop::testsupport::thrown_code;

namespace {
Rat Q(const char* s) { return rat_parse(s); }
}

TEST_CASE("graph construction and shape queries") {
  BaseGraph g = make_base_graph(4, {{1, 0}, {3, 0}, {2, 1}, {2, 3}});
  REQUIRE(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {0, 3}, {1, 2}, {2, 3}});
  REQUIRE(graph_degree(g, 0) == 2);
  REQUIRE(graph_edge_index(g, 3, 0) == 1);
  REQUIRE(!graph_edge_index(g, 0, 2));
  REQUIRE(graph_connected(g));
  REQUIRE(graph_is_cycle(g));
  REQUIRE(graph_cycle_order(g) == std::vector<int>{0, 1, 2, 3});

  REQUIRE(thrown_code([] { make_base_graph(0, {}); }) == errc::wrong_graph);
  REQUIRE(thrown_code([] { make_base_graph(2, {{0, 0}}); }) == errc::wrong_graph);
  REQUIRE(thrown_code([] { make_base_graph(2, {{0, 2}}); }) == errc::wrong_graph);
  REQUIRE(thrown_code([] { make_base_graph(2, {{0, 1}, {1, 0}}); }) == errc::wrong_graph);

  REQUIRE(!graph_is_cycle(fx::path3()));
  REQUIRE(!graph_is_cycle(fx::three_points()));
  REQUIRE(!graph_connected(fx::three_points()));

  REQUIRE(base_cardinality(make_base_graph(1, {})) == BaseCard::one);
  REQUIRE(base_cardinality(make_base_graph(2, {})) == BaseCard::two);
  REQUIRE(base_cardinality(fx::three_points()) == BaseCard::many);
  REQUIRE(base_cardinality(make_base_graph(2, {{0, 1}})) == BaseCard::many);
}

TEST_CASE("base points and sampling") {
  BaseGraph g = fx::path3();
  REQUIRE(base_vertex(g, 2).is_vertex());
  REQUIRE(thrown_code([&] { base_vertex(g, 3); }) == errc::wrong_base);
  REQUIRE(base_edge_point(g, 0, Q("1/4")) == (BasePoint{-1, 0, Q("1/4")}));
  REQUIRE(base_edge_point(g, 0, Rat(0)) == base_vertex(g, 0));
  REQUIRE(base_edge_point(g, 1, Rat(1)) == base_vertex(g, 2));
  REQUIRE(thrown_code([&] { base_edge_point(g, 2, Q("1/2")); }) == errc::wrong_base);
  REQUIRE(thrown_code([&] { base_edge_point(g, 0, Rat(2)); }) == errc::wrong_base);
  REQUIRE(base_point_str(base_vertex(g, 1)) == "v1");
  REQUIRE(base_point_str(base_edge_point(g, 1, Q("1/4"))) == "e1:1/4");

  REQUIRE(enumerate_sample_points(fx::square_cycle(), 1).size() == 8);
  REQUIRE(enumerate_sample_points(fx::square_cycle(), 3).size() == 16);
  REQUIRE(enumerate_sample_points(fx::three_points(), 3).size() == 3);
  REQUIRE(enumerate_sample_points(g, 2)[4] == base_edge_point(g, 0, Q("2/3")));
}

TEST_CASE("base functions evaluate piecewise linearly") {
  BaseGraph g = fx::path3();
  BaseFunc f = make_base_func(g, {Rat(0), Rat(1), Rat(0)},
                              {{{Q("1/2"), Q("2")}}, {}});
  REQUIRE(base_func_eval(g, f, base_vertex(g, 1)) == 1);
  REQUIRE(base_func_eval(g, f, base_edge_point(g, 0, Q("1/2"))) == 2);
  REQUIRE(base_func_eval(g, f, base_edge_point(g, 0, Q("1/4"))) == 1);
  REQUIRE(base_func_eval(g, f, base_edge_point(g, 0, Q("3/4"))) == Q("3/2"));
  REQUIRE(base_func_eval(g, f, base_edge_point(g, 1, Q("1/4"))) == Q("3/4"));
  REQUIRE(base_func_min(g, f) == 0);
  REQUIRE(base_func_max(g, f) == 2);

  BaseFunc c = base_func_const(g, Q("-1/3"));
  BaseFunc s = base_func_add(g, f, c);
  REQUIRE(base_func_eval(g, s, base_edge_point(g, 0, Q("1/2"))) == Q("5/3"));
  REQUIRE(base_func_min(g, s) == Q("-1/3"));
  BaseFunc d = base_func_sub(g, f, f);
  REQUIRE(base_func_max(g, d) == 0);

  REQUIRE(thrown_code([&] { make_base_func(g, {Rat(0)}); }) == errc::wrong_graph);
  REQUIRE(thrown_code([&] {
            make_base_func(g, {Rat(0), Rat(0), Rat(0)}, {{{Rat(0), Rat(1)}}, {}});
          }) == errc::non_pl);
  REQUIRE(thrown_code([&] {
            make_base_func(g, {Rat(0), Rat(0), Rat(0)},
                           {{{Q("1/2"), Rat(1)}, {Q("1/4"), Rat(1)}}, {}});
          }) == errc::non_pl);
}

TEST_CASE("merged breakpoints keep combinations exact") {
  BaseGraph g = make_base_graph(2, {{0, 1}});
  BaseFunc f = make_base_func(g, {Rat(0), Rat(0)}, {{{Q("1/3"), Rat(1)}}});
  BaseFunc h = make_base_func(g, {Rat(0), Rat(0)}, {{{Q("2/3"), Rat(1)}}});
  BaseFunc s = base_func_add(g, f, h);
  // Both kinks survive; between them the sum is constant 3/2.
  REQUIRE(base_func_eval(g, s, base_edge_point(g, 0, Q("1/3"))) == Q("3/2"));
  REQUIRE(base_func_eval(g, s, base_edge_point(g, 0, Q("1/2"))) == Q("3/2"));
  REQUIRE(base_func_eval(g, s, base_edge_point(g, 0, Q("2/3"))) == Q("3/2"));
  REQUIRE(base_func_eval(g, s, base_edge_point(g, 0, Q("5/6"))) == Q("3/4"));
  REQUIRE(base_func_max(g, s) == Q("3/2"));
}

TEST_CASE("base isomorphisms validate their data") {
  BaseGraph g = fx::path3();
  REQUIRE(thrown_code([&] { make_base_iso(g, g, {0, 1}); }) == errc::wrong_graph);
  REQUIRE(thrown_code([&] { make_base_iso(g, g, {0, 1, 1}); }) == errc::wrong_graph);
  REQUIRE(thrown_code([&] { make_base_iso(g, g, {1, 0, 2}); }) == errc::wrong_graph);
  REQUIRE(thrown_code([&] { make_base_iso(g, fx::three_points(), {0, 1, 2}); }) ==
          errc::wrong_graph);
  REQUIRE(thrown_code([&] {
            make_base_iso(g, g, {0, 1, 2},
                          {pl_identity(Rat(0), Rat(1)),
                           pl_make({{Rat(0), Rat(0)}, {Q("1/2"), Q("3/4")}})});
          }) == errc::non_pl);
  // Reversing the whole path is a graph isomorphism.
  BaseIso rev = make_base_iso(g, g, {2, 1, 0});
  REQUIRE(rev.emap[0].e == 1);
  REQUIRE(rev.emap[0].rev);
  REQUIRE(base_iso_apply(g, g, rev, base_edge_point(g, 0, Q("1/4"))) ==
          base_edge_point(g, 1, Q("3/4")));
}

TEST_CASE("iso apply, invert, compose round trip") {
  BaseGraph g = fx::square_cycle();
  // Rotate the square one step; two of the four edges come out reversed.
  PLHomeo rho = pl_make({{Rat(0), Rat(0)}, {Q("1/2"), Q("1/4")}, {Rat(1), Rat(1)}});
  BaseIso rot = make_base_iso(g, g, {1, 2, 3, 0}, {rho, rho, rho, rho});
  BaseIso inv = base_iso_invert(g, g, rot);
  BaseIso both = base_iso_compose(g, rot, g, inv);
  BaseIso twice = base_iso_compose(g, rot, g, rot);
  for (const BasePoint& p : enumerate_sample_points(g, 4)) {
    BasePoint q = base_iso_apply(g, g, rot, p);
    REQUIRE(base_iso_apply(g, g, inv, q) == p);
    REQUIRE(base_iso_apply(g, g, both, p) == p);
    REQUIRE(base_iso_apply(g, g, twice, p) ==
            base_iso_apply(g, g, rot, q));
  }
  REQUIRE(base_iso_apply(g, g, rot, base_vertex(g, 3)) == base_vertex(g, 0));
  REQUIRE(base_iso_apply(g, g, rot, base_edge_point(g, 0, Q("1/2"))) ==
          base_edge_point(g, 2, Q("1/4")));
}

TEST_CASE("functions transport along isomorphisms") {
  BaseGraph g = make_base_graph(2, {{0, 1}});
  BaseIso swap = make_base_iso(g, g, {1, 0});
  BaseFunc f = make_base_func(g, {Rat(3), Rat(5)}, {{{Q("1/4"), Rat(10)}}});
  BaseFunc pushed = push_base_func(g, g, swap, f);
  REQUIRE(base_func_eval(g, pushed, base_vertex(g, 0)) == 5);
  REQUIRE(base_func_eval(g, pushed, base_vertex(g, 1)) == 3);
  REQUIRE(base_func_eval(g, pushed, base_edge_point(g, 0, Q("3/4"))) == 10);
  // Transporting f along any iso preserves its value set pointwise.
  for (const BasePoint& p : enumerate_sample_points(g, 7)) {
    BasePoint q = base_iso_apply(g, g, swap, p);
    REQUIRE(base_func_eval(g, pushed, q) == base_func_eval(g, f, p));
  }
  PLHomeo bend = pl_make({{Rat(0), Rat(0)}, {Q("1/3"), Q("2/3")}, {Rat(1), Rat(1)}});
  BaseIso warp = make_base_iso(g, g, {0, 1}, {bend});
  BaseFunc warped = push_base_func(g, g, warp, f);
  for (const BasePoint& p : enumerate_sample_points(g, 7)) {
    BasePoint q = base_iso_apply(g, g, warp, p);
    REQUIRE(base_func_eval(g, warped, q) == base_func_eval(g, f, p));
  }
}

TEST_CASE("flip conjugation mirrors a reparametrization") {
  PLHomeo rho = pl_make({{Rat(0), Rat(0)}, {Q("1/2"), Q("1/4")}, {Rat(1), Rat(1)}});
  PLHomeo flipped = pl_flip_conj01(rho);
  REQUIRE(pl_eval(flipped, Q("1/2")) == Q("3/4"));
  REQUIRE(pl_eval(flipped, Rat(0)) == 0);
  REQUIRE(pl_eval(flipped, Rat(1)) == 1);
  REQUIRE(pl_is_unit_reparam(flipped));
}
