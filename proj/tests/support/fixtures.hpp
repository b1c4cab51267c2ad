// Chart fixtures shared across the test suite.
#pragma once

#include "conetop/cone_chart.hpp"
#include "conetop/interlace.hpp"

namespace fx {

using namespace conetop;

struct ChartPair {
  Ambient amb;
  ConeChart phi, psi;
};

inline BaseGraph three_points() { return make_base_graph(3, {}); }

inline BaseGraph path3() { return make_base_graph(3, {{0, 1}, {1, 2}}); }

inline BaseGraph square_cycle() {
  return make_base_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}

// Two copies of the flat radial chart over three isolated points.
inline ChartPair identity_pair() {
  BaseGraph g = three_points();
  Ambient amb = make_graph_cone(g);
  ConeChart phi =
      make_radial_chart(amb, g, base_iso_identity(g), base_func_const(g, Rat(0)));
  return {amb, phi, phi};
}

// Same chart against a copy displaced by (1/2, -1/2, 0) per ray.
inline ChartPair offset_pair() {
  ChartPair p = identity_pair();
  p.psi = make_offset_chart(
      p.phi, make_base_func(three_points(), {Rat(1, 2), Rat(-1, 2), Rat(0)}));
  return p;
}

// Square gauge chart: level polygon corners at width * (+-1, +-1), width 6
// near the vertex end of the profile, 4 at level 1/2, then 2/t.
inline ConeChart square_chart(const Ambient& amb, const Vec2& center) {
  BaseGraph g = square_cycle();
  std::vector<Vec2> dirs{{Rat(1), Rat(1)},
                         {Rat(-1), Rat(1)},
                         {Rat(-1), Rat(-1)},
                         {Rat(1), Rat(-1)}};
  WidthProfile prof = make_width_profile(Rat(6), {{Rat(1, 2), Rat(4)}});
  return make_planar_chart(amb, g, dirs, center, prof);
}

// Two square charts in the open square of halfwidth 8, the second centered
// at (1/8, 0); the pair is 2-interlaced with distinct vertices.
inline ChartPair planar_pair() {
  Ambient amb = make_plane(Rat(8));
  return {amb, square_chart(amb, {Rat(0), Rat(0)}),
          square_chart(amb, {Rat(1, 8), Rat(0)})};
}

} // namespace fx
