// Cone charts over the model ambients, in three forms:
//   radial:  rays of a graph cone or suspension, shifted by a PL offset
//   planar:  nested convex polygon level sets shrinking onto a plane point
//   tower:   a chart rebuilt by one interlacing promotion step from another
// A chart maps base x level to the ambient, sending level infinity to its
// vertex, and deeper levels into every neighbourhood of the vertex.
#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "conetop/ambient.hpp"
#include "conetop/base_graph.hpp"
#include "conetop/errors.hpp"
#include "conetop/level.hpp"
#include "conetop/pl_homeo.hpp"
#include "conetop/planar.hpp"
#include "conetop/rational.hpp"

namespace conetop {

struct RadialChart {
  BaseGraph base;
  BaseIso iso;        // base -> ambient base
  BaseFunc offset;    // ambient height of level t over y is t + offset(y)
  bool south = false; // suspension: chart climbs to the south pole instead
};

struct PlanarChart {
  BaseGraph base;               // a cycle graph
  std::vector<Vec2> dirs;       // per vertex: corner of the unit level polygon
  Vec2 center;
  WidthProfile profile;
};

struct TowerStep;

struct ConeChart {
  Ambient ambient;
  std::variant<RadialChart, PlanarChart, std::shared_ptr<const TowerStep>> form;
};

// One promotion step: prev and mate were k-interlaced; this chart is prev
// reparametrized by three ambient moves so it is (k+1)-interlaced with mate
// while agreeing with prev up to level 2k-1.
struct TowerStep {
  ConeChart prev;
  ConeChart mate;
  int k = 0;
  Rat r;
  PromotionTriple maps;
  // When positive, the containment certificate "prev's region above 2k-1+r
  // contains the mate's region above cert_floor" was proved at construction,
  // so queries at or above this level need no fresh descent.
  Rat cert_floor;
};

inline bool chart_is_tower(const ConeChart& c) {
  return std::holds_alternative<std::shared_ptr<const TowerStep>>(c.form);
}
inline const TowerStep& chart_tower(const ConeChart& c) {
  return *std::get<std::shared_ptr<const TowerStep>>(c.form);
}
inline bool chart_is_radial(const ConeChart& c) {
  return std::holds_alternative<RadialChart>(c.form);
}
inline bool chart_is_planar(const ConeChart& c) {
  return std::holds_alternative<PlanarChart>(c.form);
}
inline const RadialChart& chart_radial(const ConeChart& c) {
  return std::get<RadialChart>(c.form);
}
inline const PlanarChart& chart_planar(const ConeChart& c) {
  return std::get<PlanarChart>(c.form);
}

// The honest chart a tower was grown from.
inline const ConeChart& chart_root(const ConeChart& c) {
  return chart_is_tower(c) ? chart_root(chart_tower(c).prev) : c;
}
inline const BaseGraph& chart_base(const ConeChart& c) {
  const ConeChart& r = chart_root(c);
  return chart_is_radial(r) ? chart_radial(r).base : chart_planar(r).base;
}
inline int chart_tower_height(const ConeChart& c) {
  return chart_is_tower(c) ? 1 + chart_tower_height(chart_tower(c).prev) : 0;
}

inline bool chart_same(const ConeChart& a, const ConeChart& b);

inline bool tower_same(const TowerStep& a, const TowerStep& b) {
  return a.k == b.k && a.r == b.r && chart_same(a.prev, b.prev) &&
         chart_same(a.mate, b.mate);
}

inline bool chart_same(const ConeChart& a, const ConeChart& b) {
  if (a.ambient != b.ambient || a.form.index() != b.form.index()) return false;
  if (chart_is_radial(a)) {
    const auto &x = chart_radial(a), &y = chart_radial(b);
    if (x.base != y.base || x.south != y.south) return false;
    if (x.iso.vmap != y.iso.vmap) return false;
    for (std::size_t i = 0; i < x.iso.emap.size(); ++i) {
      if (x.iso.emap[i].e != y.iso.emap[i].e || x.iso.emap[i].rev != y.iso.emap[i].rev ||
          !pl_equal(x.iso.emap[i].rho, y.iso.emap[i].rho))
        return false;
    }
    return x.offset.at_vertex == y.offset.at_vertex && x.offset.mids == y.offset.mids;
  }
  if (chart_is_planar(a)) {
    const auto &x = chart_planar(a), &y = chart_planar(b);
    return x.base == y.base && x.dirs == y.dirs && x.center == y.center &&
           x.profile.w0 == y.profile.w0 && x.profile.knots == y.profile.knots;
  }
  return tower_same(chart_tower(a), chart_tower(b));
}

inline ConeChart make_radial_chart(Ambient ambient, BaseGraph base, BaseIso iso,
                                   BaseFunc offset, bool south = false) {
  if (ambient.kind == AmbientKind::plane)
    fail(errc::ambient_mismatch, "radial chart needs a cone or suspension ambient");
  if (south && ambient.kind != AmbientKind::suspension)
    fail(errc::ambient_mismatch, "only suspension charts pick a pole");
  if (int(iso.vmap.size()) != base.n || iso.emap.size() != base.edges.size())
    fail(errc::wrong_graph, "iso does not match the chart base");
  if (int(offset.at_vertex.size()) != base.n)
    fail(errc::wrong_graph, "offset does not match the chart base");
  if (base.n != ambient.base.n || base.edges.size() != ambient.base.edges.size())
    fail(errc::wrong_graph, "chart base must be isomorphic to the ambient base");
  ConeChart c;
  c.ambient = std::move(ambient);
  c.form = RadialChart{std::move(base), std::move(iso), std::move(offset), south};
  return c;
}

// Directions of the planar chart listed counterclockwise, with the vertex
// ids they belong to.
inline std::vector<std::pair<int, Vec2>> planar_ccw(const PlanarChart& pc) {
  std::vector<int> order = graph_cycle_order(pc.base);
  Rat turn = cross2(pc.dirs[order[0]], pc.dirs[order[1]]);
  if (turn < 0) std::reverse(order.begin(), order.end());
  std::vector<std::pair<int, Vec2>> out;
  out.reserve(order.size());
  for (int v : order) out.emplace_back(v, pc.dirs[v]);
  return out;
}

inline std::vector<Vec2> planar_dirs_ccw(const PlanarChart& pc) {
  std::vector<Vec2> out;
  for (auto& [v, d] : planar_ccw(pc)) out.push_back(d);
  return out;
}

inline Vec2 planar_dir_of(const PlanarChart& pc, const BasePoint& y) {
  if (y.is_vertex()) return pc.dirs[y.v];
  const auto [a, b] = pc.base.edges[y.e];
  return vadd(vscale(Rat(1) - y.u, pc.dirs[a]), vscale(y.u, pc.dirs[b]));
}

inline ConeChart make_planar_chart(Ambient ambient, BaseGraph base,
                                   std::vector<Vec2> dirs, Vec2 center,
                                   WidthProfile profile) {
  if (ambient.kind != AmbientKind::plane)
    fail(errc::ambient_mismatch, "planar chart needs a plane ambient");
  if (!graph_is_cycle(base))
    fail(errc::wrong_graph, "planar chart base must be a cycle graph");
  if (int(dirs.size()) != base.n)
    fail(errc::wrong_graph, "need one direction per base vertex");
  ConeChart c;
  c.ambient = std::move(ambient);
  PlanarChart pc{std::move(base), std::move(dirs), std::move(center), std::move(profile)};
  check_gauge_dirs(planar_dirs_ccw(pc));
  // The whole image, a gauge ball of radius w0, must fit inside the square.
  for (const Vec2& d : pc.dirs) {
    Vec2 corner = vadd(pc.center, vscale(pc.profile.w0, d));
    if (rat_abs(corner.first) >= c.ambient.halfwidth ||
        rat_abs(corner.second) >= c.ambient.halfwidth)
      fail(errc::out_of_domain, "chart image leaves the ambient square");
  }
  c.form = std::move(pc);
  return c;
}

struct ChartPos {
  enum class Kind { vertex, interior, outside };
  Kind kind = Kind::outside;
  BasePoint y;
  Level t;
};

inline AmbientPoint chart_eval(const ConeChart& c, const BasePoint& y, const Level& t);
inline ChartPos chart_invert(const ConeChart& c, const AmbientPoint& x);

// --- radial charts -------------------------------------------------------

// Height of ambient rays measured toward the chart's own pole.
inline Rat radial_height_in(const RadialChart& rc, const Rat& s) {
  return rc.south ? Rat(-s) : s;
}
inline Rat radial_height_out(const RadialChart& rc, const Rat& h) {
  return rc.south ? Rat(-h) : h;
}

inline AmbientPoint radial_pole(const Ambient& amb, const RadialChart& rc) {
  if (amb.kind == AmbientKind::graph_cone) return apex_point();
  return rc.south ? south_point() : north_point();
}

// --- evaluation ----------------------------------------------------------

inline AmbientPoint chart_eval(const RadialChart& rc, const Ambient& amb,
                               const BasePoint& y, const Level& t) {
  if (t.inf) return radial_pole(amb, rc);
  Rat h = t.v + base_func_eval(rc.base, rc.offset, y);
  BasePoint g = base_iso_apply(rc.base, amb.base, rc.iso, y);
  return ray_point(g, radial_height_out(rc, h));
}

inline AmbientPoint chart_eval(const PlanarChart& pc, const BasePoint& y,
                               const Level& t) {
  if (t.inf) return plane_point(pc.center.first, pc.center.second);
  Rat w = width_at(pc.profile, t.v);
  Vec2 p = vadd(pc.center, vscale(w, planar_dir_of(pc, y)));
  return plane_point(p.first, p.second);
}

// Conjugate a level reparametrization into an ambient self-map supported on
// the chart's image: move along the chart's rays, fix everything else.
inline AmbientPoint chart_conj(const ConeChart& c, const PLHomeo& map,
                               const AmbientPoint& x) {
  ChartPos pos = chart_invert(c, x);
  if (pos.kind != ChartPos::Kind::interior) return x;
  Level t2 = pl_eval(map, pos.t);
  return chart_eval(c, pos.y, t2);
}

inline AmbientPoint chart_eval(const TowerStep& ts, const BasePoint& y, const Level& t) {
  Level u = pl_eval(ts.maps.lower, t);
  AmbientPoint x = chart_eval(ts.prev, y, u);
  ChartPos mp = chart_invert(ts.mate, x);
  if (mp.kind == ChartPos::Kind::interior) {
    Level s = pl_eval(ts.maps.raise, mp.t);
    if (s != mp.t) {
      AmbientPoint x2 = chart_eval(ts.mate, mp.y, s);
      // The certificate proved at construction puts the mate's region at or
      // above the stored floor inside the zone the restore leaves alone, so
      // the restore fixes x2 and no descent through prev is needed.
      if (ts.cert_floor > 0 && !s.inf && s.v >= ts.cert_floor) return x2;
      return chart_conj(ts.prev, ts.maps.restore, x2);
    }
  }
  // The raise fixed x, so its position in prev is still (y, u); apply the
  // restore there directly instead of re-inverting the whole tower.
  if (u.inf) return x;
  Level w = pl_eval(ts.maps.restore, u);
  if (w == u) return x;
  return chart_eval(ts.prev, y, w);
}

inline AmbientPoint chart_eval(const ConeChart& c, const BasePoint& y, const Level& t) {
  if (chart_is_radial(c)) return chart_eval(chart_radial(c), c.ambient, y, t);
  if (chart_is_planar(c)) return chart_eval(chart_planar(c), y, t);
  return chart_eval(chart_tower(c), y, t);
}

inline AmbientPoint chart_vertex(const ConeChart& c) {
  return chart_eval(c, base_vertex(chart_base(c), 0), level_inf());
}

// --- inversion -----------------------------------------------------------

inline ChartPos chart_invert(const RadialChart& rc, const Ambient& amb,
                             const AmbientPoint& x) {
  if (x.tag != AmbientPoint::Tag::ray) {
    if (x == radial_pole(amb, rc))
      return ChartPos{ChartPos::Kind::vertex, {}, level_inf()};
    return ChartPos{ChartPos::Kind::outside, {}, {}};
  }
  BaseIso inv = base_iso_invert(rc.base, amb.base, rc.iso);
  BasePoint y = base_iso_apply(amb.base, rc.base, inv, x.at);
  Rat t = radial_height_in(rc, x.s) - base_func_eval(rc.base, rc.offset, y);
  if (t <= 0) return ChartPos{ChartPos::Kind::outside, {}, {}};
  return ChartPos{ChartPos::Kind::interior, y, level(t)};
}

inline ChartPos chart_invert(const PlanarChart& pc, const AmbientPoint& x) {
  if (x.tag != AmbientPoint::Tag::plane)
    fail(errc::ambient_mismatch, "plane chart met a non-plane point");
  Vec2 rel = vsub({x.x, x.y}, pc.center);
  if (rel.first == 0 && rel.second == 0)
    return ChartPos{ChartPos::Kind::vertex, {}, level_inf()};
  auto ccw = planar_ccw(pc);
  std::vector<Vec2> dirs;
  for (auto& [v, d] : ccw) dirs.push_back(d);
  SectorCoords sc = gauge_sector(dirs, rel);
  Rat g = sc.a + sc.b;
  auto t = level_for_width(pc.profile, g);
  if (!t) return ChartPos{ChartPos::Kind::outside, {}, {}};
  int vi = ccw[sc.i].first, vj = ccw[(sc.i + 1) % ccw.size()].first;
  BasePoint y;
  if (sc.b == 0) {
    y = base_vertex(pc.base, vi);
  } else if (sc.a == 0) {
    y = base_vertex(pc.base, vj);
  } else {
    auto e = graph_edge_index(pc.base, vi, vj);
    if (!e) fail(errc::internal, "polygon sector without a base edge");
    Rat from_vi = sc.b / g;
    y = base_edge_point(pc.base, *e, vi < vj ? from_vi : Rat(1) - from_vi);
  }
  return ChartPos{ChartPos::Kind::interior, y, level(*t)};
}

inline ChartPos chart_invert(const TowerStep& ts, const AmbientPoint& x) {
  // Fast band path: when x sits in the mate's region at or above the
  // certified floor, the restore provably fixed it, so only the raise needs
  // undoing, and that happens in mate coordinates without touching prev.
  ChartPos mp = chart_invert(ts.mate, x);
  if (ts.cert_floor > 0 && mp.kind == ChartPos::Kind::interior && !mp.t.inf &&
      mp.t.v >= ts.cert_floor && mp.t.v < Rat(2 * ts.k + 2)) {
    Rat s = pl_eval_inv(ts.maps.raise, mp.t.v);
    AmbientPoint xm = (s == mp.t.v) ? x : chart_eval(ts.mate, mp.y, level(s));
    ChartPos pos = chart_invert(ts.prev, xm);
    if (pos.kind != ChartPos::Kind::interior) return pos;
    return ChartPos{ChartPos::Kind::interior, pos.y,
                    pl_eval(pl_invert(ts.maps.lower), pos.t)};
  }
  // Undo the three ambient moves. One inversion through prev pins down x;
  // after that every position is tracked, so further inversions are needed
  // only when the raise actually moved the point. A point outside prev's
  // image sits below the mate's band by interlacing, so the moves fix it
  // and it is outside this chart as well.
  ChartPos pos = chart_invert(ts.prev, x);
  if (pos.kind == ChartPos::Kind::outside) return pos;

  AmbientPoint x1 = x;
  ChartPos pos1 = pos;  // prev position of x1
  if (pos.kind == ChartPos::Kind::interior) {
    Level v = pl_eval(pl_invert(ts.maps.restore), pos.t);
    if (v.inf || v.v != pos.t.v) {
      x1 = chart_eval(ts.prev, pos.y, v);
      pos1 = ChartPos{ChartPos::Kind::interior, pos.y, v};
    }
  }
  AmbientPoint x2 = chart_conj(ts.mate, pl_invert(ts.maps.raise), x1);
  ChartPos pos2 = (x2 == x1) ? pos1 : chart_invert(ts.prev, x2);
  if (pos2.kind != ChartPos::Kind::interior) return pos2;
  return ChartPos{ChartPos::Kind::interior, pos2.y,
                  pl_eval(pl_invert(ts.maps.lower), pos2.t)};
}

inline ChartPos chart_invert(const ConeChart& c, const AmbientPoint& x) {
  if (!point_in_ambient(c.ambient, x))
    fail(errc::ambient_mismatch, "point does not live in the chart's ambient");
  if (chart_is_radial(c)) return chart_invert(chart_radial(c), c.ambient, x);
  if (chart_is_planar(c)) return chart_invert(chart_planar(c), x);
  return chart_invert(chart_tower(c), x);
}

inline bool chart_covers(const ConeChart& c, const AmbientPoint& x) {
  return chart_invert(c, x).kind != ChartPos::Kind::outside;
}

// Is x in the chart's region above level a (the image of base x (a, inf],
// or of base x [a, inf] when closed)?
inline bool chart_region_has(const ConeChart& c, const Rat& a, bool closed,
                             const AmbientPoint& x) {
  ChartPos pos = chart_invert(c, x);
  switch (pos.kind) {
    case ChartPos::Kind::outside: return false;
    case ChartPos::Kind::vertex: return true;
    case ChartPos::Kind::interior:
      return closed ? pos.t >= level(a) : pos.t > level(a);
  }
  return false;
}

// The level of x in chart c, if any; the chart-side name for depth.
inline std::optional<Level> chart_level_of(const ConeChart& c, const AmbientPoint& x) {
  ChartPos pos = chart_invert(c, x);
  if (pos.kind == ChartPos::Kind::outside) return std::nullopt;
  return pos.t;
}

// New radial chart displaced from c by d (given on c's base). The pair
// stays 2-interlaced exactly when |d| < 1 everywhere, which is enforced.
inline ConeChart make_offset_chart(const ConeChart& c, const BaseFunc& d) {
  if (!chart_is_radial(c))
    fail(errc::unsupported, "offset charts are built from radial charts");
  const RadialChart& rc = chart_radial(c);
  if (int(d.at_vertex.size()) != rc.base.n || d.mids.size() != rc.base.edges.size())
    fail(errc::wrong_graph, "offset does not match the chart base");
  Rat lo = base_func_min(rc.base, d), hi = base_func_max(rc.base, d);
  if (lo <= -1 || hi >= 1)
    fail(errc::offset_too_large, "relative offset must stay inside (-1, 1), got [" +
                                     rat_str(lo) + ", " + rat_str(hi) + "]");
  BaseFunc total = base_func_add(rc.base, rc.offset, d);
  return make_radial_chart(c.ambient, rc.base, rc.iso, std::move(total), rc.south);
}

} // namespace conetop
