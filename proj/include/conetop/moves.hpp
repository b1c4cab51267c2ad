// Point-moving homeomorphisms built from charts: radial slides, moves that
// carry one point of a chart to another, path rerouting around obstacle
// cones, chart-chain composites along a path, and the driver that extends a
// point tuple match to a global homeomorphism.
#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conetop/ambient.hpp"
#include "conetop/base_graph.hpp"
#include "conetop/cone_chart.hpp"
#include "conetop/errors.hpp"
#include "conetop/interlace.hpp"
#include "conetop/level.hpp"
#include "conetop/piecewise_homeo.hpp"
#include "conetop/pl_homeo.hpp"
#include "conetop/pl_path.hpp"
#include "conetop/planar.hpp"
#include "conetop/rational.hpp"
#include "conetop/vertex_swap.hpp"

namespace conetop {

// --- radial slide ---------------------------------------------------------

// Push x along its chart ray to level t_target. Rays within base distance
// 1/2 of x's ray follow with a PL taper so the result is a homeomorphism of
// the whole space, supported inside the chart image and fixing every level
// below half the smaller of the two levels.
inline PiecewiseHomeo radial_slide(const ConeChart& phi, const AmbientPoint& x,
                                   const Rat& t_target) {
  if (t_target <= 0) fail(errc::out_of_domain, "slide target level must be positive");
  ChartPos pos = chart_invert(phi, x);
  if (pos.kind == ChartPos::Kind::outside)
    fail(errc::outside_chart, "slide start lies outside the chart");
  if (pos.kind == ChartPos::Kind::vertex)
    fail(errc::vertex_input, "the vertex cannot slide");
  auto chart = std::make_shared<const ConeChart>(phi);
  Rat t0 = pos.t.v;
  BasePoint y0 = pos.y;
  Rat delta = rat_min(t0, t_target) / 2;
  auto ray_map = [chart, y0, t0, t_target, delta](const BasePoint& y) -> std::optional<PLHomeo> {
    auto d = base_distance(chart_base(*chart), y, y0);
    if (!d || *d >= rat_frac(1, 2)) return std::nullopt;
    Rat t1 = t0 + (1 - 2 * *d) * (t_target - t0);
    return pl_make({{delta, delta}, {t0, t1}}, true, true);
  };
  PiecewiseHomeo h;
  h.ambient = chart->ambient;
  h.name = "slide";
  h.fwd = [chart, ray_map](const AmbientPoint& a) {
    ChartPos p = chart_invert(*chart, a);
    if (p.kind != ChartPos::Kind::interior) return a;
    auto m = ray_map(p.y);
    if (!m) return a;
    return chart_eval(*chart, p.y, level(pl_eval(*m, p.t.v)));
  };
  h.inv = [chart, ray_map](const AmbientPoint& a) {
    ChartPos p = chart_invert(*chart, a);
    if (p.kind != ChartPos::Kind::interior) return a;
    auto m = ray_map(p.y);
    if (!m) return a;
    return chart_eval(*chart, p.y, level(pl_eval_inv(*m, p.t.v)));
  };
  h.support = [chart](const AmbientPoint& a) { return chart_covers(*chart, a); };
  return h;
}

// --- moving a point to another inside one chart ----------------------------

namespace detail {

// Slide levels at which recentering is retried when the direct estimate
// fails, for instance because the scaled chart pokes out of the square.
inline const int kSlideDepths[] = {6, 10, 18, 34, 66, 130, 258, 514, 1026};

// Level deep enough that a same-scale recentered chart interlaces: the
// target's gauge must undercut the slack between consecutive widths.
inline std::optional<Rat> direct_recenter_level(const WidthProfile& p) {
  Rat gap = rat_min(width_at(p, 1) - width_at(p, 2),
                    rat_min(width_at(p, 2) - width_at(p, 3), width_at(p, 3) - width_at(p, 4)));
  if (gap <= 0) return std::nullopt;
  return level_for_width(p, gap / 2);
}

// Homeomorphism carrying x to the vertex of a planar chart, supported on the
// chart image: slide x toward the vertex until a recentered chart at the
// slid point interlaces, then run the vertex swap backwards.
inline PiecewiseHomeo to_vertex(const ConeChart& phi, const AmbientPoint& x) {
  if (x == chart_vertex(phi)) return ph_identity(phi.ambient);
  ChartPos pos = chart_invert(phi, x);
  std::vector<Rat> depths;
  if (auto t = direct_recenter_level(chart_planar(phi).profile)) depths.push_back(*t);
  for (int d : kSlideDepths) depths.push_back(Rat(d));
  std::vector<Rat> tried;
  for (const Rat& want : depths) {
    Rat depth = rat_max(want, pos.t.v);
    if (std::find(tried.begin(), tried.end(), depth) != tried.end()) continue;
    tried.push_back(depth);
    ConeChart psi;
    try {
      psi = recenter_chart(phi, chart_eval(phi, pos.y, level(depth)));
    } catch (const error& e) {
      if (e.code() == errc::target_too_shallow) continue;
      throw;
    }
    PiecewiseHomeo slide = radial_slide(phi, x, depth);
    SwapHomeo sw = build_vertex_swap(make_interlaced_pair(phi, psi));
    return ph_compose({slide, ph_inverse(swap_as_piecewise(sw))});
  }
  fail(errc::internal, "no slide level admits a recentered chart");
}

} // namespace detail

// Homeomorphism with h(x) = y, supported inside the chart image. Planar
// charts move any two covered points by passing through the vertex; radial
// and tower charts move points along one shared ray.
inline PiecewiseHomeo move_in_cone(const ConeChart& phi, const AmbientPoint& x,
                                   const AmbientPoint& y) {
  if (!chart_covers(phi, x) || !chart_covers(phi, y))
    fail(errc::outside_chart, "move endpoints must lie in the chart");
  if (x == y) return ph_identity(phi.ambient);
  if (chart_is_planar(phi)) {
    PiecewiseHomeo fx = detail::to_vertex(phi, x);
    PiecewiseHomeo fy = detail::to_vertex(phi, y);
    auto chart = std::make_shared<const ConeChart>(phi);
    // Every point the composite moves stays inside this chart: each half is
    // a slide inside it followed by a swap whose moved set lies inside the
    // outer member of its interlaced pair.
    return ph_with_support(ph_compose({fx, ph_inverse(fy)}), "move",
                           [chart](const AmbientPoint& a) { return chart_covers(*chart, a); });
  }
  ChartPos px = chart_invert(phi, x), py = chart_invert(phi, y);
  if (px.kind == ChartPos::Kind::vertex || py.kind == ChartPos::Kind::vertex)
    fail(errc::unsupported, "this chart cannot move its vertex");
  if (px.y == py.y) return radial_slide(phi, x, py.t.v);
  fail(errc::unsupported, "this chart moves points only along one ray");
}

// --- obstacle charts -------------------------------------------------------

using ChartProvider = std::function<ConeChart(const AmbientPoint&)>;

// Cone chart whose vertex is the obstacle f and whose image misses every
// point of avoid: a small square chart at a plane point, or a radial chart
// lifted above the avoid heights at a cone point.
inline ConeChart make_obstacle_chart(const Ambient& amb, const AmbientPoint& f,
                                     const std::vector<AmbientPoint>& avoid) {
  for (const AmbientPoint& a : avoid)
    if (a == f) fail(errc::chart_meets_f, "obstacle chart cannot avoid its own vertex");
  if (amb.kind == AmbientKind::plane && f.tag == AmbientPoint::Tag::plane) {
    Rat w0 = rat_min(amb.halfwidth - rat_abs(f.x), amb.halfwidth - rat_abs(f.y)) / 2;
    for (const AmbientPoint& a : avoid)
      if (a.tag == AmbientPoint::Tag::plane)
        w0 = rat_min(w0, rat_max(rat_abs(a.x - f.x), rat_abs(a.y - f.y)));
    std::vector<Vec2> dirs{{Rat(1), Rat(1)}, {Rat(-1), Rat(1)}, {Rat(-1), Rat(-1)},
                           {Rat(1), Rat(-1)}};
    BaseGraph base = make_base_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    return make_planar_chart(amb, base, dirs, Vec2{f.x, f.y},
                             make_width_profile(w0, {{Rat(1), w0 / 2}}));
  }
  bool cone_apex = amb.kind == AmbientKind::graph_cone && f.tag == AmbientPoint::Tag::apex;
  bool pole = amb.kind == AmbientKind::suspension &&
              (f.tag == AmbientPoint::Tag::north || f.tag == AmbientPoint::Tag::south);
  if (!cone_apex && !pole)
    fail(errc::unsupported, "obstacle charts live at plane points and cone points");
  bool south = f.tag == AmbientPoint::Tag::south;
  std::vector<Rat> lift(amb.base.n, Rat(0));
  for (const AmbientPoint& a : avoid) {
    if (a.tag != AmbientPoint::Tag::ray) continue;
    Rat h = south ? Rat(-a.s) : a.s;
    if (a.at.is_vertex()) {
      lift[a.at.v] = rat_max(lift[a.at.v], h);
    } else {
      const auto& e = amb.base.edges[a.at.e];
      lift[e.first] = rat_max(lift[e.first], h);
      lift[e.second] = rat_max(lift[e.second], h);
    }
  }
  return make_radial_chart(amb, amb.base, base_iso_identity(amb.base),
                           make_base_func(amb.base, std::move(lift)), south);
}

// --- rerouting a path around obstacles -------------------------------------

namespace detail {

// Data for deciding where a path segment meets the region of chart levels
// at least one.
struct RegionGeom {
  bool planar = false;
  std::vector<Vec2> dirs;
  Vec2 center;
  Rat radius;
  bool south = false;
  BaseFunc off;  // radial: chart offset transported to the ambient base
};

inline RegionGeom region_geom(const ConeChart& chart) {
  RegionGeom geo;
  if (chart_is_planar(chart)) {
    const PlanarChart& pc = chart_planar(chart);
    geo.planar = true;
    geo.dirs = planar_dirs_ccw(pc);
    geo.center = pc.center;
    geo.radius = width_at(pc.profile, 1);
    return geo;
  }
  if (!chart_is_radial(chart))
    fail(errc::unsupported, "rerouting needs an honest radial or planar chart");
  const RadialChart& rc = chart_radial(chart);
  geo.south = rc.south;
  geo.off = radial_ambient_offset(chart);
  return geo;
}

// First entry into and last exit from {chart level >= 1} along one segment,
// as parameters in [0, 1]; absent when the segment stays clear.
struct SegWindow {
  bool any = false;
  Rat enter, exit;
};

inline SegWindow planar_window(const RegionGeom& geo, const AmbientPoint& A,
                               const AmbientPoint& B) {
  Vec2 a = vsub({A.x, A.y}, geo.center), b = vsub({B.x, B.y}, geo.center);
  Rat lo(0), hi(1);
  int n = int(geo.dirs.size());
  for (int i = 0; i < n; ++i) {
    Vec2 d0 = vscale(geo.radius, geo.dirs[i]);
    Vec2 edge = vsub(vscale(geo.radius, geo.dirs[(i + 1) % n]), d0);
    Rat c0 = cross2(edge, vsub(a, d0)), c1 = cross2(edge, vsub(b, d0));
    if (c0 == c1) {
      if (c0 < 0) return {};
      continue;
    }
    Rat ustar = c0 / (c0 - c1);
    if (c1 < c0)
      hi = rat_min(hi, ustar);
    else
      lo = rat_max(lo, ustar);
  }
  if (lo > hi) return {};
  return {true, lo, hi};
}

inline Rat radial_level_at(const RegionGeom& geo, const Ambient& amb, const BasePoint& p,
                           const Rat& s) {
  Rat h = geo.south ? Rat(-s) : s;
  return h - base_func_eval(amb.base, geo.off, p);
}

inline SegWindow radial_window(const RegionGeom& geo, const Ambient& amb, const AmbientPoint& A,
                               const AmbientPoint& B) {
  if (is_pole(A)) {
    SegWindow w = radial_window(geo, amb, B, A);
    if (!w.any) return w;
    return {true, 1 - w.exit, 1 - w.enter};
  }
  if (is_pole(B)) {
    Rat L0 = radial_level_at(geo, amb, A.at, A.s);
    int toward = (geo.south ? -1 : 1) * pole_sign(B);
    if (toward > 0) {
      if (L0 >= 1) return {true, Rat(0), Rat(1)};
      Rat k = 1 - L0;
      return {true, k / (1 + k), Rat(1)};
    }
    if (L0 < 1) return {};
    Rat k = L0 - 1;
    return {true, Rat(0), k / (1 + k)};
  }
  auto track = base_track(amb.base, A.at, B.at);
  if (!track) fail(errc::non_pl, "waypoints are not joinable");
  std::vector<Rat> knots{Rat(0), Rat(1)};
  if (!track->fixed)
    for (const auto& q : geo.off.mids[track->e]) {
      Rat u = (q.first - track->c0) / (track->c1 - track->c0);
      if (u > 0 && u < 1) knots.push_back(u);
    }
  std::sort(knots.begin(), knots.end());
  std::vector<Rat> lvl;
  for (const Rat& u : knots)
    lvl.push_back(radial_level_at(geo, amb, track_point(amb.base, *track, u),
                                  A.s + u * (B.s - A.s)));
  SegWindow w;
  for (std::size_t i = 0; i < knots.size() && !w.any; ++i) {
    if (lvl[i] >= 1) {
      w.any = true;
      w.enter = knots[i];
    } else if (i + 1 < knots.size() && lvl[i + 1] > 1) {
      w.any = true;
      w.enter = knots[i] + (1 - lvl[i]) * (knots[i + 1] - knots[i]) / (lvl[i + 1] - lvl[i]);
    }
  }
  if (!w.any) return w;
  for (std::size_t i = knots.size(); i-- > 0;) {
    if (lvl[i] >= 1) {
      w.exit = knots[i];
      break;
    }
    if (i > 0 && lvl[i - 1] > 1) {
      w.exit = knots[i - 1] + (lvl[i - 1] - 1) * (knots[i] - knots[i - 1]) / (lvl[i - 1] - lvl[i]);
      break;
    }
  }
  return w;
}

inline SegWindow segment_window(const RegionGeom& geo, const Ambient& amb, const AmbientPoint& A,
                                const AmbientPoint& B) {
  if (A == B) {
    if (geo.planar) return planar_window(geo, A, B);
    if (is_pole(A)) return {};  // pole-to-pole rest stops are handled by their neighbours
    Rat L = radial_level_at(geo, amb, A.at, A.s);
    if (L >= 1) return {true, Rat(0), Rat(1)};
    return {};
  }
  return geo.planar ? planar_window(geo, A, B) : radial_window(geo, amb, A, B);
}

// Third base point around which a detour can swing, distinct from both rays
// the path uses to enter and leave.
inline BasePoint third_base_point(const BaseGraph& g, const BasePoint& y0, const BasePoint& y1) {
  for (int v = 0; v < g.n; ++v) {
    BasePoint c = base_vertex(g, v);
    if (c != y0 && c != y1) return c;
  }
  for (int e = 0; e < int(g.edges.size()); ++e)
    for (int den : {2, 3}) {
      BasePoint c = base_edge_point(g, e, rat_frac(1, den));
      if (c != y0 && c != y1) return c;
    }
  fail(errc::base_too_small, "no third direction to route around");
}

// Waypoints at chart level two between consecutive stops of a base walk,
// splitting at offset breakpoints so every leg has constant chart level.
inline void append_level_two(std::vector<AmbientPoint>& out, const ConeChart& chart,
                             const RegionGeom& geo, const std::vector<BasePoint>& route) {
  const Ambient& amb = chart.ambient;
  for (std::size_t i = 0; i < route.size(); ++i) {
    AmbientPoint stop = chart_eval(chart, route[i], level(Rat(2)));
    if (i && !geo.planar && out.back().tag == AmbientPoint::Tag::ray &&
        stop.tag == AmbientPoint::Tag::ray) {
      auto track = base_track(amb.base, out.back().at, stop.at);
      if (track && !track->fixed) {
        std::vector<Rat> cuts;
        for (const auto& q : geo.off.mids[track->e]) {
          Rat u = (q.first - track->c0) / (track->c1 - track->c0);
          if (u > 0 && u < 1) cuts.push_back(u);
        }
        std::sort(cuts.begin(), cuts.end());
        for (const Rat& u : cuts) {
          BasePoint p = track_point(amb.base, *track, u);
          Rat s = (geo.south ? Rat(-1) : Rat(1)) * (2 + base_func_eval(amb.base, geo.off, p));
          out.push_back(ray_point(p, s));
        }
      }
    }
    if (out.empty() || out.back() != stop) out.push_back(stop);
  }
}

// Replace everything between the path's first entry into and last exit from
// {chart level >= 1} by a walk at level two around a third base direction.
inline PLPath detour_around(const PLPath& path, const ConeChart& chart) {
  const Ambient& amb = path.ambient;
  RegionGeom geo = region_geom(chart);
  int m = int(path.pts.size()) - 1;
  int k0 = -1, k1 = -1;
  Rat u0, u1;
  for (int k = 0; k < std::max(m, 1); ++k) {
    AmbientPoint A = path.pts[k], B = path.pts[std::min(k + 1, m)];
    SegWindow w = segment_window(geo, amb, A, B);
    if (!w.any) continue;
    if (k0 < 0) {
      k0 = k;
      u0 = w.enter;
    }
    k1 = k;
    u1 = w.exit;
  }
  if (k0 < 0) return path;
  AmbientPoint E = segment_eval(amb, path.pts[k0], path.pts[std::min(k0 + 1, m)], u0);
  AmbientPoint X = segment_eval(amb, path.pts[k1], path.pts[std::min(k1 + 1, m)], u1);
  ChartPos posE = chart_invert(chart, E), posX = chart_invert(chart, X);
  if (posE.kind != ChartPos::Kind::interior || posX.kind != ChartPos::Kind::interior)
    fail(errc::internal, "region boundary did not land inside the chart");
  const BaseGraph& g = chart_base(chart);
  BasePoint y2 = third_base_point(g, posE.y, posX.y);
  auto half1 = base_walk(g, posE.y, y2), half2 = base_walk(g, y2, posX.y);
  if (!half1 || !half2)
    fail(errc::unsupported, "the base graph offers no route around the obstacle");
  std::vector<BasePoint> route = *half1;
  route.insert(route.end(), half2->begin() + 1, half2->end());
  std::vector<AmbientPoint> mid{E};
  append_level_two(mid, chart, geo, route);
  mid.push_back(X);
  std::vector<AmbientPoint> pts(path.pts.begin(), path.pts.begin() + k0 + 1);
  for (const AmbientPoint& p : mid)
    if (pts.empty() || pts.back() != p) pts.push_back(p);
  for (int k = k1 + 1; k <= m; ++k)
    if (pts.back() != path.pts[k]) pts.push_back(path.pts[k]);
  return make_pl_path(amb, std::move(pts));
}

} // namespace detail

// Path with the same endpoints that misses every point of F, produced by
// detouring around an obstacle chart at each troublesome point. Without a
// provider, obstacle charts come from make_obstacle_chart.
inline PLPath reroute_path(const PLPath& path, const std::vector<AmbientPoint>& F,
                           ChartProvider provider = {}) {
  if (path.ambient.kind != AmbientKind::plane &&
      base_cardinality(path.ambient.base) != BaseCard::many)
    fail(errc::base_too_small, "rerouting needs at least three base points");
  for (const AmbientPoint& f : F) {
    if (!point_in_ambient(path.ambient, f))
      fail(errc::ambient_mismatch, "forbidden point outside the ambient");
    if (f == path.pts.front() || f == path.pts.back())
      fail(errc::endpoint_in_f, "path endpoint lies in the forbidden set");
  }
  if (!provider) {
    PLPath copy = path;
    std::vector<AmbientPoint> all = F;
    provider = [copy, all](const AmbientPoint& f) {
      std::vector<AmbientPoint> avoid{copy.pts.front(), copy.pts.back()};
      for (const AmbientPoint& g : all)
        if (g != f) avoid.push_back(g);
      return make_obstacle_chart(copy.ambient, f, avoid);
    };
  }
  PLPath out = path;
  for (const AmbientPoint& f : F) {
    if (!point_on_path(out, f)) continue;
    ConeChart chart = provider(f);
    if (chart.ambient != out.ambient)
      fail(errc::ambient_mismatch, "obstacle chart lives in a different ambient");
    if (chart_vertex(chart) != f)
      fail(errc::unsupported, "obstacle chart must have its vertex at the obstacle");
    for (const AmbientPoint& g : F)
      if (g != f && chart_covers(chart, g))
        fail(errc::chart_meets_f, "obstacle chart covers another forbidden point");
    out = detail::detour_around(out, chart);
  }
  for (const AmbientPoint& f : F)
    if (point_on_path(out, f)) fail(errc::internal, "reroute left the path touching an obstacle");
  return out;
}

// --- chart chains -----------------------------------------------------------

// Charts U_1..U_k with witnesses x_0..x_k, where each consecutive witness
// pair lies in the chart between them.
struct ChartChain {
  std::vector<ConeChart> charts;
  std::vector<AmbientPoint> witnesses;
};

inline ChartChain make_chart_chain(std::vector<ConeChart> charts,
                                   std::vector<AmbientPoint> witnesses) {
  if (charts.empty()) fail(errc::chain_broken, "a chain needs at least one chart");
  if (witnesses.size() != charts.size() + 1)
    fail(errc::chain_broken, "a chain needs one more witness than charts");
  for (const ConeChart& c : charts)
    if (c.ambient != charts.front().ambient)
      fail(errc::ambient_mismatch, "chain charts share one ambient");
  for (std::size_t i = 0; i < charts.size(); ++i)
    if (!chart_covers(charts[i], witnesses[i]) || !chart_covers(charts[i], witnesses[i + 1]))
      fail(errc::chain_broken, "witness escapes its chart");
  return ChartChain{std::move(charts), std::move(witnesses)};
}

// Composite of per-chart moves carrying x = x_0 through the witnesses to
// y = x_k, identity outside the union of the charts and at every point of F.
inline PiecewiseHomeo chain_move(const Ambient& amb, const AmbientPoint& x, const AmbientPoint& y,
                                 const std::vector<AmbientPoint>& F, const ChartChain& chain) {
  if (chain.charts.empty()) fail(errc::chain_broken, "empty chain");
  if (chain.charts.front().ambient != amb)
    fail(errc::ambient_mismatch, "chain lives in a different ambient");
  if (chain.witnesses.front() != x || chain.witnesses.back() != y)
    fail(errc::chain_broken, "chain witnesses do not start at x and end at y");
  auto charts = std::make_shared<const std::vector<ConeChart>>(chain.charts);
  for (const ConeChart& c : *charts)
    for (const AmbientPoint& f : F)
      if (chart_covers(c, f)) fail(errc::chart_meets_f, "chain chart covers a forbidden point");
  std::vector<PiecewiseHomeo> parts;
  for (std::size_t i = 0; i < charts->size(); ++i)
    parts.push_back(move_in_cone((*charts)[i], chain.witnesses[i], chain.witnesses[i + 1]));
  return ph_with_support(ph_compose(std::move(parts)), "chain",
                         [charts](const AmbientPoint& a) {
                           for (const ConeChart& c : *charts)
                             if (chart_covers(c, a)) return true;
                           return false;
                         });
}

namespace detail {

inline Rat pow2_at_most(const Rat& c) {
  Rat r(1);
  while (r > c) r /= 2;
  while (2 * r <= c) r *= 2;
  return r;
}

// Exact max-norm distance from the segment AB to the point f.
inline Rat segment_point_dist(const Vec2& A, const Vec2& B, const Vec2& f) {
  Rat ax = A.first - f.first, ay = A.second - f.second;
  Rat dx = B.first - A.first, dy = B.second - A.second;
  std::vector<Rat> us{Rat(0), Rat(1)};
  auto add_root = [&us](const Rat& num, const Rat& den) {
    if (den == 0) return;
    Rat u = num / den;
    if (u > 0 && u < 1) us.push_back(u);
  };
  add_root(-ax, dx);
  add_root(-ay, dy);
  add_root(-(ax - ay), dx - dy);
  add_root(-(ax + ay), dx + dy);
  std::optional<Rat> best;
  for (const Rat& u : us) {
    Rat d = rat_max(rat_abs(ax + u * dx), rat_abs(ay + u * dy));
    if (!best || d < *best) best = d;
  }
  return *best;
}

} // namespace detail

// Chain of equal-size square charts spaced along a plane path, tight enough
// that no chart reaches F or the boundary of the square ambient.
inline ChartChain build_chart_chain(const Ambient& amb, const PLPath& path,
                                    const std::vector<AmbientPoint>& F) {
  if (amb.kind != AmbientKind::plane)
    fail(errc::unsupported, "chart chains along a path are built in the plane");
  if (path.ambient != amb) fail(errc::ambient_mismatch, "path lives in a different ambient");
  Rat clear = amb.halfwidth;
  for (const AmbientPoint& p : path.pts)
    clear = rat_min(clear, amb.halfwidth - rat_max(rat_abs(p.x), rat_abs(p.y)));
  for (std::size_t i = 0; i + 1 < path.pts.size(); ++i)
    for (const AmbientPoint& f : F)
      clear = rat_min(clear, detail::segment_point_dist({path.pts[i].x, path.pts[i].y},
                                                        {path.pts[i + 1].x, path.pts[i + 1].y},
                                                        {f.x, f.y}));
  if (clear <= 0) fail(errc::chart_meets_f, "path touches the forbidden set");
  Rat R = detail::pow2_at_most(clear / 2);
  std::vector<Vec2> centers{{path.pts.front().x, path.pts.front().y}};
  for (std::size_t i = 0; i + 1 < path.pts.size(); ++i) {
    Vec2 A{path.pts[i].x, path.pts[i].y}, B{path.pts[i + 1].x, path.pts[i + 1].y};
    Rat len = rat_max(rat_abs(B.first - A.first), rat_abs(B.second - A.second));
    if (len == 0) continue;
    Rat steps_needed = 2 * len / R;
    mpz_class n;
    mpz_cdiv_q(n.get_mpz_t(), steps_needed.get_num_mpz_t(), steps_needed.get_den_mpz_t());
    long parts = n.get_si();
    for (long j = 1; j <= parts; ++j) {
      Rat u = rat_frac(j, parts);
      centers.push_back(vadd(A, vscale(u, vsub(B, A))));
    }
    if (centers.size() > 50000) fail(errc::internal, "chart chain grew absurdly long");
  }
  BaseGraph base = make_base_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  std::vector<Vec2> dirs{{Rat(1), Rat(1)}, {Rat(-1), Rat(1)}, {Rat(-1), Rat(-1)},
                         {Rat(1), Rat(-1)}};
  WidthProfile profile = make_width_profile(R, {{Rat(1), R / 2}});
  std::vector<ConeChart> charts;
  std::vector<AmbientPoint> witnesses;
  witnesses.push_back(plane_point(centers[0].first, centers[0].second));
  for (std::size_t i = 1; i < centers.size(); ++i) {
    charts.push_back(make_planar_chart(amb, base, dirs, centers[i], profile));
    witnesses.push_back(plane_point(centers[i].first, centers[i].second));
  }
  if (charts.empty()) {
    charts.push_back(make_planar_chart(amb, base, dirs, centers[0], profile));
    witnesses.push_back(witnesses.front());
  }
  return make_chart_chain(std::move(charts), std::move(witnesses));
}

// --- suspensions flattened to the plane -------------------------------------

// One rational unit direction per vertex of a cycle base, strictly
// counterclockwise in the cycle's own order.
inline std::vector<Vec2> suspension_embedding(const BaseGraph& g) {
  if (!graph_is_cycle(g)) fail(errc::wrong_graph, "embedding needs a cycle base");
  std::vector<Vec2> picks;
  if (g.n == 3) {
    picks = {{Rat(1), Rat(0)}, {rat_frac(-3, 5), rat_frac(4, 5)}, {rat_frac(-3, 5), rat_frac(-4, 5)}};
  } else {
    if (g.n % 2) picks.push_back({Rat(1), Rat(0)});
    Vec2 rot{rat_frac(3, 5), rat_frac(4, 5)};
    Vec2 p{Rat(1), Rat(0)};
    for (int k = 1; k <= g.n / 2; ++k) {
      p = Vec2{p.first * rot.first - p.second * rot.second,
               p.first * rot.second + p.second * rot.first};
      picks.push_back(p);
      picks.push_back(Vec2{-p.first, -p.second});
    }
  }
  auto upper = [](const Vec2& v) { return v.second > 0 || (v.second == 0 && v.first > 0); };
  std::sort(picks.begin(), picks.end(), [&](const Vec2& a, const Vec2& b) {
    if (upper(a) != upper(b)) return upper(a);
    return cross2(a, b) > 0;
  });
  check_gauge_dirs(picks);
  std::vector<int> order = graph_cycle_order(g);
  std::vector<Vec2> dirs(g.n);
  for (int j = 0; j < g.n; ++j) dirs[order[j]] = picks[j];
  return dirs;
}

namespace detail {

inline Vec2 embed_dir(const BaseGraph& g, const std::vector<Vec2>& emb, const BasePoint& p) {
  if (p.is_vertex()) return emb[p.v];
  const auto& e = g.edges[p.e];
  return vadd(emb[e.first], vscale(p.u, vsub(emb[e.second], emb[e.first])));
}

inline AmbientPoint deleted_pole(bool del_north) {
  return del_north ? north_point() : south_point();
}

} // namespace detail

// Plane image of a suspension point with one pole deleted: the other pole
// goes to the origin and a ray point at height h toward the deleted pole
// lands on its vertex direction at polygon gauge 1+h (h >= 0) or 1/(1-h).
inline Vec2 suspension_flatten(const BaseGraph& g, const std::vector<Vec2>& emb, bool del_north,
                               const AmbientPoint& x) {
  if (x == detail::deleted_pole(del_north))
    fail(errc::out_of_domain, "the deleted pole has no plane image");
  if (detail::is_pole(x)) return Vec2{Rat(0), Rat(0)};
  if (x.tag != AmbientPoint::Tag::ray) fail(errc::ambient_mismatch, "not a suspension point");
  Rat h = del_north ? x.s : Rat(-x.s);
  Rat r = h >= 0 ? Rat(1 + h) : Rat(1 / (1 - h));
  return vscale(r, detail::embed_dir(g, emb, x.at));
}

inline AmbientPoint suspension_unflatten(const BaseGraph& g, const std::vector<Vec2>& emb,
                                         bool del_north, const Vec2& z) {
  if (z.first == 0 && z.second == 0) return del_north ? south_point() : north_point();
  std::vector<int> order = graph_cycle_order(g);
  std::vector<Vec2> ccw;
  for (int v : order) ccw.push_back(emb[v]);
  SectorCoords sc = gauge_sector(ccw, z);
  Rat r = sc.a + sc.b;
  int vi = order[sc.i], vj = order[(sc.i + 1) % order.size()];
  BasePoint y;
  if (sc.b == 0) {
    y = base_vertex(g, vi);
  } else if (sc.a == 0) {
    y = base_vertex(g, vj);
  } else {
    auto e = graph_edge_index(g, vi, vj);
    if (!e) fail(errc::internal, "cycle order without a base edge");
    Rat from_vi = sc.b / r;
    y = base_edge_point(g, *e, vi < vj ? from_vi : Rat(1) - from_vi);
  }
  Rat h = r >= 1 ? Rat(r - 1) : Rat(1 - 1 / r);
  return ray_point(y, del_north ? h : Rat(-h));
}

namespace detail {

// Carry a plane homeomorphism back to the suspension through the flattening
// at the deleted pole; everything beyond the working square stays fixed.
inline PiecewiseHomeo suspension_pullback(const Ambient& amb, const std::vector<Vec2>& emb,
                                          bool del_north, const PiecewiseHomeo& G) {
  auto data = std::make_shared<const std::pair<BaseGraph, std::vector<Vec2>>>(amb.base, emb);
  auto inner = std::make_shared<const PiecewiseHomeo>(G);
  Rat W = G.ambient.halfwidth;
  auto flat = [data, del_north, W](const AmbientPoint& x) -> std::optional<Vec2> {
    if (x == deleted_pole(del_north)) return std::nullopt;
    Vec2 z = suspension_flatten(data->first, data->second, del_north, x);
    if (rat_abs(z.first) >= W || rat_abs(z.second) >= W) return std::nullopt;
    return z;
  };
  PiecewiseHomeo h;
  h.ambient = amb;
  h.name = "step";
  h.fwd = [data, del_north, inner, flat](const AmbientPoint& x) {
    auto z = flat(x);
    if (!z) return x;
    AmbientPoint w = inner->fwd(plane_point(z->first, z->second));
    return suspension_unflatten(data->first, data->second, del_north, {w.x, w.y});
  };
  h.inv = [data, del_north, inner, flat](const AmbientPoint& x) {
    auto z = flat(x);
    if (!z) return x;
    AmbientPoint w = inner->inv(plane_point(z->first, z->second));
    return suspension_unflatten(data->first, data->second, del_north, {w.x, w.y});
  };
  h.support = [inner, flat](const AmbientPoint& x) {
    auto z = flat(x);
    return z && inner->support(plane_point(z->first, z->second));
  };
  return h;
}

} // namespace detail

// --- strong homogeneity ----------------------------------------------------

namespace detail {

// One step a -> b fixing F, in the plane: straight path, rerouted, then a
// chart chain along it.
inline PiecewiseHomeo plane_step(const Ambient& amb, const AmbientPoint& a, const AmbientPoint& b,
                                 const std::vector<AmbientPoint>& F) {
  PLPath path = reroute_path(make_pl_path(amb, {a, b}), F);
  return chain_move(amb, a, b, F, build_chart_chain(amb, path, F));
}

inline PiecewiseHomeo suspension_step(const Ambient& amb, const AmbientPoint& a,
                                      const AmbientPoint& b, const std::vector<AmbientPoint>& F) {
  if (is_pole(a) && is_pole(b)) {
    // Pole to pole: stop over at a ray point, deleting the other pole each
    // time, so both halves fix it for free.
    AmbientPoint mid;
    for (int j = 0;; ++j) {
      mid = ray_point(base_vertex(amb.base, 0), Rat(j));
      if (std::find(F.begin(), F.end(), mid) == F.end()) break;
    }
    PiecewiseHomeo g1 = suspension_step(amb, a, mid, F);
    PiecewiseHomeo g2 = suspension_step(amb, mid, b, F);
    return ph_compose({g1, g2});
  }
  bool del_north = north_point() != a && north_point() != b;
  AmbientPoint gone = deleted_pole(del_north);
  std::vector<Vec2> emb = suspension_embedding(amb.base);
  Vec2 az = suspension_flatten(amb.base, emb, del_north, a);
  Vec2 bz = suspension_flatten(amb.base, emb, del_north, b);
  std::vector<Vec2> fz;
  Rat reach = rat_max(rat_max(rat_abs(az.first), rat_abs(az.second)),
                      rat_max(rat_abs(bz.first), rat_abs(bz.second)));
  for (const AmbientPoint& f : F) {
    if (f == gone) continue;  // the flattening fixes the deleted pole anyway
    Vec2 z = suspension_flatten(amb.base, emb, del_north, f);
    fz.push_back(z);
    reach = rat_max(reach, rat_max(rat_abs(z.first), rat_abs(z.second)));
  }
  Ambient plane = make_plane(8 * (1 + reach));
  std::vector<AmbientPoint> Fp;
  for (const Vec2& z : fz) Fp.push_back(plane_point(z.first, z.second));
  PiecewiseHomeo G = plane_step(plane, plane_point(az.first, az.second),
                                plane_point(bz.first, bz.second), Fp);
  return suspension_pullback(amb, emb, del_north, G);
}

} // namespace detail

// Homeomorphism of the ambient carrying sources[i] to targets[i] for every i,
// built by induction: each point is moved while the already placed targets
// are pinned inside the forbidden set.
inline PiecewiseHomeo strong_n_extend(const Ambient& amb,
                                      const std::vector<AmbientPoint>& sources,
                                      const std::vector<AmbientPoint>& targets, int max_n = 4) {
  if (sources.size() != targets.size())
    fail(errc::out_of_domain, "need one target per source");
  if (int(sources.size()) > max_n)
    fail(errc::unsupported, "tuple longer than the configured bound");
  for (const auto& tuple : {sources, targets}) {
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (!point_in_ambient(amb, tuple[i]))
        fail(errc::ambient_mismatch, "tuple point outside the ambient");
      for (std::size_t j = i + 1; j < tuple.size(); ++j)
        if (tuple[i] == tuple[j]) fail(errc::duplicate_point, "tuple repeats a point");
    }
  }
  bool plane = amb.kind == AmbientKind::plane;
  if (!plane && !(amb.kind == AmbientKind::suspension && graph_is_cycle(amb.base)))
    fail(errc::unsupported_ambient, "tuples move in the plane or a suspension over a cycle");
  PiecewiseHomeo H = ph_identity(amb);
  std::vector<AmbientPoint> placed;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    AmbientPoint a = ph_apply(H, sources[i]);
    const AmbientPoint& b = targets[i];
    if (a != b) {
      PiecewiseHomeo g =
          plane ? detail::plane_step(amb, a, b, placed) : detail::suspension_step(amb, a, b, placed);
      H = ph_compose({H, g});
    }
    placed.push_back(b);
  }
  for (std::size_t i = 0; i < sources.size(); ++i)
    if (ph_apply(H, sources[i]) != targets[i])
      fail(errc::internal, "tuple extension failed to place a point");
  return H;
}

} // namespace conetop
