// Piecewise-linear paths in an ambient space: waypoints joined by straight
// plane segments, by arcs over one edge of the base, or by ray segments that
// climb into a cone point.
#pragma once

#include <optional>
#include <vector>

#include "conetop/ambient.hpp"
#include "conetop/base_graph.hpp"
#include "conetop/errors.hpp"
#include "conetop/rational.hpp"

namespace conetop {

struct PLPath {
  Ambient ambient;
  std::vector<AmbientPoint> pts;
};

namespace detail {

// Linear track between two joinable base points: either one fixed point or a
// stretch of one edge between coordinates c0 and c1 (measured from the
// lower-numbered endpoint).
struct BaseTrack {
  bool fixed = true;
  BasePoint at;
  int e = -1;
  Rat c0, c1;
};

inline std::optional<Rat> edge_coord(const BaseGraph& g, int e, const BasePoint& p) {
  if (!p.is_vertex()) return p.e == e ? std::optional<Rat>(p.u) : std::nullopt;
  if (g.edges[e].first == p.v) return std::optional<Rat>(Rat(0));
  if (g.edges[e].second == p.v) return std::optional<Rat>(Rat(1));
  return std::nullopt;
}

inline std::optional<BaseTrack> base_track(const BaseGraph& g, const BasePoint& a,
                                           const BasePoint& b) {
  if (a == b) return BaseTrack{true, a, -1, Rat(0), Rat(0)};
  int e = -1;
  if (!a.is_vertex())
    e = a.e;
  else if (!b.is_vertex())
    e = b.e;
  else
    for (int i = 0; i < int(g.edges.size()) && e < 0; ++i)
      if ((g.edges[i].first == a.v && g.edges[i].second == b.v) ||
          (g.edges[i].first == b.v && g.edges[i].second == a.v))
        e = i;
  if (e < 0) return std::nullopt;
  auto ca = edge_coord(g, e, a), cb = edge_coord(g, e, b);
  if (!ca || !cb) return std::nullopt;
  return BaseTrack{false, {}, e, *ca, *cb};
}

inline BasePoint track_point(const BaseGraph& g, const BaseTrack& t, const Rat& u) {
  if (t.fixed) return t.at;
  Rat c = t.c0 + u * (t.c1 - t.c0);
  return base_edge_point(g, t.e, c);
}

// Parameter u in [0, 1] at which the track passes through x, if it does.
inline std::optional<Rat> track_locate(const BaseGraph& g, const BaseTrack& t,
                                       const BasePoint& x) {
  if (t.fixed) return x == t.at ? std::optional<Rat>(Rat(0)) : std::nullopt;
  auto c = edge_coord(g, t.e, x);
  if (!c) return std::nullopt;
  Rat u = (*c - t.c0) / (t.c1 - t.c0);
  if (u < 0 || u > 1) return std::nullopt;
  return u;
}

inline bool is_pole(const AmbientPoint& p) {
  return p.tag == AmbientPoint::Tag::apex || p.tag == AmbientPoint::Tag::north ||
         p.tag == AmbientPoint::Tag::south;
}

// Height change per unit of blow-up when a segment climbs into this pole.
inline int pole_sign(const AmbientPoint& p) {
  return p.tag == AmbientPoint::Tag::south ? -1 : 1;
}

} // namespace detail

inline bool segment_joinable(const Ambient& amb, const AmbientPoint& a, const AmbientPoint& b) {
  if (!point_in_ambient(amb, a) || !point_in_ambient(amb, b)) return false;
  if (a == b) return true;
  if (amb.kind == AmbientKind::plane) return true;
  if (detail::is_pole(a) && detail::is_pole(b)) return false;
  if (detail::is_pole(a) || detail::is_pole(b)) return true;
  return detail::base_track(amb.base, a.at, b.at).has_value();
}

inline AmbientPoint segment_eval(const Ambient& amb, const AmbientPoint& a, const AmbientPoint& b,
                                 const Rat& u) {
  if (u < 0 || u > 1) fail(errc::out_of_domain, "segment parameter outside [0, 1]");
  if (!segment_joinable(amb, a, b)) fail(errc::non_pl, "waypoints are not joinable");
  if (u == 0 || a == b) return a;
  if (u == 1) return b;
  if (amb.kind == AmbientKind::plane)
    return plane_point(a.x + u * (b.x - a.x), a.y + u * (b.y - a.y));
  if (detail::is_pole(b)) return ray_point(a.at, a.s + detail::pole_sign(b) * u / (1 - u));
  if (detail::is_pole(a)) return ray_point(b.at, b.s + detail::pole_sign(a) * (1 - u) / u);
  auto t = detail::base_track(amb.base, a.at, b.at);
  return ray_point(detail::track_point(amb.base, *t, u), a.s + u * (b.s - a.s));
}

inline bool segment_contains(const Ambient& amb, const AmbientPoint& a, const AmbientPoint& b,
                             const AmbientPoint& x) {
  if (!segment_joinable(amb, a, b)) fail(errc::non_pl, "waypoints are not joinable");
  if (x == a || x == b) return true;
  if (a == b) return false;
  if (amb.kind == AmbientKind::plane) {
    if (x.tag != AmbientPoint::Tag::plane) return false;
    Rat dx = b.x - a.x, dy = b.y - a.y;
    if (dx * (x.y - a.y) != dy * (x.x - a.x)) return false;
    Rat u = dx != 0 ? (x.x - a.x) / dx : (x.y - a.y) / dy;
    return u >= 0 && u <= 1;
  }
  if (x.tag != AmbientPoint::Tag::ray) return false;
  if (detail::is_pole(b))
    return x.at == a.at && (detail::pole_sign(b) > 0 ? x.s >= a.s : x.s <= a.s);
  if (detail::is_pole(a))
    return x.at == b.at && (detail::pole_sign(a) > 0 ? x.s >= b.s : x.s <= b.s);
  auto t = detail::base_track(amb.base, a.at, b.at);
  auto u = detail::track_locate(amb.base, *t, x.at);
  if (!u) return false;
  if (t->fixed) {
    if (a.s == b.s) return x.s == a.s;
    Rat w = (x.s - a.s) / (b.s - a.s);
    return w >= 0 && w <= 1;
  }
  return x.s == a.s + *u * (b.s - a.s);
}

inline PLPath make_pl_path(Ambient amb, std::vector<AmbientPoint> pts) {
  if (pts.empty()) fail(errc::empty_domain, "a path needs at least one waypoint");
  for (const auto& p : pts)
    if (!point_in_ambient(amb, p))
      fail(errc::ambient_mismatch, "waypoint does not live in the ambient");
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (!segment_joinable(amb, pts[i], pts[i + 1]))
      fail(errc::non_pl, "consecutive waypoints are not joinable");
  return PLPath{std::move(amb), std::move(pts)};
}

inline AmbientPoint path_eval(const PLPath& path, const Rat& tau) {
  if (tau < 0 || tau > 1) fail(errc::out_of_domain, "path parameter outside [0, 1]");
  int m = int(path.pts.size()) - 1;
  if (m == 0) return path.pts.front();
  Rat scaled = tau * m;
  mpz_class k;
  mpz_fdiv_q(k.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  long seg = k.get_si();
  if (seg == m) seg = m - 1;
  return segment_eval(path.ambient, path.pts[seg], path.pts[seg + 1], scaled - Rat(int(seg)));
}

inline bool point_on_path(const PLPath& path, const AmbientPoint& x) {
  if (path.pts.size() == 1) return x == path.pts.front();
  for (std::size_t i = 0; i + 1 < path.pts.size(); ++i)
    if (segment_contains(path.ambient, path.pts[i], path.pts[i + 1], x)) return true;
  return false;
}

inline bool operator==(const PLPath& a, const PLPath& b) {
  return a.ambient == b.ambient && a.pts == b.pts;
}
inline bool operator!=(const PLPath& a, const PLPath& b) { return !(a == b); }

} // namespace conetop
