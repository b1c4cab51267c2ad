// Exact planar ingredients for polygon cone charts: decreasing width
// profiles and convex polygon gauges.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "conetop/errors.hpp"
#include "conetop/level.hpp"
#include "conetop/rational.hpp"

namespace conetop {

// Strictly decreasing width of a chart level set. Linear pieces from the
// (excluded) value w0 at level 0 through the knots, then a reciprocal tail
// w(t) = c/t past the last knot, so every positive level has positive width
// and widths shrink to zero toward the vertex.
struct WidthProfile {
  Rat w0;
  std::vector<std::pair<Rat, Rat>> knots;  // (level, width)
};

inline WidthProfile make_width_profile(const Rat& w0,
                                       std::vector<std::pair<Rat, Rat>> knots) {
  if (w0 <= 0) fail(errc::non_monotone, "profile sup width must be positive");
  if (knots.empty()) fail(errc::empty_domain, "profile needs at least one knot");
  Rat pt(0), pw = w0;
  for (const auto& [t, w] : knots) {
    if (t <= pt) fail(errc::non_monotone, "profile levels must increase");
    if (w <= 0 || w >= pw) fail(errc::non_monotone, "profile widths must decrease");
    pt = t;
    pw = w;
  }
  return WidthProfile{w0, std::move(knots)};
}

inline Rat width_at(const WidthProfile& p, const Rat& t) {
  if (t <= 0) fail(errc::out_of_domain, "width needs a positive level");
  std::pair<Rat, Rat> lo{Rat(0), p.w0};
  for (const auto& k : p.knots) {
    if (k.first >= t) {
      return lo.second + (t - lo.first) * (k.second - lo.second) / (k.first - lo.first);
    }
    lo = k;
  }
  return lo.first * lo.second / t;  // reciprocal tail through the last knot
}

// Level with width_at(level) == w; nullopt when w >= w0 (no level is that
// wide) . Widths are strictly decreasing so the level is unique.
inline std::optional<Rat> level_for_width(const WidthProfile& p, const Rat& w) {
  if (w <= 0) fail(errc::out_of_domain, "width must be positive");
  if (w >= p.w0) return std::nullopt;
  std::pair<Rat, Rat> lo{Rat(0), p.w0};
  for (const auto& k : p.knots) {
    if (k.second <= w) {
      return Rat(lo.first + (w - lo.second) * (k.first - lo.first) / (k.second - lo.second));
    }
    lo = k;
  }
  return Rat(lo.first * lo.second / w);
}

inline WidthProfile scale_width_profile(const WidthProfile& p, const Rat& s) {
  if (s <= 0) fail(errc::out_of_domain, "scale must be positive");
  WidthProfile q;
  q.w0 = p.w0 * s;
  q.knots.reserve(p.knots.size());
  for (const auto& [t, w] : p.knots) q.knots.emplace_back(t, w * s);
  return q;
}

using Vec2 = std::pair<Rat, Rat>;

inline Rat cross2(const Vec2& a, const Vec2& b) {
  return a.first * b.second - a.second * b.first;
}
inline Vec2 vsub(const Vec2& a, const Vec2& b) {
  return {a.first - b.first, a.second - b.second};
}
inline Vec2 vadd(const Vec2& a, const Vec2& b) {
  return {a.first + b.first, a.second + b.second};
}
inline Vec2 vscale(const Rat& s, const Vec2& a) {
  return {s * a.first, s * a.second};
}

// Directions must walk once counterclockwise around the origin: every
// consecutive pair (cyclically) turns left through an angle below pi.
inline void check_gauge_dirs(const std::vector<Vec2>& dirs) {
  if (dirs.size() < 3) fail(errc::wrong_graph, "polygon gauge needs >= 3 directions");
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Vec2& a = dirs[i];
    const Vec2& b = dirs[(i + 1) % dirs.size()];
    if (cross2(a, b) <= 0)
      fail(errc::wrong_graph, "gauge directions must be strictly counterclockwise");
  }
}

// Coefficients of x in the sector cone spanned by consecutive directions:
// x = a*d_i + b*d_{i+1} with a, b >= 0. gauge(x) = a + b.
struct SectorCoords {
  std::size_t i = 0;  // sector between dirs[i] and dirs[i+1 mod m]
  Rat a, b;
};

inline SectorCoords gauge_sector(const std::vector<Vec2>& dirs, const Vec2& x) {
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const Vec2& d0 = dirs[i];
    const Vec2& d1 = dirs[(i + 1) % dirs.size()];
    if (cross2(d0, x) < 0 || cross2(x, d1) < 0) continue;
    Rat det = cross2(d0, d1);
    return SectorCoords{i, cross2(x, d1) / det, cross2(d0, x) / det};
  }
  fail(errc::internal, "point escapes every gauge sector");
}

inline Rat gauge_value(const std::vector<Vec2>& dirs, const Vec2& x) {
  if (x.first == 0 && x.second == 0) return Rat(0);
  SectorCoords sc = gauge_sector(dirs, x);
  return sc.a + sc.b;
}

// Smallest s > 0 with gauge(x0 + s*d) == R, for gauge(x0) < R and d != 0.
// The sublevel set is convex, so the crossing is unique.
inline Rat ray_exit_gauge(const std::vector<Vec2>& dirs, const Rat& R,
                          const Vec2& x0, const Vec2& d) {
  std::optional<Rat> best;
  const std::size_t m = dirs.size();
  for (std::size_t i = 0; i < m; ++i) {
    // Solve x0 + s*d = R*(d_i + c*(d_{i+1} - d_i)), s >= 0, 0 <= c <= 1.
    const Vec2 p = vscale(R, dirs[i]);
    const Vec2 q = vscale(R, dirs[(i + 1) % m]);
    const Vec2 pq = vsub(q, p);
    Rat det = cross2(d, pq);
    if (det == 0) continue;  // ray parallel to this edge
    const Vec2 w = vsub(p, x0);
    Rat s = cross2(w, pq) / det;
    Rat c = cross2(w, d) / det;
    if (s <= 0 || c < 0 || c > 1) continue;
    if (!best || s < *best) best = s;
  }
  if (!best) fail(errc::internal, "ray never leaves the gauge ball");
  return *best;
}

} // namespace conetop
