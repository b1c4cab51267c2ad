// Exact region containment between cone charts, the interlacing predicate,
// slack margins, and chart recentering.
//
// A chart's region above level a is its image of base x (a, inf] (or the
// closed [a, inf]). For honest charts containment reduces to per-ray offset
// comparisons or polygon gauge bounds. For tower charts it is decided by
// certificates: towers agree with their predecessor below level 2k-1, and
// above it their regions are images of predecessor regions under two ambient
// moves whose effect on mate regions is an exact level change.
#pragma once

#include <optional>

#include "conetop/cone_chart.hpp"
#include "conetop/errors.hpp"

namespace conetop {

inline BaseFunc radial_ambient_offset(const ConeChart& c) {
  const RadialChart& rc = chart_radial(c);
  return push_base_func(rc.base, c.ambient.base, rc.iso, rc.offset);
}

// min over the ambient base of (b + D_B) - (a + D_A): positive means the
// closed B-region starts strictly inside the open A-region on every ray.
inline Rat radial_region_margin(const ConeChart& A, const Rat& a,
                                const ConeChart& B, const Rat& b) {
  BaseFunc diff = base_func_sub(A.ambient.base, radial_ambient_offset(B),
                                radial_ambient_offset(A));
  return b - a + base_func_min(A.ambient.base, diff);
}

// Corners of B's closed region boundary at level b, measured in A's gauge.
inline Rat planar_corner_gauge_max(const ConeChart& A, const ConeChart& B,
                                   const Rat& b) {
  const PlanarChart& pa = chart_planar(A);
  const PlanarChart& pb = chart_planar(B);
  std::vector<Vec2> dirs = planar_dirs_ccw(pa);
  Rat wb = width_at(pb.profile, b);
  Vec2 u0 = vsub(pb.center, pa.center);
  Rat best(-1);
  for (const Vec2& d : pb.dirs) {
    Rat g = gauge_value(dirs, vadd(u0, vscale(wb, d)));
    if (g > best) best = g;
  }
  return best;
}

inline bool region_contains(const ConeChart& A, const Rat& a, bool a_closed,
                            const ConeChart& B, const Rat& b, bool b_closed);

namespace detail {

// gamma-certificate: the ambient move conjugated along ts.prev keeps every
// point of the mate region above level b fixed, because that region sits
// inside the part of ts.prev's image the move leaves alone.
inline void require_gamma_cert(const TowerStep& ts, const ConeChart& mate_side,
                               const Rat& b) {
  // The certificate proved at construction covers every level from the
  // stored floor up; below it fall back to a fresh containment check.
  if (ts.cert_floor > 0 && b >= ts.cert_floor) return;
  if (!region_contains(ts.prev, Rat(2 * ts.k - 1) + ts.r, true, mate_side, b, true))
    fail(errc::unsupported, "containment certificate failed at level " + rat_str(b));
}

inline bool honest_contains(const ConeChart& A, const Rat& a, bool a_closed,
                            const ConeChart& B, const Rat& b, bool b_closed) {
  const bool strict = !a_closed && b_closed;
  if (chart_is_radial(A) && chart_is_radial(B)) {
    if (chart_radial(A).south != chart_radial(B).south) return false;
    Rat m = radial_region_margin(A, a, B, b);
    return strict ? m > 0 : m >= 0;
  }
  if (chart_is_planar(A) && chart_is_planar(B)) {
    Rat M = planar_corner_gauge_max(A, B, b);
    Rat wa = width_at(chart_planar(A).profile, a);
    return strict ? M < wa : M <= wa;
  }
  fail(errc::internal, "mismatched honest chart forms in one ambient");
}

} // namespace detail

// Does A's region above a contain B's region above b?
inline bool region_contains(const ConeChart& A, const Rat& a, bool a_closed,
                            const ConeChart& B, const Rat& b, bool b_closed) {
  if (A.ambient != B.ambient)
    fail(errc::ambient_mismatch, "containment needs one shared ambient");
  if (a <= 0 || b <= 0) fail(errc::out_of_domain, "region levels must be positive");
  if (chart_is_tower(A)) {
    const TowerStep& ts = chart_tower(A);
    if (a <= Rat(2 * ts.k - 1))  // towers agree with prev below the seam
      return region_contains(ts.prev, a, a_closed, B, b, b_closed);
    if (!chart_same(B, ts.mate))
      fail(errc::unsupported, "tower containment against a chart that is not its mate");
    detail::require_gamma_cert(ts, B, b);
    return region_contains(ts.prev, pl_eval(ts.maps.lower, a), a_closed, B,
                           pl_eval_inv(ts.maps.raise, b), b_closed);
  }
  if (chart_is_tower(B)) {
    const TowerStep& ts = chart_tower(B);
    if (b <= Rat(2 * ts.k - 1))
      return region_contains(A, a, a_closed, ts.prev, b, b_closed);
    if (!chart_same(A, ts.mate))
      fail(errc::unsupported, "tower containment against a chart that is not its mate");
    detail::require_gamma_cert(ts, A, a);
    return region_contains(A, pl_eval_inv(ts.maps.raise, a), a_closed, ts.prev,
                           pl_eval(ts.maps.lower, b), b_closed);
  }
  return detail::honest_contains(A, a, a_closed, B, b, b_closed);
}

// Charts are k-interlaced when, counting from the outside in, their regions
// nest strictly in alternation:
//   A above 2i-1 contains B above 2i        (closed), i = 1..k
//   B above 2i contains A above 2i+1        (closed), i = 1..k-1
inline bool is_k_interlaced(const ConeChart& A, const ConeChart& B, int k) {
  if (k < 1) fail(errc::invalid_k, "interlacing depth must be at least 1");
  if (A.ambient != B.ambient)
    fail(errc::ambient_mismatch, "interlacing needs one shared ambient");
  for (int i = 1; i <= k; ++i)
    if (!region_contains(A, Rat(2 * i - 1), false, B, Rat(2 * i), true)) return false;
  for (int i = 1; i + 1 <= k; ++i)
    if (!region_contains(B, Rat(2 * i), false, A, Rat(2 * i + 1), true)) return false;
  return true;
}

// sup { a : A's open region above a contains B's closed region above b },
// or 0 when no positive level works.
inline Rat sup_outer_level(const ConeChart& A, const ConeChart& B, const Rat& b) {
  if (chart_is_tower(A)) {
    const TowerStep& ts = chart_tower(A);
    if (!chart_same(B, ts.mate))
      fail(errc::unsupported, "tower slack against a chart that is not its mate");
    detail::require_gamma_cert(ts, B, b);
    Rat inner = sup_outer_level(ts.prev, B, pl_eval_inv(ts.maps.raise, b));
    if (inner <= 0) return Rat(0);
    return pl_eval_inv(ts.maps.lower, inner);
  }
  if (chart_is_tower(B)) {
    const TowerStep& ts = chart_tower(B);
    if (!chart_same(A, ts.mate))
      fail(errc::unsupported, "tower slack against a chart that is not its mate");
    // The unwind only certifies outer levels from 2k up; below that nothing
    // is claimed, which the 0 return encodes.
    detail::require_gamma_cert(ts, A, Rat(2 * ts.k));
    Rat inner = sup_outer_level(A, ts.prev, pl_eval(ts.maps.lower, b));
    if (inner <= 0) return Rat(0);
    Rat cand = pl_eval(ts.maps.raise, inner);
    return cand >= Rat(2 * ts.k) ? cand : Rat(0);
  }
  if (chart_is_radial(A)) {
    if (chart_radial(A).south != chart_radial(B).south) return Rat(0);
    Rat m = radial_region_margin(A, Rat(1), B, b);  // sup = 1 + margin
    Rat s = Rat(1) + m;
    return s > 0 ? s : Rat(0);
  }
  Rat M = planar_corner_gauge_max(A, B, b);
  auto s = level_for_width(chart_planar(A).profile, M);
  if (!s) return Rat(0);
  return *s;
}

// inf { b : A's open region above a contains B's closed region above b };
// containment then holds exactly for b above the returned level. nullopt
// when no level works at all.
inline std::optional<Rat> inf_inner_level(const ConeChart& A, const Rat& a,
                                          const ConeChart& B) {
  if (chart_is_tower(A) || chart_is_tower(B))
    fail(errc::unsupported, "inner slack is only computed for honest charts");
  if (chart_is_radial(A)) {
    if (chart_radial(A).south != chart_radial(B).south) return std::nullopt;
    Rat m = radial_region_margin(A, a, B, Rat(0));  // inf = -margin at b = 0
    return Rat(-m);
  }
  const PlanarChart& pa = chart_planar(A);
  const PlanarChart& pb = chart_planar(B);
  std::vector<Vec2> dirs = planar_dirs_ccw(pa);
  Rat R = width_at(pa.profile, a);
  Vec2 u0 = vsub(pb.center, pa.center);
  if (gauge_value(dirs, u0) >= R) return std::nullopt;  // B's vertex escapes
  std::optional<Rat> omega;
  for (const Vec2& d : pb.dirs) {
    Rat s = ray_exit_gauge(dirs, R, u0, d);
    if (!omega || s < *omega) omega = s;
  }
  auto b = level_for_width(pb.profile, *omega);
  if (!b) return Rat(0);  // even the widest B-region fits
  return *b;
}

// Planar chart with the same shape recentered at q and scaled until the pair
// is exactly 2-interlaced. The search proves its result; failure means q
// gives no room for an interlaced chart.
inline ConeChart recenter_chart(const ConeChart& phi, const AmbientPoint& q) {
  if (!chart_is_planar(phi))
    fail(errc::unsupported, "recentering is built for planar charts");
  if (chart_invert(phi, q).kind == ChartPos::Kind::outside)
    fail(errc::target_too_shallow, "target lies outside the chart");
  const PlanarChart& pc = chart_planar(phi);
  Rat sigma(1);
  for (int step = 0; step <= 40; ++step, sigma /= 2) {
    ConeChart psi;
    try {
      psi = make_planar_chart(phi.ambient, pc.base, pc.dirs, Vec2{q.x, q.y},
                              scale_width_profile(pc.profile, sigma));
    } catch (const error&) {
      continue;  // this scale pokes out of the square; try smaller
    }
    if (is_k_interlaced(phi, psi, 2)) return psi;
  }
  fail(errc::target_too_shallow,
       "no interlaced chart fits at " + ambient_point_str(q));
}

} // namespace conetop
