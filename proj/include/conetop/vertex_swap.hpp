// The vertex-swap homeomorphism of an interlaced chart pair.
//
// Write U, V for the images of phi and psi, S and T for the depth-2 shifts
// along phi and psi, and carve X into
//   core  = (X - U) u phi(0,1] u A0,   A0 = phi[1,..] - psi(2,..]
//   B1 = C1 = psi[2,..] - phi(3,..],   D1 = phi[3,..] - psi(4,..]
//   Bn = S^(n-1) B1,  An = S^n A0,  Cn = T^(n-1) C1,  Dn = T^(n-1) D1
// together with the two vertices. The swap h fixes the core, sends p to q,
// Bn over Cn by T^(n-1) S^-(n-1), and An over Dn by T^(n-1) a S^-n, where
// a = (lift along phi) after (stretch along psi) carries A0 onto D1.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "conetop/cone_chart.hpp"
#include "conetop/errors.hpp"
#include "conetop/interlace.hpp"
#include "conetop/piecewise_homeo.hpp"

namespace conetop {

struct InterlacedPair {
  ConeChart phi, psi;
};

inline InterlacedPair make_interlaced_pair(ConeChart phi, ConeChart psi) {
  if (chart_is_tower(phi) || chart_is_tower(psi))
    fail(errc::unsupported, "the vertex swap starts from honest charts");
  if (!is_k_interlaced(phi, psi, 2))
    fail(errc::not_interlaced, "charts are not 2-interlaced");
  return InterlacedPair{std::move(phi), std::move(psi)};
}

// Margin r > 0 such that phi's region above 1 contains psi's closed region
// above 2 - r, and phi's region above 3 + r still contains psi's above 4.
// Found from the two exact slack levels, then halved to stay strict.
inline Rat swap_margin(const InterlacedPair& pr) {
  auto inner = inf_inner_level(pr.phi, Rat(1), pr.psi);
  if (!inner) fail(errc::not_interlaced, "no inner slack at level 1");
  Rat ra = Rat(2) - *inner;
  Rat rb = sup_outer_level(pr.phi, pr.psi, Rat(4)) - Rat(3);
  Rat r = rat_min(ra, rb) / 2;
  if (r <= 0) fail(errc::not_interlaced, "interlacing leaves no margin");
  return rat_min(r, Rat(3, 4));
}

// Both vertex-swap constructions share this bundle.
struct SwapHomeo {
  InterlacedPair pair;
  Rat r;
  TransferMaps maps;
};

inline SwapHomeo build_vertex_swap(const InterlacedPair& pr) {
  SwapHomeo h;
  h.pair = pr;
  h.r = swap_margin(pr);
  h.maps = make_transfer_maps(h.r);
  return h;
}

struct SwapRegion {
  enum class Kind { core, b, a, p, core_v, c, d, q };
  Kind kind = Kind::core;
  // Region index; an arbitrary-precision integer because composites of
  // vertex moves send nearby points to astronomically deep levels.
  mpz_class n = 0;

  std::string str() const {
    switch (kind) {
      case Kind::core: return "Core";
      case Kind::b: return "B" + n.get_str();
      case Kind::a: return "A" + n.get_str();
      case Kind::p: return "P";
      case Kind::core_v: return "CoreV";
      case Kind::c: return "C" + n.get_str();
      case Kind::d: return "D" + n.get_str();
      case Kind::q: return "Q";
    }
    return "?";
  }
};

inline bool operator==(const SwapRegion& a, const SwapRegion& b) {
  return a.kind == b.kind && a.n == b.n;
}

namespace detail {

inline bool region_level_at_most(const ConeChart& c, const AmbientPoint& x,
                                 const Rat& bound) {
  // True when x misses c's open region above `bound`: outside c entirely or
  // at level <= bound. The chart vertex never qualifies.
  ChartPos pos = chart_invert(c, x);
  if (pos.kind == ChartPos::Kind::outside) return true;
  if (pos.kind == ChartPos::Kind::vertex) return false;
  return pos.t.v <= bound;
}

inline bool region_level_at_least(const ConeChart& c, const AmbientPoint& x,
                                  const Rat& bound) {
  ChartPos pos = chart_invert(c, x);
  if (pos.kind == ChartPos::Kind::outside) return false;
  if (pos.kind == ChartPos::Kind::vertex) return true;
  return pos.t.v >= bound;
}

} // namespace detail

// x in A0 = phi[1,..] - psi(2,..].
inline bool in_swap_pocket(const InterlacedPair& pr, const AmbientPoint& x) {
  return detail::region_level_at_least(pr.phi, x, Rat(1)) &&
         detail::region_level_at_most(pr.psi, x, Rat(2)) &&
         chart_invert(pr.phi, x).kind != ChartPos::Kind::vertex;
}

// x in B1 = psi[2,..] - phi(3,..].
inline bool in_swap_band(const InterlacedPair& pr, const AmbientPoint& x) {
  return detail::region_level_at_least(pr.psi, x, Rat(2)) &&
         detail::region_level_at_most(pr.phi, x, Rat(3)) &&
         chart_invert(pr.psi, x).kind != ChartPos::Kind::vertex;
}

// x in D1 = phi[3,..] - psi(4,..].
inline bool in_swap_pocket_image(const InterlacedPair& pr, const AmbientPoint& x) {
  return detail::region_level_at_least(pr.phi, x, Rat(3)) &&
         detail::region_level_at_most(pr.psi, x, Rat(4)) &&
         chart_invert(pr.phi, x).kind != ChartPos::Kind::vertex;
}

// The depth shift: phi(y, t) -> phi(y, t + 2 steps), fixing the vertex.
inline AmbientPoint shift_along(const ConeChart& c, const AmbientPoint& x,
                                const mpz_class& steps) {
  ChartPos pos = chart_invert(c, x);
  if (pos.kind == ChartPos::Kind::outside)
    fail(errc::outside_chart, "shift of a point outside the chart");
  if (pos.kind == ChartPos::Kind::vertex) return x;
  Rat t2 = pos.t.v + Rat(mpz_class(2 * steps));
  if (t2 <= 0)
    fail(errc::shift_out_of_range, "shift would leave the chart at level " + rat_str(t2));
  return chart_eval(c, pos.y, level(t2));
}

inline AmbientPoint shift_along(const ConeChart& c, const AmbientPoint& x, int steps) {
  return shift_along(c, x, mpz_class(steps));
}

// a = (lift conjugated along phi) after (stretch conjugated along psi);
// carries A0 onto D1, agreeing with S on phi-level 1 and T on psi-level 2.
inline AmbientPoint swap_pocket_apply(const SwapHomeo& h, const AmbientPoint& x) {
  AmbientPoint y = x;
  ChartPos ps = chart_invert(h.pair.psi, y);
  if (ps.kind == ChartPos::Kind::interior && !ps.t.inf &&
      pl_in_domain(h.maps.stretch, ps.t.v))
    y = chart_eval(h.pair.psi, ps.y, pl_eval(h.maps.stretch, ps.t));
  ChartPos pf = chart_invert(h.pair.phi, y);
  if (pf.kind == ChartPos::Kind::interior && !pf.t.inf &&
      pl_in_domain(h.maps.lift, pf.t.v))
    y = chart_eval(h.pair.phi, pf.y, pl_eval(h.maps.lift, pf.t));
  return y;
}

inline AmbientPoint swap_pocket_apply_inv(const SwapHomeo& h, const AmbientPoint& x) {
  PLHomeo lift_inv = pl_invert(h.maps.lift);
  PLHomeo stretch_inv = pl_invert(h.maps.stretch);
  AmbientPoint y = x;
  ChartPos pf = chart_invert(h.pair.phi, y);
  if (pf.kind == ChartPos::Kind::interior && !pf.t.inf &&
      pl_in_domain(lift_inv, pf.t.v))
    y = chart_eval(h.pair.phi, pf.y, pl_eval(lift_inv, pf.t));
  ChartPos ps = chart_invert(h.pair.psi, y);
  if (ps.kind == ChartPos::Kind::interior && !ps.t.inf &&
      pl_in_domain(stretch_inv, ps.t.v))
    y = chart_eval(h.pair.psi, ps.y, pl_eval(stretch_inv, ps.t));
  return y;
}

// All labels on the phi side (core, P, Bn, An), in priority order
// core < B1 < A1 < B2 < ... ; overlapping labels agree under the swap.
inline std::vector<SwapRegion> classify_swap(const InterlacedPair& pr,
                                             const AmbientPoint& x) {
  std::vector<SwapRegion> out;
  ChartPos pf = chart_invert(pr.phi, x);
  if (pf.kind == ChartPos::Kind::vertex) {
    out.push_back({SwapRegion::Kind::p, 0});
    return out;
  }
  if (pf.kind == ChartPos::Kind::outside || pf.t.v <= 1 || in_swap_pocket(pr, x))
    out.push_back({SwapRegion::Kind::core, 0});
  if (pf.kind == ChartPos::Kind::outside) return out;
  // B1 occupies phi-levels (1, 3] and A0 occupies [1, 3), so Bn and An are
  // possible only at one index each: the point shifted down by it must land
  // back in that window. This keeps deep points at constant cost.
  const Rat t = pf.t.v;
  mpz_class nb = rat_ceil((t - 1) / 2);
  mpz_class na = rat_floor((t - 1) / 2);
  for (mpz_class n = na; n <= nb; ++n) {
    if (n < 1) continue;
    if (n == nb && in_swap_band(pr, shift_along(pr.phi, x, mpz_class(1 - n))))
      out.push_back({SwapRegion::Kind::b, n});
    if (n == na && Rat(mpz_class(2 * n)) < t &&
        in_swap_pocket(pr, shift_along(pr.phi, x, mpz_class(-n))))
      out.push_back({SwapRegion::Kind::a, n});
  }
  return out;
}

// All labels on the psi side (coreV, Q, Cn, Dn), priority
// coreV < C1 < D1 < C2 < ...
inline std::vector<SwapRegion> classify_swap_inv(const InterlacedPair& pr,
                                                 const AmbientPoint& x) {
  std::vector<SwapRegion> out;
  ChartPos ps = chart_invert(pr.psi, x);
  if (ps.kind == ChartPos::Kind::vertex) {
    out.push_back({SwapRegion::Kind::q, 0});
    return out;
  }
  if (ps.kind == ChartPos::Kind::outside || ps.t.v <= 2)
    out.push_back({SwapRegion::Kind::core_v, 0});
  if (ps.kind == ChartPos::Kind::outside) return out;
  // C1 occupies psi-levels [2, 4) and D1 occupies (2, 4]; as on the phi side,
  // each family has a single candidate index.
  const Rat s = ps.t.v;
  mpz_class nc = rat_floor(s / 2);
  mpz_class nd = rat_ceil((s - 2) / 2);
  for (mpz_class n = nd; n <= nc; ++n) {
    if (n < 1) continue;
    AmbientPoint xc = shift_along(pr.psi, x, mpz_class(1 - n));
    if (n == nc && in_swap_band(pr, xc)) out.push_back({SwapRegion::Kind::c, n});
    if (n == nd && in_swap_pocket_image(pr, xc)) out.push_back({SwapRegion::Kind::d, n});
  }
  return out;
}

// The constituent formula of one phi-side region label, defined on the
// label's whole closure; verification replays these independently of the
// classification priority to confirm they agree where labels overlap.
inline AmbientPoint swap_region_apply(const SwapHomeo& h, const SwapRegion& r,
                                      const AmbientPoint& x) {
  switch (r.kind) {
    case SwapRegion::Kind::p: return chart_vertex(h.pair.psi);
    case SwapRegion::Kind::core: return x;
    case SwapRegion::Kind::b:
      return shift_along(h.pair.psi, shift_along(h.pair.phi, x, mpz_class(1 - r.n)),
                         mpz_class(r.n - 1));
    case SwapRegion::Kind::a:
      return shift_along(h.pair.psi,
                         swap_pocket_apply(h, shift_along(h.pair.phi, x, mpz_class(-r.n))),
                         mpz_class(r.n - 1));
    default:
      fail(errc::internal, "phi-side formula asked for a psi label");
  }
}

inline AmbientPoint swap_region_apply_inv(const SwapHomeo& h, const SwapRegion& r,
                                          const AmbientPoint& x) {
  switch (r.kind) {
    case SwapRegion::Kind::q: return chart_vertex(h.pair.phi);
    case SwapRegion::Kind::core_v: return x;
    case SwapRegion::Kind::c:
      return shift_along(h.pair.phi, shift_along(h.pair.psi, x, mpz_class(1 - r.n)),
                         mpz_class(r.n - 1));
    case SwapRegion::Kind::d:
      return shift_along(h.pair.phi,
                         swap_pocket_apply_inv(h, shift_along(h.pair.psi, x, mpz_class(1 - r.n))),
                         mpz_class(r.n));
    default:
      fail(errc::internal, "psi-side formula asked for a phi label");
  }
}

inline AmbientPoint swap_apply(const SwapHomeo& h, const AmbientPoint& x) {
  std::vector<SwapRegion> labels = classify_swap(h.pair, x);
  if (labels.empty())
    fail(errc::internal, "swap regions miss " + ambient_point_str(x));
  return swap_region_apply(h, labels.front(), x);
}

inline AmbientPoint swap_apply_inv(const SwapHomeo& h, const AmbientPoint& x) {
  std::vector<SwapRegion> labels = classify_swap_inv(h.pair, x);
  if (labels.empty())
    fail(errc::internal, "swap regions miss " + ambient_point_str(x));
  return swap_region_apply_inv(h, labels.front(), x);
}

inline PiecewiseHomeo swap_as_piecewise(const SwapHomeo& h, std::string name = "swap") {
  auto sh = std::make_shared<SwapHomeo>(h);
  PiecewiseHomeo out;
  out.ambient = h.pair.phi.ambient;
  out.name = std::move(name);
  out.fwd = [sh](const AmbientPoint& x) { return swap_apply(*sh, x); };
  out.inv = [sh](const AmbientPoint& x) { return swap_apply_inv(*sh, x); };
  out.support = [sh](const AmbientPoint& x) {
    return chart_covers(sh->pair.phi, x) || chart_covers(sh->pair.psi, x);
  };
  return out;
}

} // namespace conetop
