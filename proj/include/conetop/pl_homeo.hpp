// Increasing piecewise-linear homeomorphisms of rational intervals.
//
// A map is a strictly increasing breakpoint list, optionally extended past
// either end by a slope-1 translation tail. An upper tail fixes +infinity,
// which is what the radial reparametrizations of cone charts need.
#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conetop/errors.hpp"
#include "conetop/level.hpp"
#include "conetop/rational.hpp"

namespace conetop {

struct PLHomeo {
  // Strictly increasing in both coordinates; at least two entries.
  std::vector<std::pair<Rat, Rat>> pts;
  // Translation tails. The offset of each tail is determined by the nearest
  // breakpoint, so the representation stays unambiguous.
  bool below = false;
  bool above = false;
};

inline PLHomeo pl_make(std::vector<std::pair<Rat, Rat>> pts,
                       bool below = false, bool above = false) {
  if (pts.size() < 2) fail(errc::empty_domain, "need at least two breakpoints");
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i - 1].first < pts[i].first) || !(pts[i - 1].second < pts[i].second))
      fail(errc::non_monotone, "breakpoints must increase strictly in both coordinates");
  }
  return PLHomeo{std::move(pts), below, above};
}

// Domain endpoints; nullopt encodes the corresponding infinity.
inline std::optional<Rat> pl_domain_lo(const PLHomeo& f) {
  if (f.below) return std::nullopt;
  return f.pts.front().first;
}
inline std::optional<Rat> pl_domain_hi(const PLHomeo& f) {
  if (f.above) return std::nullopt;
  return f.pts.back().first;
}
inline std::optional<Rat> pl_range_lo(const PLHomeo& f) {
  if (f.below) return std::nullopt;
  return f.pts.front().second;
}
inline std::optional<Rat> pl_range_hi(const PLHomeo& f) {
  if (f.above) return std::nullopt;
  return f.pts.back().second;
}

inline bool pl_in_domain(const PLHomeo& f, const Rat& t) {
  if (!f.below && t < f.pts.front().first) return false;
  if (!f.above && t > f.pts.back().first) return false;
  return true;
}

inline Rat pl_eval(const PLHomeo& f, const Rat& t) {
  if (!pl_in_domain(f, t))
    fail(errc::out_of_domain, "pl_eval at " + rat_str(t));
  if (t <= f.pts.front().first) {
    const auto& p = f.pts.front();
    return Rat(t + (p.second - p.first));  // exact on the breakpoint too
  }
  if (t >= f.pts.back().first) {
    const auto& p = f.pts.back();
    return Rat(t + (p.second - p.first));
  }
  // Find the segment with pts[i].first <= t < pts[i+1].first.
  std::size_t lo = 0, hi = f.pts.size() - 1;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (f.pts[mid].first <= t) lo = mid; else hi = mid;
  }
  const auto& a = f.pts[lo];
  const auto& b = f.pts[hi];
  return Rat(a.second + (t - a.first) * (b.second - a.second) / (b.first - a.first));
}

inline Level pl_eval(const PLHomeo& f, const Level& t) {
  if (t.inf) {
    if (!f.above) fail(errc::out_of_domain, "pl_eval at inf without an upper tail");
    return level_inf();
  }
  return level(pl_eval(f, t.v));
}

inline PLHomeo pl_invert(const PLHomeo& f) {
  PLHomeo g;
  g.pts.reserve(f.pts.size());
  for (const auto& p : f.pts) g.pts.emplace_back(p.second, p.first);
  g.below = f.below;
  g.above = f.above;
  return g;
}

inline Rat pl_eval_inv(const PLHomeo& f, const Rat& t) {
  return pl_eval(pl_invert(f), t);
}

// Drops interior breakpoints that lie on the line through their neighbours,
// and end breakpoints that a translation tail already covers.
inline PLHomeo pl_canonical(const PLHomeo& f) {
  PLHomeo g = f;
  // Interior collinear points.
  std::vector<std::pair<Rat, Rat>> out;
  out.push_back(g.pts.front());
  for (std::size_t i = 1; i + 1 < g.pts.size(); ++i) {
    const auto& a = out.back();
    const auto& b = g.pts[i];
    const auto& c = g.pts[i + 1];
    Rat lhs = (b.second - a.second) * (c.first - b.first);
    Rat rhs = (c.second - b.second) * (b.first - a.first);
    if (lhs != rhs) out.push_back(b);
  }
  if (g.pts.size() >= 2) out.push_back(g.pts.back());
  g.pts = std::move(out);
  // Leading/trailing breakpoints absorbed by a slope-1 tail.
  auto slope_one = [](const std::pair<Rat, Rat>& a, const std::pair<Rat, Rat>& b) {
    return b.second - a.second == b.first - a.first;
  };
  while (g.below && g.pts.size() > 2 && slope_one(g.pts[0], g.pts[1]))
    g.pts.erase(g.pts.begin());
  while (g.above && g.pts.size() > 2 && slope_one(g.pts[g.pts.size() - 2], g.pts.back()))
    g.pts.pop_back();
  // A two-tailed slope-1 map is a translation of the whole line; pick a fixed
  // breakpoint pair so equal translations compare equal.
  if (g.below && g.above && g.pts.size() == 2 && slope_one(g.pts[0], g.pts[1])) {
    Rat off = g.pts[0].second - g.pts[0].first;
    g.pts = {{Rat(0), off}, {Rat(1), Rat(1) + off}};
  }
  return g;
}

inline bool pl_equal(const PLHomeo& f, const PLHomeo& g) {
  PLHomeo cf = pl_canonical(f), cg = pl_canonical(g);
  return cf.below == cg.below && cf.above == cg.above && cf.pts == cg.pts;
}

// f after g, restricted to the largest interval where the composite is
// defined. Throws DomainMismatch when that interval is empty or a point.
inline PLHomeo pl_compose(const PLHomeo& f, const PLHomeo& g) {
  // Input-side bounds imposed by g's own domain.
  std::optional<Rat> lo = pl_domain_lo(g);
  std::optional<Rat> hi = pl_domain_hi(g);
  // Tighten by the requirement g(t) in dom f.
  const std::optional<Rat> flo = pl_domain_lo(f), fhi = pl_domain_hi(f);
  const std::optional<Rat> glo = pl_range_lo(g), ghi = pl_range_hi(g);
  if (flo) {
    if (ghi && *ghi < *flo) fail(errc::domain_mismatch, "composite domain is empty");
    if (!glo || *glo < *flo) {
      Rat t = pl_eval_inv(g, *flo);
      if (!lo || *lo < t) lo = t;
    }
  }
  if (fhi) {
    if (glo && *glo > *fhi) fail(errc::domain_mismatch, "composite domain is empty");
    if (!ghi || *ghi > *fhi) {
      Rat t = pl_eval_inv(g, *fhi);
      if (!hi || *hi > t) hi = t;
    }
  }
  if (lo && hi && !(*lo < *hi))
    fail(errc::domain_mismatch, "composite domain degenerates to a point");

  auto in_window = [&](const Rat& t) {
    if (lo && t < *lo) return false;
    if (hi && t > *hi) return false;
    return true;
  };
  std::vector<Rat> ins;
  if (lo) ins.push_back(*lo);
  if (hi) ins.push_back(*hi);
  for (const auto& p : g.pts)
    if (in_window(p.first)) ins.push_back(p.first);
  for (const auto& p : f.pts) {
    // Pull f's breakpoints back through g when they are reachable.
    if (glo && p.first < *glo) continue;
    if (ghi && p.first > *ghi) continue;
    Rat t = pl_eval_inv(g, p.first);
    if (in_window(t)) ins.push_back(t);
  }
  std::sort(ins.begin(), ins.end());
  ins.erase(std::unique(ins.begin(), ins.end()), ins.end());
  if (ins.size() < 2) fail(errc::internal, "composite breakpoint set too small");

  PLHomeo h;
  h.pts.reserve(ins.size());
  for (const Rat& t : ins) h.pts.emplace_back(t, pl_eval(f, pl_eval(g, t)));
  h.below = !lo.has_value();
  h.above = !hi.has_value();
  return pl_canonical(h);
}

// True when f agrees with the identity from its lower end up to hi, i.e. on
// (dom_lo, hi] together with the lower tail if one is present.
inline bool pl_fixes_up_to(const PLHomeo& f, const Rat& hi) {
  if (!pl_in_domain(f, hi)) return false;
  if (pl_eval(f, hi) != hi) return false;
  if (f.below && f.pts.front().second != f.pts.front().first) return false;
  for (const auto& p : f.pts) {
    if (p.first >= hi) break;
    if (p.second != p.first) return false;
  }
  return true;
}

inline PLHomeo pl_identity(const Rat& lo, const Rat& hi) {
  return pl_make({{lo, lo}, {hi, hi}});
}

inline std::string pl_str(const PLHomeo& f) {
  std::string s;
  if (f.below) s += "...~";
  for (std::size_t i = 0; i < f.pts.size(); ++i) {
    if (i) s += " ";
    s += "(" + rat_str(f.pts[i].first) + "," + rat_str(f.pts[i].second) + ")";
  }
  if (f.above) s += "~...";
  return s;
}

// The two collar maps behind the vertex-swap pocket transfer. For margin r:
//   stretch: [2-r, 2] -> [2-r, 4], fixing 2-r and sending 2 to 4;
//   lift:    [1, 3+r] -> [3, 3+r], sending 1 to 3 and fixing 3+r.
struct TransferMaps {
  PLHomeo stretch;
  PLHomeo lift;
};

inline TransferMaps make_transfer_maps(const Rat& r) {
  if (r <= 0) fail(errc::non_positive_r, "margin must be positive, got " + rat_str(r));
  if (r >= 1) fail(errc::invalid_r, "margin must stay below 1, got " + rat_str(r));
  TransferMaps m;
  m.stretch = pl_make({{Rat(2) - r, Rat(2) - r}, {Rat(2), Rat(4)}});
  m.lift = pl_make({{Rat(1), Rat(3)}, {Rat(3) + r, Rat(3) + r}});
  return m;
}

// The reparametrization triple of one interlacing promotion step at depth k:
//   lower:   pulls [2k-3, 2k+1] down onto [2k-3, 2k-1], translation -2 above;
//   raise:   pushes [2k-2, 2k+2] up onto [2k-2, 2k+2] with 2k-2+r -> 2k;
//   restore: undoes lower below 2k-1, so restore(lower) = id on (0, 2k-1].
struct PromotionTriple {
  PLHomeo lower;
  PLHomeo raise;
  PLHomeo restore;
};

inline PromotionTriple make_promotion_triple(const Rat& r, int k) {
  if (k < 2) fail(errc::invalid_k, "promotion needs k >= 2, got " + std::to_string(k));
  if (r <= 0) fail(errc::non_positive_r, "margin must be positive, got " + rat_str(r));
  if (r >= 2) fail(errc::invalid_r, "margin must stay below 2, got " + rat_str(r));
  const Rat a(2 * k - 3), b(2 * k - 2), c(2 * k - 1), d(2 * k + 1), e(2 * k + 2);
  PromotionTriple t;
  t.lower = pl_make({{a, a}, {c, a + r}, {d, c}}, true, true);
  t.raise = pl_make({{b, b}, {b + r, Rat(2 * k)}, {e, e}}, true, true);
  t.restore = pl_make({{a, a}, {a + r, c}, {c + r, c + r}}, true, true);
  return t;
}

} // namespace conetop
