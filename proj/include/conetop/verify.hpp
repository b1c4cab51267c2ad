// Exact verification harness. Each verifier replays a construction's
// obligations over deterministic sample grids: named checks either pass or
// carry a concrete counterexample. A check that raises records the error as
// its failure instead of propagating it.
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "conetop/cone_chart.hpp"
#include "conetop/interlace.hpp"
#include "conetop/piecewise_homeo.hpp"
#include "conetop/promotion.hpp"
#include "conetop/vertex_swap.hpp"

namespace conetop {

struct CheckResult {
  std::string name;
  bool pass = true;
  long samples = 0;
  std::string counterexample;  // first failing point, ambient coordinates
  std::string detail;          // what failed there
};

struct VerificationReport {
  std::string subject;
  std::uint64_t seed = 0;
  long long micros = 0;
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;

  bool pass() const {
    for (const CheckResult& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline const CheckResult* find_check(const VerificationReport& r,
                                     const std::string& name) {
  for (const CheckResult& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

// with_timing=false leaves wall-clock time out, for byte-stable artifacts.
inline std::string report_text(const VerificationReport& r, bool with_timing = true) {
  std::ostringstream os;
  os << "subject: " << r.subject << "\n";
  os << "seed: " << r.seed << "\n";
  os << "status: " << (r.pass() ? "PASS" : "FAIL");
  if (with_timing) os << " in " << r.micros / 1000 << " ms";
  os << "\n";
  for (const CheckResult& c : r.checks) {
    os << "  " << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  ["
       << c.samples << " samples]";
    if (!c.pass) {
      os << "  at " << c.counterexample;
      if (!c.detail.empty()) os << ": " << c.detail;
    }
    os << "\n";
  }
  for (const std::string& n : r.notes) os << "  note: " << n << "\n";
  return os.str();
}

namespace detail {

// Visit one sample inside a check: count it, keep the first failure, and
// turn a raised error into that failure.
template <class F>
inline void scan(CheckResult& c, const std::string& where, F body) {
  ++c.samples;
  std::optional<std::string> bad;
  try {
    bad = body();
  } catch (const std::exception& e) {
    bad = std::string(e.what());
  }
  if (bad && c.pass) {
    c.pass = false;
    c.counterexample = where;
    c.detail = *bad;
  }
}

template <class F>
inline void scan(CheckResult& c, const AmbientPoint& where, F body) {
  scan(c, ambient_point_str(where), body);
}

// Half-integer levels up to 13 plus the given extras and four seeded levels
// with denominators up to 64.
inline std::vector<Rat> level_grid(std::vector<Rat> extra, std::mt19937_64& rng) {
  std::vector<Rat> out = std::move(extra);
  for (int j = 1; j <= 26; ++j) out.push_back(rat_frac(j, 2));
  for (int i = 0; i < 4; ++i) out.push_back(rat_frac(long(rng() % 832) + 1, 64));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Vertices, three interior points per edge, and one seeded point per edge.
inline std::vector<BasePoint> base_grid(const ConeChart& c, std::mt19937_64& rng) {
  const BaseGraph& g = chart_base(c);
  std::vector<BasePoint> out = enumerate_sample_points(g, 3);
  for (int e = 0; e < int(g.edges.size()); ++e)
    out.push_back(base_edge_point(g, e, rat_frac(long(rng() % 63) + 1, 64)));
  return out;
}

// Finite-level samples of both chart images, the working set of every
// pairwise check.
inline std::vector<AmbientPoint> pair_grid(const InterlacedPair& pr, const Rat& r,
                                           std::mt19937_64& rng) {
  std::vector<Rat> extra = {Rat(2) - r, Rat(3) + r};
  std::vector<AmbientPoint> out;
  for (const ConeChart* c : {&pr.phi, &pr.psi}) {
    std::vector<BasePoint> ys = base_grid(*c, rng);
    std::vector<Rat> ts = level_grid(extra, rng);
    for (const BasePoint& y : ys)
      for (const Rat& t : ts) out.push_back(chart_eval(*c, y, level(t)));
  }
  return out;
}

} // namespace detail

// Ambient points spread across the model space, inside and outside any one
// chart; support checks and generic verification start from these.
inline std::vector<AmbientPoint> probe_points(const Ambient& amb) {
  std::vector<AmbientPoint> out;
  if (amb.kind == AmbientKind::plane) {
    const Rat c = amb.halfwidth;
    const Rat ticks[] = {Rat(-c * 7 / 8), Rat(-c / 2), Rat(0), Rat(c / 2),
                         Rat(c * 7 / 8)};
    for (const Rat& x : ticks)
      for (const Rat& y : ticks) out.push_back(plane_point(x, y));
    return out;
  }
  std::vector<Rat> ss = {rat_frac(1, 4), Rat(1), Rat(3), rat_frac(13, 2)};
  if (amb.kind == AmbientKind::suspension) {
    out.push_back(north_point());
    out.push_back(south_point());
    const std::size_t m = ss.size();
    for (std::size_t i = 0; i < m; ++i) ss.push_back(Rat(-ss[i]));
  } else {
    out.push_back(apex_point());
    ss.push_back(Rat(-1));
  }
  for (int v = 0; v < amb.base.n; ++v)
    for (const Rat& s : ss) out.push_back(ray_point(base_vertex(amb.base, v), s));
  for (int e = 0; e < int(amb.base.edges.size()); ++e)
    for (const Rat& s : ss)
      out.push_back(ray_point(base_edge_point(amb.base, e, rat_frac(1, 3)), s));
  return out;
}

// The full suite for the region-assembled swap: contract checks plus the
// internal obligations (constituent formulas agree where region labels
// overlap, each region lands in its mate, nested deep regions map to nested
// deep regions). The reference pair supplies the region geometry; the swap
// bundle supplies the formulas, so a corrupted bundle is caught against the
// honest regions.
inline VerificationReport verify_vertex_swap(const InterlacedPair& pair,
                                             const SwapHomeo& h,
                                             std::uint64_t seed = 0) {
  const auto clock0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.subject = "vertex swap";
  rep.seed = seed;
  std::mt19937_64 rng(seed);

  CheckResult vert{"vertex mapping"}, supp{"support"}, rt{"inverse round trip"},
      ovl{"overlap agreement"}, reg{"region mapping"}, basis{"basis mapping"};

  const AmbientPoint p = chart_vertex(pair.phi), q = chart_vertex(pair.psi);
  detail::scan(vert, p, [&]() -> std::optional<std::string> {
    if (swap_apply(h, p) != q) return std::string("phi's vertex must map to psi's");
    return std::nullopt;
  });
  detail::scan(vert, q, [&]() -> std::optional<std::string> {
    if (swap_apply_inv(h, q) != p)
      return std::string("psi's vertex must pull back to phi's");
    return std::nullopt;
  });

  long moved = 0, off_overlap = 0;
  std::vector<AmbientPoint> grid = detail::pair_grid(pair, h.r, rng);
  std::vector<AmbientPoint> probes = probe_points(pair.phi.ambient);
  grid.insert(grid.end(), probes.begin(), probes.end());

  for (const AmbientPoint& x : grid) {
    AmbientPoint fx = x, ifx = x;
    bool evald = false;
    detail::scan(rt, x, [&]() -> std::optional<std::string> {
      fx = swap_apply(h, x);
      ifx = swap_apply_inv(h, x);
      evald = true;
      if (swap_apply_inv(h, fx) != x) return std::string("h^-1 does not undo h");
      if (swap_apply(h, ifx) != x) return std::string("h does not undo h^-1");
      return std::nullopt;
    });
    if (!evald) continue;

    detail::scan(supp, x, [&]() -> std::optional<std::string> {
      if (fx == x && ifx == x) return std::nullopt;
      bool in_u = chart_covers(pair.phi, x), in_v = chart_covers(pair.psi, x);
      ++moved;
      if (!(in_u && in_v)) ++off_overlap;
      if (!in_u && !in_v)
        return std::string("moved a point outside both chart images");
      return std::nullopt;
    });

    const std::vector<SwapRegion> labs = classify_swap(pair, x);
    const std::vector<SwapRegion> labs_inv = classify_swap_inv(pair, x);

    if (labs.size() > 1 || labs_inv.size() > 1)
      detail::scan(ovl, x, [&]() -> std::optional<std::string> {
        for (std::size_t i = 1; i < labs.size(); ++i)
          if (swap_region_apply(h, labs[i], x) != swap_region_apply(h, labs[0], x))
            return labs[0].str() + " and " + labs[i].str() + " formulas disagree";
        for (std::size_t i = 1; i < labs_inv.size(); ++i)
          if (swap_region_apply_inv(h, labs_inv[i], x) !=
              swap_region_apply_inv(h, labs_inv[0], x))
            return labs_inv[0].str() + " and " + labs_inv[i].str() +
                   " inverse formulas disagree";
        return std::nullopt;
      });

    detail::scan(reg, x, [&]() -> std::optional<std::string> {
      for (const SwapRegion& lb : labs) {
        if (lb.kind == SwapRegion::Kind::core) {
          if (fx != x) return std::string("core point moved");
        } else if (lb.kind == SwapRegion::Kind::b ||
                   lb.kind == SwapRegion::Kind::a) {
          SwapRegion want{lb.kind == SwapRegion::Kind::b ? SwapRegion::Kind::c
                                                         : SwapRegion::Kind::d,
                          lb.n};
          std::vector<SwapRegion> img = classify_swap_inv(pair, fx);
          if (std::find(img.begin(), img.end(), want) == img.end())
            return lb.str() + " must land in " + want.str();
        }
      }
      for (const SwapRegion& lb : labs_inv) {
        if (lb.kind == SwapRegion::Kind::core_v) {
          if (ifx != x) return std::string("deep core point moved by h^-1");
        } else if (lb.kind == SwapRegion::Kind::c ||
                   lb.kind == SwapRegion::Kind::d) {
          SwapRegion want{lb.kind == SwapRegion::Kind::c ? SwapRegion::Kind::b
                                                         : SwapRegion::Kind::a,
                          lb.n};
          std::vector<SwapRegion> img = classify_swap(pair, ifx);
          if (std::find(img.begin(), img.end(), want) == img.end())
            return lb.str() + " must pull back into " + want.str();
        }
      }
      return std::nullopt;
    });

    detail::scan(basis, x, [&]() -> std::optional<std::string> {
      std::optional<Level> lf = chart_level_of(pair.phi, x);
      std::optional<Level> ls = chart_level_of(pair.psi, x);
      std::optional<Level> lfx = chart_level_of(pair.psi, fx);
      std::optional<Level> lifx = chart_level_of(pair.phi, ifx);
      for (int k = 1; k <= 5; ++k) {
        if (lf && (lf->inf || lf->v > Rat(2 * k + 1)) &&
            !(lfx && (lfx->inf || lfx->v > Rat(2 * k))))
          return "phi region above " + std::to_string(2 * k + 1) +
                 " must map into psi region above " + std::to_string(2 * k);
        if (ls && (ls->inf || ls->v > Rat(2 * k)) &&
            !(lifx && (lifx->inf || lifx->v > Rat(2 * k - 1))))
          return "psi region above " + std::to_string(2 * k) +
                 " must pull back into phi region above " + std::to_string(2 * k - 1);
      }
      return std::nullopt;
    });
  }

  rep.notes.push_back(
      off_overlap == 0
          ? "all " + std::to_string(moved) + " moved samples lie in both chart images"
          : std::to_string(off_overlap) + " of " + std::to_string(moved) +
                " moved samples lie in one chart image only (union support, not overlap)");

  rep.checks = {vert, supp, rt, ovl, reg, basis};
  rep.micros = std::chrono::duration_cast<std::chrono::microseconds>(
                   std::chrono::steady_clock::now() - clock0)
                   .count();
  return rep;
}

// The construction-independent part of the swap contract, for any self-map
// claiming to trade the two vertices: vertex mapping, union support, exact
// invertibility, and the nested-neighbourhood mapping property. The
// tower-built swap satisfies these without sharing the region formulas.
inline VerificationReport verify_swap_contract(const InterlacedPair& pair,
                                               const PiecewiseHomeo& hp,
                                               std::uint64_t seed = 0) {
  const auto clock0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.subject = "vertex swap contract: " + hp.name;
  rep.seed = seed;
  std::mt19937_64 rng(seed);

  CheckResult vert{"vertex mapping"}, supp{"support"}, rt{"inverse round trip"},
      basis{"basis mapping"};

  const AmbientPoint p = chart_vertex(pair.phi), q = chart_vertex(pair.psi);
  detail::scan(vert, p, [&]() -> std::optional<std::string> {
    if (ph_apply(hp, p) != q) return std::string("phi's vertex must map to psi's");
    return std::nullopt;
  });
  detail::scan(vert, q, [&]() -> std::optional<std::string> {
    if (ph_apply_inv(hp, q) != p)
      return std::string("psi's vertex must pull back to phi's");
    return std::nullopt;
  });

  std::vector<AmbientPoint> grid = detail::pair_grid(pair, swap_margin(pair), rng);
  std::vector<AmbientPoint> probes = probe_points(pair.phi.ambient);
  grid.insert(grid.end(), probes.begin(), probes.end());

  for (const AmbientPoint& x : grid) {
    AmbientPoint fx = x, ifx = x;
    bool evald = false;
    detail::scan(rt, x, [&]() -> std::optional<std::string> {
      fx = ph_apply(hp, x);
      ifx = ph_apply_inv(hp, x);
      evald = true;
      if (ph_apply_inv(hp, fx) != x) return std::string("h^-1 does not undo h");
      if (ph_apply(hp, ifx) != x) return std::string("h does not undo h^-1");
      return std::nullopt;
    });
    if (!evald) continue;

    detail::scan(supp, x, [&]() -> std::optional<std::string> {
      if (fx == x && ifx == x) return std::nullopt;
      if (!chart_covers(pair.phi, x) && !chart_covers(pair.psi, x))
        return std::string("moved a point outside both chart images");
      if (!hp.support(x))
        return std::string("moved a point outside the declared support");
      return std::nullopt;
    });

    detail::scan(basis, x, [&]() -> std::optional<std::string> {
      std::optional<Level> lf = chart_level_of(pair.phi, x);
      std::optional<Level> ls = chart_level_of(pair.psi, x);
      std::optional<Level> lfx = chart_level_of(pair.psi, fx);
      std::optional<Level> lifx = chart_level_of(pair.phi, ifx);
      for (int k = 1; k <= 5; ++k) {
        if (lf && (lf->inf || lf->v > Rat(2 * k + 1)) &&
            !(lfx && (lfx->inf || lfx->v > Rat(2 * k))))
          return "phi region above " + std::to_string(2 * k + 1) +
                 " must map into psi region above " + std::to_string(2 * k);
        if (ls && (ls->inf || ls->v > Rat(2 * k)) &&
            !(lifx && (lifx->inf || lifx->v > Rat(2 * k - 1))))
          return "psi region above " + std::to_string(2 * k) +
                 " must pull back into phi region above " + std::to_string(2 * k - 1);
      }
      return std::nullopt;
    });
  }

  rep.checks = {vert, supp, rt, basis};
  rep.micros = std::chrono::duration_cast<std::chrono::microseconds>(
                   std::chrono::steady_clock::now() - clock0)
                   .count();
  return rep;
}

inline VerificationReport verify_promotion(const ConeChart& phi, const ConeChart& psi,
                                           int k, const ConeChart& promoted,
                                           std::uint64_t seed = 0) {
  const auto clock0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.subject = "promotion at depth " + std::to_string(k);
  rep.seed = seed;
  std::mt19937_64 rng(seed);

  CheckResult eq{"agreement below the seam"}, depth{"interlacing depth"};
  const Rat seam(2 * k - 1);
  std::vector<BasePoint> ys = detail::base_grid(phi, rng);
  std::vector<Rat> ts = detail::level_grid({seam}, rng);
  for (const BasePoint& y : ys)
    for (const Rat& t : ts) {
      if (t > seam) continue;
      AmbientPoint want = chart_eval(phi, y, level(t));
      detail::scan(eq, want, [&]() -> std::optional<std::string> {
        if (chart_eval(promoted, y, level(t)) != want)
          return "promoted chart must equal the input at level " + rat_str(t);
        return std::nullopt;
      });
    }

  detail::scan(depth, std::string("(interlacing predicate)"),
               [&]() -> std::optional<std::string> {
                 if (!is_k_interlaced(promoted, psi, k + 1))
                   return "charts are not " + std::to_string(k + 1) + "-interlaced";
                 return std::nullopt;
               });

  rep.checks = {eq, depth};
  rep.micros = std::chrono::duration_cast<std::chrono::microseconds>(
                   std::chrono::steady_clock::now() - clock0)
                   .count();
  return rep;
}

inline VerificationReport verify_limit_chart(const InterlacedPair& pr,
                                             const LimitChartView& chi,
                                             std::uint64_t seed = 0) {
  const auto clock0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.subject = "limit chart";
  rep.seed = seed;
  std::mt19937_64 rng(seed);

  CheckResult low{"agreement at low levels"}, vtx{"vertex relocation"},
      sur{"surjectivity"}, cont{"continuity at infinity"}, prop{"properness"};

  const AmbientPoint p = chart_vertex(pr.phi), q = chart_vertex(pr.psi);
  std::vector<BasePoint> ys = detail::base_grid(pr.phi, rng);
  std::vector<Rat> ts = detail::level_grid({Rat(3)}, rng);

  for (const BasePoint& y : ys) {
    detail::scan(vtx, base_point_str(y) + " at level inf",
                 [&]() -> std::optional<std::string> {
                   if (chi.eval(y, level_inf()) != q)
                     return std::string("level infinity must land on the mate's vertex");
                   return std::nullopt;
                 });
    for (const Rat& t : ts) {
      const std::string where = base_point_str(y) + " at level " + rat_str(t);
      if (t <= 3) {
        AmbientPoint want = chart_eval(pr.phi, y, level(t));
        detail::scan(low, want, [&]() -> std::optional<std::string> {
          if (chi.eval(y, level(t)) != want)
            return std::string("limit chart must equal phi below level 3");
          return std::nullopt;
        });
      }
      AmbientPoint cx = q;
      bool evald = false;
      detail::scan(cont, where, [&]() -> std::optional<std::string> {
        cx = chi.eval(y, level(t));
        evald = true;
        for (int i = 1; i <= 5; ++i)
          if (t > Rat(2 * i + 1) && !chart_region_has(pr.psi, Rat(2 * i), false, cx))
            return "value at level above " + std::to_string(2 * i + 1) +
                   " must sit beyond psi level " + std::to_string(2 * i);
        return std::nullopt;
      });
      if (!evald) continue;
      detail::scan(prop, where, [&]() -> std::optional<std::string> {
        std::optional<Level> lv = chart_level_of(pr.psi, cx);
        if (!lv) {
          if (t >= 3)
            return std::string("value outside the mate must come from level below 3");
          return std::nullopt;
        }
        if (lv->inf) return std::string("finite levels cannot reach the mate's vertex");
        mpz_class i = rat_ceil(lv->v / 2);
        if (i < 1) i = 1;
        if (t > Rat(mpz_class(2 * i + 1)))
          return "value at psi level " + rat_str(lv->v) +
                 " must come from level at most " + mpz_class(2 * i + 1).get_str();
        return std::nullopt;
      });
    }
  }

  std::vector<AmbientPoint> us;
  for (const BasePoint& y : ys)
    for (const Rat& t : ts) us.push_back(chart_eval(pr.phi, y, level(t)));
  if (!(p == q)) us.push_back(p);
  {
    std::vector<BasePoint> zs = detail::base_grid(pr.psi, rng);
    for (const BasePoint& z : zs)
      for (const Rat& t : ts) {
        AmbientPoint x = chart_eval(pr.psi, z, level(t));
        if (chart_covers(pr.phi, x)) us.push_back(x);
      }
  }
  for (const AmbientPoint& x : us) {
    if (x == q) continue;
    detail::scan(sur, x, [&]() -> std::optional<std::string> {
      ChartPos pos = chi.invert(x);
      if (pos.kind == ChartPos::Kind::outside)
        return std::string("point of the image has no preimage");
      if (pos.kind == ChartPos::Kind::vertex)
        return std::string("only the relocated vertex may invert to infinity");
      if (chi.eval(pos.y, pos.t) != x)
        return std::string("preimage does not evaluate back");
      return std::nullopt;
    });
  }
  detail::scan(vtx, q, [&]() -> std::optional<std::string> {
    if (chi.invert(q).kind != ChartPos::Kind::vertex)
      return std::string("the mate's vertex must invert to level infinity");
    return std::nullopt;
  });

  rep.checks = {low, vtx, sur, cont, prop};
  rep.micros = std::chrono::duration_cast<std::chrono::microseconds>(
                   std::chrono::steady_clock::now() - clock0)
                   .count();
  return rep;
}

// Shared contract checks for any self-homeomorphism handed out by the
// library: exact invertibility, declared support honesty, and re-evaluation
// determinism over caller-chosen samples.
inline VerificationReport verify_generic_homeo(const PiecewiseHomeo& h,
                                               const std::vector<AmbientPoint>& samples,
                                               std::uint64_t seed = 0) {
  const auto clock0 = std::chrono::steady_clock::now();
  VerificationReport rep;
  rep.subject = "generic homeomorphism: " + h.name;
  rep.seed = seed;

  CheckResult rt{"inverse round trip"}, supp{"support containment"},
      det{"determinism"};
  for (const AmbientPoint& x : samples) {
    AmbientPoint fx = x, ifx = x;
    bool evald = false;
    detail::scan(rt, x, [&]() -> std::optional<std::string> {
      fx = ph_apply(h, x);
      ifx = ph_apply_inv(h, x);
      evald = true;
      if (ph_apply_inv(h, fx) != x) return std::string("h^-1 does not undo h");
      if (ph_apply(h, ifx) != x) return std::string("h does not undo h^-1");
      return std::nullopt;
    });
    if (!evald) continue;
    detail::scan(supp, x, [&]() -> std::optional<std::string> {
      if ((fx != x || ifx != x) && !h.support(x))
        return std::string("moved a point outside the declared support");
      return std::nullopt;
    });
    detail::scan(det, x, [&]() -> std::optional<std::string> {
      if (ph_apply(h, x) != fx || ph_apply_inv(h, x) != ifx)
        return std::string("re-evaluation changed the value");
      return std::nullopt;
    });
  }

  rep.checks = {rt, supp, det};
  rep.micros = std::chrono::duration_cast<std::chrono::microseconds>(
                   std::chrono::steady_clock::now() - clock0)
                   .count();
  return rep;
}

} // namespace conetop
