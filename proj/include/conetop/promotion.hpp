// Interlacing promotion and the limit chart.
//
// promote(phi, psi, k) turns a k-interlaced chart phi into a (k+1)-interlaced
// chart that agrees with phi on levels (0, 2k-1]. Iterating from k = 2 yields
// a tower phi_2, phi_3, ... whose stage phi_i is final on (0, 2i-1]; the
// limit chart evaluates each level through its final stage and re-cones the
// image of phi at the mate's vertex. That gives a second construction of the
// vertex swap: x -> limit(phi^-1(x)) inside the image of phi, identity off it.
#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "conetop/cone_chart.hpp"
#include "conetop/errors.hpp"
#include "conetop/interlace.hpp"
#include "conetop/piecewise_homeo.hpp"

namespace conetop {

// Half the least slack among the three containments the promotion step
// deforms, capped below 3/2 so the transfer triple stays admissible.
inline Rat promote_margin(const ConeChart& phi, const ConeChart& psi, int k) {
  if (k < 2) fail(errc::invalid_k, "promotion starts at depth 2");
  Rat s1 = sup_outer_level(phi, psi, Rat(2 * k - 2)) - Rat(2 * k - 3);
  Rat s2 = sup_outer_level(psi, phi, Rat(2 * k - 1)) - Rat(2 * k - 2);
  Rat s3 = sup_outer_level(phi, psi, Rat(2 * k)) - Rat(2 * k - 1);
  Rat s = rat_min(s1, rat_min(s2, s3));
  if (s <= 0) fail(errc::not_interlaced, "no slack at promotion depth " + std::to_string(k));
  return rat_min(s / 2, Rat(3, 2));
}

inline ConeChart promote(const ConeChart& phi, const ConeChart& psi, int k) {
  if (k < 2) fail(errc::invalid_k, "promotion starts at depth 2");
  if (chart_is_tower(psi))
    fail(errc::unsupported, "promotion needs an honest mate chart");
  if (!is_k_interlaced(phi, psi, k))
    fail(errc::not_interlaced, "charts are not " + std::to_string(k) + "-interlaced");
  TowerStep step;
  step.prev = phi;
  step.mate = psi;
  step.k = k;
  step.r = promote_margin(phi, psi, k);
  step.maps = make_promotion_triple(step.r, k);
  // Prove once that the mate's region above 2k sits inside the band the
  // ambient moves leave alone; the margin bound makes this hold, and the
  // stored floor lets later containment queries reuse it instead of
  // re-descending the whole tower.
  if (!region_contains(phi, Rat(2 * k - 1) + step.r, true, psi, Rat(2 * k), true))
    fail(errc::internal, "margin lost its slack at depth " + std::to_string(k));
  step.cert_floor = Rat(2 * k);
  ConeChart out;
  out.ambient = phi.ambient;
  out.form = std::make_shared<const TowerStep>(std::move(step));
  if (!is_k_interlaced(out, psi, k + 1))
    fail(errc::internal, "promotion failed to reach depth " + std::to_string(k + 1));
  return out;
}

// stage[j] is the (j+2)-interlaced chart phi_{j+2}; stage[0] is the input.
struct ChartTower {
  ConeChart mate;
  std::vector<ConeChart> stage;
};

inline ChartTower make_chart_tower(const ConeChart& phi, const ConeChart& psi,
                                   int height = 0) {
  if (!is_k_interlaced(phi, psi, 2))
    fail(errc::not_interlaced, "charts are not 2-interlaced");
  ChartTower tw;
  tw.mate = psi;
  tw.stage.push_back(phi);
  for (int j = 0; j < height; ++j)
    tw.stage.push_back(promote(tw.stage.back(), psi, int(tw.stage.size()) + 1));
  return tw;
}

// The chart phi_i, promoting lazily as needed. phi_{j+2} sits at stage[j]
// and was produced at promotion depth j + 1.
inline const ConeChart& tower_stage(ChartTower& tw, int i) {
  if (i < 2) fail(errc::invalid_k, "tower stages start at 2");
  while (int(tw.stage.size()) < i - 1)
    tw.stage.push_back(promote(tw.stage.back(), tw.mate, int(tw.stage.size()) + 1));
  return tw.stage[size_t(i) - 2];
}

// Least i with 2i - 1 >= t, floored at 2; phi_i is final on (0, 2i-1].
inline int limit_governing_index(const Rat& t) {
  Rat u = (t + 1) / 2;
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), u.get_num_mpz_t(), u.get_den_mpz_t());
  long i = q.get_si() + 1;
  return i < 2 ? 2 : int(i);
}

inline AmbientPoint limit_vertex(const ChartTower& tw) {
  return chart_vertex(tw.mate);
}

inline AmbientPoint limit_eval(ChartTower& tw, const BasePoint& y, const Level& t) {
  if (t.inf) return limit_vertex(tw);
  return chart_eval(tower_stage(tw, limit_governing_index(t.v)), y, t);
}

inline ChartPos limit_invert(ChartTower& tw, const AmbientPoint& x) {
  if (x == limit_vertex(tw)) {
    ChartPos pos;
    pos.kind = ChartPos::Kind::vertex;
    return pos;
  }
  for (int i = 2; i <= 64; ++i) {
    ChartPos pos = chart_invert(tower_stage(tw, i), x);
    if (pos.kind == ChartPos::Kind::outside) return pos;
    if (pos.kind == ChartPos::Kind::interior && pos.t.v < Rat(2 * i - 1))
      return pos;
  }
  fail(errc::internal, "limit preimage not settled below stage 64");
}

// The limit chart as a pair of closures over a shared lazily grown tower.
// Verification consumes this view, so checks run the same against the real
// construction and against deliberately corrupted stand-ins.
struct LimitChartView {
  AmbientPoint vertex;
  std::function<AmbientPoint(const BasePoint&, const Level&)> eval;
  std::function<ChartPos(const AmbientPoint&)> invert;
};

inline LimitChartView limit_view(std::shared_ptr<ChartTower> tw) {
  LimitChartView v;
  v.vertex = limit_vertex(*tw);
  v.eval = [tw](const BasePoint& y, const Level& t) { return limit_eval(*tw, y, t); };
  v.invert = [tw](const AmbientPoint& x) { return limit_invert(*tw, x); };
  return v;
}

// The vertex swap assembled from the tower: inside the image of phi it
// re-cones through the limit chart, sending phi's vertex to the mate's;
// off the image it is the identity. Agrees with phi below level 3.
inline PiecewiseHomeo build_vertex_swap_via_tower(std::shared_ptr<ChartTower> tw,
                                                  std::string name = "swap-alt") {
  auto ph = std::make_shared<ConeChart>(tw->stage.front());
  PiecewiseHomeo out;
  out.ambient = ph->ambient;
  out.name = std::move(name);
  out.fwd = [tw, ph](const AmbientPoint& x) {
    ChartPos pos = chart_invert(*ph, x);
    if (pos.kind == ChartPos::Kind::outside) return x;
    if (pos.kind == ChartPos::Kind::vertex) return limit_vertex(*tw);
    return limit_eval(*tw, pos.y, pos.t);
  };
  out.inv = [tw, ph](const AmbientPoint& x) {
    ChartPos pos = limit_invert(*tw, x);
    if (pos.kind == ChartPos::Kind::outside) return x;
    if (pos.kind == ChartPos::Kind::vertex) return chart_vertex(*ph);
    return chart_eval(*ph, pos.y, pos.t);
  };
  out.support = [ph](const AmbientPoint& x) { return chart_covers(*ph, x); };
  return out;
}

inline PiecewiseHomeo build_vertex_swap_via_tower(const ConeChart& phi,
                                                  const ConeChart& psi,
                                                  std::string name = "swap-alt") {
  return build_vertex_swap_via_tower(
      std::make_shared<ChartTower>(make_chart_tower(phi, psi)), std::move(name));
}

} // namespace conetop
