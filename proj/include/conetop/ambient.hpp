// The three ambient model spaces charts live in:
//   graph_cone:  one apex plus a ray through every point of a base graph;
//                signed height s, apex reached as s -> +inf
//   suspension:  two poles over a base graph; s -> +inf is north, -inf south
//   plane:       the open square |x|, |y| < halfwidth
#pragma once

#include <string>

#include "conetop/base_graph.hpp"
#include "conetop/errors.hpp"
#include "conetop/rational.hpp"

namespace conetop {

enum class AmbientKind { graph_cone, suspension, plane };

struct Ambient {
  AmbientKind kind = AmbientKind::graph_cone;
  BaseGraph base;   // graph_cone, suspension
  Rat halfwidth;    // plane
};

inline Ambient make_graph_cone(BaseGraph base) {
  return Ambient{AmbientKind::graph_cone, std::move(base), Rat(0)};
}
inline Ambient make_suspension(BaseGraph base) {
  return Ambient{AmbientKind::suspension, std::move(base), Rat(0)};
}
inline Ambient make_plane(const Rat& halfwidth) {
  if (halfwidth <= 0) fail(errc::out_of_domain, "halfwidth must be positive");
  return Ambient{AmbientKind::plane, BaseGraph{}, halfwidth};
}

inline bool operator==(const Ambient& a, const Ambient& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case AmbientKind::plane: return a.halfwidth == b.halfwidth;
    default: return a.base == b.base;
  }
}
inline bool operator!=(const Ambient& a, const Ambient& b) { return !(a == b); }

struct AmbientPoint {
  enum class Tag { apex, north, south, ray, plane };
  Tag tag = Tag::apex;
  BasePoint at;  // ray
  Rat s;         // ray height
  Rat x, y;      // plane
};

inline AmbientPoint apex_point() { return AmbientPoint{AmbientPoint::Tag::apex, {}, {}, {}, {}}; }
inline AmbientPoint north_point() { return AmbientPoint{AmbientPoint::Tag::north, {}, {}, {}, {}}; }
inline AmbientPoint south_point() { return AmbientPoint{AmbientPoint::Tag::south, {}, {}, {}, {}}; }
inline AmbientPoint ray_point(BasePoint at, Rat s) {
  return AmbientPoint{AmbientPoint::Tag::ray, std::move(at), std::move(s), {}, {}};
}
inline AmbientPoint plane_point(Rat x, Rat y) {
  return AmbientPoint{AmbientPoint::Tag::plane, {}, {}, std::move(x), std::move(y)};
}

inline bool operator==(const AmbientPoint& a, const AmbientPoint& b) {
  if (a.tag != b.tag) return false;
  switch (a.tag) {
    case AmbientPoint::Tag::ray: return a.at == b.at && a.s == b.s;
    case AmbientPoint::Tag::plane: return a.x == b.x && a.y == b.y;
    default: return true;
  }
}
inline bool operator!=(const AmbientPoint& a, const AmbientPoint& b) { return !(a == b); }

inline bool point_in_ambient(const Ambient& amb, const AmbientPoint& p) {
  switch (p.tag) {
    case AmbientPoint::Tag::apex:
      return amb.kind == AmbientKind::graph_cone;
    case AmbientPoint::Tag::north:
    case AmbientPoint::Tag::south:
      return amb.kind == AmbientKind::suspension;
    case AmbientPoint::Tag::ray:
      if (amb.kind != AmbientKind::graph_cone && amb.kind != AmbientKind::suspension)
        return false;
      if (p.at.is_vertex()) return p.at.v >= 0 && p.at.v < amb.base.n;
      return p.at.e >= 0 && p.at.e < int(amb.base.edges.size()) && p.at.u > 0 && p.at.u < 1;
    case AmbientPoint::Tag::plane:
      return amb.kind == AmbientKind::plane && rat_abs(p.x) < amb.halfwidth &&
             rat_abs(p.y) < amb.halfwidth;
  }
  return false;
}

inline std::string ambient_point_str(const AmbientPoint& p) {
  switch (p.tag) {
    case AmbientPoint::Tag::apex: return "apex";
    case AmbientPoint::Tag::north: return "north";
    case AmbientPoint::Tag::south: return "south";
    case AmbientPoint::Tag::ray:
      return base_point_str(p.at) + "@" + rat_str(p.s);
    case AmbientPoint::Tag::plane:
      return "(" + rat_str(p.x) + "," + rat_str(p.y) + ")";
  }
  return "?";
}

} // namespace conetop
