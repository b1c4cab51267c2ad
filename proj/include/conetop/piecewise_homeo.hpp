// Self-homeomorphisms of an ambient space, carried as exact forward and
// inverse evaluators plus a declared support predicate.
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "conetop/ambient.hpp"
#include "conetop/errors.hpp"

namespace conetop {

struct PiecewiseHomeo {
  Ambient ambient;
  std::string name;
  std::function<AmbientPoint(const AmbientPoint&)> fwd;
  std::function<AmbientPoint(const AmbientPoint&)> inv;
  // Points outside the declared support must be fixed.
  std::function<bool(const AmbientPoint&)> support;
};

inline AmbientPoint ph_apply(const PiecewiseHomeo& h, const AmbientPoint& x) {
  if (!point_in_ambient(h.ambient, x))
    fail(errc::ambient_mismatch, "point does not live in the map's ambient");
  return h.fwd(x);
}

inline AmbientPoint ph_apply_inv(const PiecewiseHomeo& h, const AmbientPoint& x) {
  if (!point_in_ambient(h.ambient, x))
    fail(errc::ambient_mismatch, "point does not live in the map's ambient");
  return h.inv(x);
}

inline PiecewiseHomeo ph_identity(Ambient amb) {
  PiecewiseHomeo h;
  h.ambient = std::move(amb);
  h.name = "id";
  h.fwd = [](const AmbientPoint& x) { return x; };
  h.inv = [](const AmbientPoint& x) { return x; };
  h.support = [](const AmbientPoint&) { return false; };
  return h;
}

inline PiecewiseHomeo ph_inverse(const PiecewiseHomeo& h) {
  PiecewiseHomeo out = h;
  out.name = h.name + "^-1";
  std::swap(out.fwd, out.inv);
  return out;
}

// Same map with a tighter declared support; the caller owns the claim that
// every point moved by h lies inside the new support.
inline PiecewiseHomeo ph_with_support(PiecewiseHomeo h, std::string name,
                                      std::function<bool(const AmbientPoint&)> support) {
  h.name = std::move(name);
  h.support = std::move(support);
  return h;
}

// Composite applying parts.front() first.
inline PiecewiseHomeo ph_compose(std::vector<PiecewiseHomeo> parts) {
  if (parts.empty()) fail(errc::empty_domain, "nothing to compose");
  for (const auto& p : parts)
    if (p.ambient != parts.front().ambient)
      fail(errc::ambient_mismatch, "composition needs one shared ambient");
  auto shared = std::make_shared<std::vector<PiecewiseHomeo>>(std::move(parts));
  PiecewiseHomeo h;
  h.ambient = shared->front().ambient;
  h.name = shared->front().name;
  for (std::size_t i = 1; i < shared->size(); ++i) h.name += ";" + (*shared)[i].name;
  h.fwd = [shared](const AmbientPoint& x) {
    AmbientPoint y = x;
    for (const auto& p : *shared) y = p.fwd(y);
    return y;
  };
  h.inv = [shared](const AmbientPoint& x) {
    AmbientPoint y = x;
    for (auto it = shared->rbegin(); it != shared->rend(); ++it) y = it->inv(y);
    return y;
  };
  h.support = [shared](const AmbientPoint& x) {
    for (const auto& p : *shared)
      if (p.support(x)) return true;
    return false;
  };
  return h;
}

} // namespace conetop
