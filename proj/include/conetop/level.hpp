// Chart levels: positive rationals extended with the point at infinity.
#pragma once

#include <string>

#include "conetop/errors.hpp"
#include "conetop/rational.hpp"

namespace conetop {

struct Level {
  bool inf = false;
  Rat v;  // > 0 when finite

  bool finite() const { return !inf; }
};

inline Level level(const Rat& v) {
  if (v <= 0) fail(errc::out_of_domain, "level must be positive, got " + rat_str(v));
  return Level{false, v};
}

inline Level level_inf() { return Level{true, Rat(0)}; }

inline bool operator==(const Level& a, const Level& b) {
  if (a.inf || b.inf) return a.inf == b.inf;
  return a.v == b.v;
}
inline bool operator!=(const Level& a, const Level& b) { return !(a == b); }
inline bool operator<(const Level& a, const Level& b) {
  if (a.inf) return false;
  if (b.inf) return true;
  return a.v < b.v;
}
inline bool operator<=(const Level& a, const Level& b) { return a < b || a == b; }
inline bool operator>(const Level& a, const Level& b) { return b < a; }
inline bool operator>=(const Level& a, const Level& b) { return b <= a; }

inline std::string level_str(const Level& t) {
  return t.inf ? "inf" : rat_str(t.v);
}

inline Level level_parse(const std::string& s) {
  if (s == "inf") return level_inf();
  return level(rat_parse(s));
}

} // namespace conetop
