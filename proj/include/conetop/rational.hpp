// Exact rationals on top of GMP, plus the p/q text form used in files.
#pragma once

#include <gmpxx.h>

#include <string>

#include "conetop/errors.hpp"

namespace conetop {

using Rat = mpq_class;

// Accepts "p", "-p", "p/q", "-p/q" with decimal digits only. Anything else
// (whitespace, exponents, decimals, q == 0) is rejected.
inline Rat rat_parse(const std::string& s) {
  auto bad = [&]() -> Rat { fail(errc::parse_error, "not a rational: '" + s + "'"); };
  if (s.empty()) return bad();
  std::size_t i = 0;
  if (s[i] == '-') ++i;
  std::size_t num_digits = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') { ++i; ++num_digits; }
  if (num_digits == 0) return bad();
  if (i < s.size()) {
    if (s[i] != '/') return bad();
    ++i;
    std::size_t den_digits = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') { ++i; ++den_digits; }
    if (den_digits == 0 || i != s.size()) return bad();
  }
  Rat r;
  if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0) return bad();
  if (mpz_sgn(mpq_denref(r.get_mpq_t())) == 0) return bad();
  r.canonicalize();
  return r;
}

inline std::string rat_str(const Rat& r) {
  return r.get_str();
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// The two-argument mpq_class constructor does not reduce the fraction, and
// comparisons on unreduced values are wrong. Build quotients through this.
inline Rat rat_frac(long num, long den) {
  if (den == 0) fail(errc::parse_error, "zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

inline mpz_class rat_floor(const Rat& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline mpz_class rat_ceil(const Rat& r) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

} // namespace conetop
