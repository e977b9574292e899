#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace collatz2 {

using Int = mpz_class;
using Rat = mpq_class;

// mpq_class(num, den) does not canonicalize; all construction from parts
// goes through these helpers so den > 0 and gcd(|num|, den) = 1 always hold.
inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rat: zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline Rat rat(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("rat: zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline Rat rat(const Int& num) { return Rat(num); }

inline Rat rat_parse(const std::string& s) {
  Rat q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("rat_parse: bad rational '" + s + "'");
  if (q.get_den() == 0) throw std::invalid_argument("rat_parse: zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

inline int rat_sign(const Rat& q) { return sgn(q); }

inline bool rat_is_int(const Rat& q) { return q.get_den() == 1; }

// q^e for integer e (q != 0 when e < 0).
inline Rat rat_pow(Rat q, long e) {
  if (e < 0) {
    if (q == 0) throw std::domain_error("rat_pow: 0^negative");
    q = Rat(q.get_den(), q.get_num());
    q.canonicalize();
    e = -e;
  }
  Rat r(1);
  while (e > 0) {
    if (e & 1) r *= q;
    q *= q;
    e >>= 1;
  }
  return r;
}

// gmpxx has no long long constructors; long is 64-bit on every platform this
// project targets.
inline Int to_int(long long x) { return Int(static_cast<long>(x)); }
inline Rat to_rat(long long x) { return Rat(static_cast<long>(x)); }

inline bool int_odd(const Int& z) { return mpz_odd_p(z.get_mpz_t()) != 0; }

inline Int int_abs(const Int& z) { return z < 0 ? Int(-z) : z; }

// Largest odd common divisor; lodd(0, 0) is undefined (guarded by callers).
inline Int odd_gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  while (g > 0 && !int_odd(g)) g /= 2;
  return g;
}

// Exact square root test; returns true and sets root when z is a perfect square.
inline bool int_sqrt_exact(const Int& z, Int& root) {
  if (z < 0) return false;
  if (mpz_perfect_square_p(z.get_mpz_t()) == 0) return false;
  mpz_sqrt(root.get_mpz_t(), z.get_mpz_t());
  return true;
}

// sqrt of a nonnegative rational if it is rational.
inline bool rat_sqrt_exact(const Rat& q, Rat& root) {
  if (q < 0) return false;
  Int rn, rd;
  if (!int_sqrt_exact(q.get_num(), rn) || !int_sqrt_exact(q.get_den(), rd)) return false;
  root = rat(rn, rd);
  return true;
}

}  // namespace collatz2
