#pragma once

#include <gmpxx.h>

#include <limits>
#include <optional>
#include <string>

#include "plectic/errors.hpp"

namespace plectic {

// Exact rational helpers used throughout: group data stays in Q, p-adic
// evaluation happens only at the boundary.

inline constexpr long VAL_INF = std::numeric_limits<long>::max() / 2;

// p-adic valuation of a nonzero integer.
long valp(const mpz_class& n, unsigned long p);

// p-adic valuation of a rational; VAL_INF for zero.
long valp(const mpq_class& q, unsigned long p);

// p^k as mpz.
mpz_class ppow(unsigned long p, unsigned long k);

// Canonical representative of t modulo p^n inside Z[1/p]: the unique
// r = m / p^e with 0 <= m < p^(n+e), e = max(0, -valp(t)), r == t (mod p^n).
// Requires valp(t) > -infinity handling by caller for t = 0 (returns 0).
mpq_class mod_ppow(const mpq_class& t, long n, unsigned long p);

// Parse "a/b" or "a" into an exact rational.
mpq_class parse_rational(const std::string& s);

std::string rational_str(const mpq_class& q);

} // namespace plectic
