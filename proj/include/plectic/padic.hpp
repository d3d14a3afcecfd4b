#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "plectic/errors.hpp"
#include "plectic/rat.hpp"

namespace plectic {

struct PrecisionPolicy {
    int working_precision = 64;
    int output_precision = 32;
    int cancellation_floor = 1;

    void validate() const {
        if (output_precision > working_precision)
            throw ConfigError("output precision exceeds working precision");
        if (cancellation_floor < 1)
            throw ConfigError("cancellation floor must be >= 1");
    }
};

/// Exact element of Q_p known to a tracked number of significant digits.
/// A nonzero value is p^val * unit with unit a p-adic unit held modulo
/// p^prec; zero is exact (valuation +infinity, no digits).
class PadicScalar {
public:
    PadicScalar() = default;

    static PadicScalar zero(unsigned long p, int prec);
    static PadicScalar from_integer(long n, unsigned long p, int prec);
    static PadicScalar from_rational(const mpq_class& q, unsigned long p, int prec);

    unsigned long prime() const { return prime_; }
    bool is_zero() const { return zero_; }
    long valuation() const { return zero_ ? VAL_INF : val_; }
    int precision() const { return prec_; }
    const mpz_class& unit() const { return unit_; }

    // Base-p digits of the unit part, least significant first, exactly
    // precision() entries (d0 != 0 for nonzero values).
    std::vector<unsigned long> digits() const;

    bool is_one_to(int digits) const;

    PadicScalar neg() const;
    PadicScalar inv() const;
    PadicScalar pow(long n) const;

    // Square root for odd p; valuation must be even and the unit a square.
    PadicScalar sqrt() const;

    // Teichmueller representative congruent to this unit mod p.
    PadicScalar teichmuller() const;

    // Drop to a lower relative precision (no-op if already coarser).
    PadicScalar truncated(int prec) const;

    std::string str() const;

    friend PadicScalar add(const PadicScalar& x, const PadicScalar& y, int cancellation_floor);
    friend PadicScalar mul(const PadicScalar& x, const PadicScalar& y);

private:
    unsigned long prime_ = 0;
    bool zero_ = true;
    long val_ = 0;
    mpz_class unit_ = 0;
    int prec_ = 0;

    static PadicScalar make(unsigned long p, long val, mpz_class unit, int prec);
};

PadicScalar add(const PadicScalar& x, const PadicScalar& y, int cancellation_floor = 1);
PadicScalar mul(const PadicScalar& x, const PadicScalar& y);

inline PadicScalar operator+(const PadicScalar& x, const PadicScalar& y) { return add(x, y); }
inline PadicScalar operator*(const PadicScalar& x, const PadicScalar& y) { return mul(x, y); }
inline PadicScalar operator-(const PadicScalar& x, const PadicScalar& y) { return add(x, y.neg()); }
inline PadicScalar operator/(const PadicScalar& x, const PadicScalar& y) { return mul(x, y.inv()); }

// Equality of the first `digits` significant digits (and valuations).
bool eq_to(const PadicScalar& x, const PadicScalar& y, int digits);

// Number of agreeing significant digits (0 if valuations differ;
// saturates at the common precision).
int agreement_digits(const PadicScalar& x, const PadicScalar& y);

std::string serialize_padic(const PadicScalar& x);
PadicScalar deserialize_padic(const std::string& record, unsigned long prime);

} // namespace plectic
