#pragma once

#include "plectic/padic.hpp"

namespace plectic {

// Smallest quadratic non-residue mod an odd prime.
unsigned long default_nonresidue(unsigned long p);

/// a + b*w with w^2 = d: d a non-square unit (unramified, the default) or
/// d = p (ramified, best-effort arithmetic only).
class QuadExtScalar {
public:
    QuadExtScalar() = default;
    QuadExtScalar(PadicScalar a, PadicScalar b, long d, bool ramified);

    static QuadExtScalar from_base(PadicScalar a);
    static QuadExtScalar unramified(PadicScalar a, PadicScalar b, long d = 0);

    const PadicScalar& re() const { return a_; }
    const PadicScalar& im() const { return b_; }
    long defining() const { return d_; }
    bool is_ramified() const { return ram_; }
    unsigned long prime() const { return a_.prime(); }
    int precision() const;

    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool is_base() const { return b_.is_zero(); }

    // Twice the valuation (half-integers appear in the ramified case).
    long twice_valuation() const;

    QuadExtScalar neg() const;
    QuadExtScalar inv() const;
    QuadExtScalar conj() const;   // a - b*w
    QuadExtScalar pow(long n) const;
    PadicScalar norm() const;     // a^2 - d b^2

    bool is_one_to(int digits) const;

    std::string str() const;

private:
    PadicScalar a_, b_;
    long d_ = 0;
    bool ram_ = false;
};

QuadExtScalar add(const QuadExtScalar& x, const QuadExtScalar& y, int cancellation_floor = 1);
// Component adds that cancel below working precision become exact zeros
// instead of throwing; for use where the other component is known to survive.
QuadExtScalar add_lenient(const QuadExtScalar& x, const QuadExtScalar& y);
QuadExtScalar mul(const QuadExtScalar& x, const QuadExtScalar& y);

inline QuadExtScalar operator+(const QuadExtScalar& x, const QuadExtScalar& y) { return add(x, y); }
inline QuadExtScalar operator*(const QuadExtScalar& x, const QuadExtScalar& y) { return mul(x, y); }
inline QuadExtScalar operator-(const QuadExtScalar& x, const QuadExtScalar& y) { return add(x, y.neg()); }
inline QuadExtScalar operator/(const QuadExtScalar& x, const QuadExtScalar& y) { return mul(x, y.inv()); }

// Galois action on the unramified quadratic extension; fixes Q_p.
QuadExtScalar ext_frobenius(const QuadExtScalar& z);

bool eq_to(const QuadExtScalar& x, const QuadExtScalar& y, int digits);
int agreement_digits(const QuadExtScalar& x, const QuadExtScalar& y);

std::string serialize_quadext(const QuadExtScalar& z);

} // namespace plectic
