#pragma once

#include <array>
#include <optional>
#include <vector>

#include "plectic/quadext.hpp"

namespace plectic {

/// Point of P^1 over Q_p or its quadratic extension, in affine normal form
/// (value + infinity flag).
struct ProjPoint {
    bool infinite = false;
    QuadExtScalar z;

    static ProjPoint infinity(unsigned long p, int prec);
    static ProjPoint from_rational(const mpq_class& q, unsigned long p, int prec);
    static ProjPoint from_padic(PadicScalar x);
    static ProjPoint from_quadext(QuadExtScalar x);

    bool is_rational() const { return infinite || z.is_base(); }
    unsigned long prime() const { return z.prime(); }
    std::string str() const;
};

bool eq_to(const ProjPoint& x, const ProjPoint& y, int digits);

ProjPoint frobenius_point(const ProjPoint& x);

enum class ElementClass { Hyperbolic, Parabolic, EllipticOrTorsion };

/// Element of PGL_2(Q) acting on P^1; exact rational entries, compared up
/// to scalar.
class PGL2Elem {
public:
    PGL2Elem();   // identity
    PGL2Elem(mpq_class a, mpq_class b, mpq_class c, mpq_class d);

    static PGL2Elem identity() { return PGL2Elem(); }

    const mpq_class& a() const { return m_[0]; }
    const mpq_class& b() const { return m_[1]; }
    const mpq_class& c() const { return m_[2]; }
    const mpq_class& d() const { return m_[3]; }

    mpq_class det() const { return det_; }
    mpq_class trace() const { return m_[0] + m_[3]; }

    PGL2Elem inverse() const;
    bool is_identity() const;

    // Exact action on Q u {inf}; nullopt encodes infinity.
    std::optional<mpq_class> apply(const std::optional<mpq_class>& z) const;

    std::string str() const;

private:
    std::array<mpq_class, 4> m_;
    mpq_class det_;
};

PGL2Elem operator*(const PGL2Elem& g, const PGL2Elem& h);
bool proj_equal(const PGL2Elem& g, const PGL2Elem& h);

ProjPoint moebius_apply(const PGL2Elem& g, const ProjPoint& pt);

ElementClass classify_element(const PGL2Elem& g, unsigned long p);

struct FixedPoints {
    ProjPoint attracting;
    ProjPoint repelling;
    PadicScalar multiplier;   // eigenvalue ratio with positive valuation
};

FixedPoints fixed_points(const PGL2Elem& g, unsigned long p, int prec);

// (t - x)/(t - y) with the projective conventions: y = inf -> t - x,
// x = inf -> 1/(t - y), t = inf -> 1; x = y -> 1.
QuadExtScalar cross_ratio_factor(const ProjPoint& t, const ProjPoint& x, const ProjPoint& y);

int orientation_character(const std::vector<PGL2Elem>& g, const std::vector<unsigned long>& primes);

} // namespace plectic
