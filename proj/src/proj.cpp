#include "plectic/proj.hpp"

#include <algorithm>

namespace plectic {

ProjPoint ProjPoint::infinity(unsigned long p, int prec) {
    ProjPoint pt;
    pt.infinite = true;
    pt.z = QuadExtScalar::from_base(PadicScalar::zero(p, prec));
    return pt;
}

ProjPoint ProjPoint::from_rational(const mpq_class& q, unsigned long p, int prec) {
    ProjPoint pt;
    pt.z = QuadExtScalar::from_base(PadicScalar::from_rational(q, p, prec));
    return pt;
}

ProjPoint ProjPoint::from_padic(PadicScalar x) {
    ProjPoint pt;
    pt.z = QuadExtScalar::from_base(std::move(x));
    return pt;
}

ProjPoint ProjPoint::from_quadext(QuadExtScalar x) {
    ProjPoint pt;
    pt.z = std::move(x);
    return pt;
}

std::string ProjPoint::str() const {
    return infinite ? "inf" : z.str();
}

bool eq_to(const ProjPoint& x, const ProjPoint& y, int digits) {
    if (x.infinite || y.infinite) return x.infinite == y.infinite;
    return eq_to(x.z, y.z, digits);
}

ProjPoint frobenius_point(const ProjPoint& x) {
    if (x.infinite) return x;
    return ProjPoint::from_quadext(ext_frobenius(x.z));
}

PGL2Elem::PGL2Elem() : PGL2Elem(1, 0, 0, 1) {}

PGL2Elem::PGL2Elem(mpq_class a, mpq_class b, mpq_class c, mpq_class d)
    : m_{std::move(a), std::move(b), std::move(c), std::move(d)} {
    det_ = m_[0] * m_[3] - m_[1] * m_[2];
    if (det_ == 0) throw Error("PGL2Elem: singular matrix");
}

PGL2Elem PGL2Elem::inverse() const {
    return PGL2Elem(m_[3], -m_[1], -m_[2], m_[0]);
}

bool PGL2Elem::is_identity() const {
    return m_[1] == 0 && m_[2] == 0 && m_[0] == m_[3];
}

std::optional<mpq_class> PGL2Elem::apply(const std::optional<mpq_class>& z) const {
    if (!z) {
        if (m_[2] == 0) return std::nullopt;
        return m_[0] / m_[2];
    }
    mpq_class den = m_[2] * *z + m_[3];
    if (den == 0) return std::nullopt;
    return (m_[0] * *z + m_[1]) / den;
}

std::string PGL2Elem::str() const {
    return "[[" + m_[0].get_str() + "," + m_[1].get_str() + "],[" +
           m_[2].get_str() + "," + m_[3].get_str() + "]]";
}

PGL2Elem operator*(const PGL2Elem& g, const PGL2Elem& h) {
    return PGL2Elem(g.a() * h.a() + g.b() * h.c(), g.a() * h.b() + g.b() * h.d(),
                    g.c() * h.a() + g.d() * h.c(), g.c() * h.b() + g.d() * h.d());
}

bool proj_equal(const PGL2Elem& g, const PGL2Elem& h) {
    // All 2x2 minors of the stacked 2x4 coefficient matrix vanish.
    std::array<mpq_class, 4> u{g.a(), g.b(), g.c(), g.d()};
    std::array<mpq_class, 4> v{h.a(), h.b(), h.c(), h.d()};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (u[i] * v[j] != u[j] * v[i]) return false;
    return true;
}

ProjPoint moebius_apply(const PGL2Elem& g, const ProjPoint& pt) {
    unsigned long p = pt.prime();
    int prec = pt.z.precision();
    auto promote = [&](const mpq_class& q) {
        return QuadExtScalar(PadicScalar::from_rational(q, p, prec),
                             PadicScalar::zero(p, prec), pt.z.defining(), pt.z.is_ramified());
    };
    if (pt.infinite) {
        if (g.c() == 0) return ProjPoint::infinity(p, prec);
        ProjPoint out;
        out.z = promote(g.a() / g.c());
        return out;
    }
    QuadExtScalar num, den;
    bool num_zero = false, den_zero = false;
    try {
        num = add(mul(promote(g.a()), pt.z), promote(g.b()));
    } catch (const CancellationError&) {
        num_zero = true;
    }
    try {
        den = add(mul(promote(g.c()), pt.z), promote(g.d()));
    } catch (const CancellationError&) {
        den_zero = true;
    }
    if (den_zero || (!num_zero && den.is_zero())) {
        if (num_zero) throw PrecisionExhausted("moebius_apply: 0/0 at working precision");
        return ProjPoint::infinity(p, prec);
    }
    if (num_zero || num.is_zero()) {
        ProjPoint out;
        out.z = promote(0);
        return out;
    }
    ProjPoint out;
    out.z = mul(num, den.inv());
    return out;
}

ElementClass classify_element(const PGL2Elem& g, unsigned long p) {
    mpq_class t2 = g.trace() * g.trace();
    if (t2 == 4 * g.det()) {
        return g.is_identity() ? ElementClass::EllipticOrTorsion : ElementClass::Parabolic;
    }
    if (t2 == 0) return ElementClass::EllipticOrTorsion;
    if (valp(mpq_class(t2 / g.det()), p) < 0) return ElementClass::Hyperbolic;
    return ElementClass::EllipticOrTorsion;
}

FixedPoints fixed_points(const PGL2Elem& g, unsigned long p, int prec) {
    if (classify_element(g, p) != ElementClass::Hyperbolic) throw NotHyperbolic();
    mpq_class T = g.trace(), D = g.det();
    mpq_class disc = T * T - 4 * D;
    PadicScalar s = PadicScalar::from_rational(disc, p, prec).sqrt();
    PadicScalar Tp = PadicScalar::from_rational(T, p, prec);
    PadicScalar two = PadicScalar::from_integer(2, p, prec);
    auto half = [&](const PadicScalar& x) { return mul(x, two.inv()); };
    std::optional<PadicScalar> lam1, lam2;
    try { lam1 = half(add(Tp, s)); } catch (const CancellationError&) {}
    try { lam2 = half(add(Tp, s.neg())); } catch (const CancellationError&) {}
    if (!lam1 && !lam2) throw PrecisionExhausted("fixed_points: eigenvalues cancel at working precision");
    PadicScalar lam_big = lam1 && (!lam2 || lam1->valuation() <= lam2->valuation()) ? *lam1 : *lam2;
    // The small eigenvalue exactly, avoiding the cancelled branch.
    PadicScalar lam_small = mul(PadicScalar::from_rational(D, p, prec), lam_big.inv());
    PadicScalar q = mul(lam_small, lam_big.inv());

    auto fixed_for = [&](const PadicScalar& lam) -> ProjPoint {
        if (g.c() == 0) {
            // Fixed points inf and b/(d-a); lam = a corresponds to (1,0).
            PadicScalar av = PadicScalar::from_rational(g.a(), p, prec);
            if (agreement_digits(av, lam) > 0 || eq_to(av, lam, 1))
                return ProjPoint::infinity(p, prec);
            return ProjPoint::from_rational(g.b() / (g.d() - g.a()), p, prec);
        }
        // z = (lam - d)/c, falling back on b/(lam - a) under cancellation.
        PadicScalar cc = PadicScalar::from_rational(g.c(), p, prec);
        try {
            PadicScalar dd = PadicScalar::from_rational(g.d(), p, prec);
            return ProjPoint::from_padic(mul(add(lam, dd.neg()), cc.inv()));
        } catch (const CancellationError&) {
            PadicScalar aa = PadicScalar::from_rational(g.a(), p, prec);
            PadicScalar bb = PadicScalar::from_rational(g.b(), p, prec);
            return ProjPoint::from_padic(mul(bb, add(lam, aa.neg()).inv()));
        }
    };

    FixedPoints fp{fixed_for(lam_big), fixed_for(lam_small), q};
    return fp;
}

QuadExtScalar cross_ratio_factor(const ProjPoint& t, const ProjPoint& x, const ProjPoint& y) {
    unsigned long p = t.prime();
    int prec = t.z.precision();
    QuadExtScalar one = QuadExtScalar(PadicScalar::from_integer(1, p, prec),
                                      PadicScalar::zero(p, prec), t.z.defining(), t.z.is_ramified());
    if (eq_to(x, y, prec)) return one;
    if (eq_to(t, x, prec) || eq_to(t, y, prec)) throw PoleError();
    if (t.infinite) return one;
    if (x.infinite) return add_lenient(t.z, y.z.neg()).inv();
    if (y.infinite) return add_lenient(t.z, x.z.neg());
    return add_lenient(t.z, x.z.neg()) / add_lenient(t.z, y.z.neg());
}

int orientation_character(const std::vector<PGL2Elem>& g, const std::vector<unsigned long>& primes) {
    if (g.size() != primes.size()) throw ConfigError("orientation_character: size mismatch");
    long total = 0;
    for (size_t i = 0; i < g.size(); ++i)
        total += valp(g[i].det(), primes[i]);
    return (total % 2 == 0) ? 1 : -1;
}

} // namespace plectic
