#include "plectic/quadext.hpp"

#include <algorithm>

#include "json.hpp"

namespace plectic {

unsigned long default_nonresidue(unsigned long p) {
    if (p == 2) throw Error("no unramified descriptor implemented for p = 2");
    for (unsigned long d = 2; d < p; ++d) {
        // Euler criterion by brute force; p is small.
        unsigned long acc = 1;
        for (unsigned long k = 0; k < (p - 1) / 2; ++k) acc = acc * d % p;
        if (acc == p - 1) return d;
    }
    throw Error("no non-residue found");
}

QuadExtScalar::QuadExtScalar(PadicScalar a, PadicScalar b, long d, bool ramified)
    : a_(std::move(a)), b_(std::move(b)), d_(d), ram_(ramified) {
    if (a_.prime() != b_.prime()) throw PrimeMismatch();
    unsigned long p = a_.prime();
    if (ram_) {
        if (d_ != static_cast<long>(p)) throw ConfigError("ramified descriptor must be the uniformizer");
    } else {
        long r = d_ % static_cast<long>(p);
        if (r < 0) r += static_cast<long>(p);
        if (r == 0) throw ConfigError("unramified descriptor must be a unit");
        unsigned long acc = 1;
        for (unsigned long k = 0; k < (p - 1) / 2; ++k)
            acc = acc * static_cast<unsigned long>(r) % p;
        if (acc == 1) throw ConfigError("descriptor is a square in Q_p");
    }
}

QuadExtScalar QuadExtScalar::from_base(PadicScalar a) {
    unsigned long p = a.prime();
    int prec = a.precision();
    return QuadExtScalar(std::move(a), PadicScalar::zero(p, prec),
                         static_cast<long>(default_nonresidue(p)), false);
}

QuadExtScalar QuadExtScalar::unramified(PadicScalar a, PadicScalar b, long d) {
    if (d == 0) d = static_cast<long>(default_nonresidue(a.prime()));
    return QuadExtScalar(std::move(a), std::move(b), d, false);
}

int QuadExtScalar::precision() const {
    return std::min(a_.precision(), b_.precision());
}

long QuadExtScalar::twice_valuation() const {
    long va = a_.is_zero() ? VAL_INF : 2 * a_.valuation();
    long vb = b_.is_zero() ? VAL_INF : 2 * b_.valuation() + (ram_ ? 1 : 0);
    return std::min(va, vb);
}

QuadExtScalar QuadExtScalar::neg() const {
    return QuadExtScalar(a_.neg(), b_.neg(), d_, ram_);
}

QuadExtScalar QuadExtScalar::conj() const {
    return QuadExtScalar(a_, b_.neg(), d_, ram_);
}

PadicScalar QuadExtScalar::norm() const {
    unsigned long p = a_.prime();
    int prec = std::min(a_.precision(), b_.precision());
    PadicScalar d = PadicScalar::from_rational(ram_ ? mpq_class(static_cast<long>(p)) : mpq_class(d_), p, prec);
    if (b_.is_zero()) return mul(a_, a_);
    if (a_.is_zero()) return mul(d, mul(b_, b_)).neg();
    return add(mul(a_, a_), mul(d, mul(b_, b_)).neg());
}

QuadExtScalar QuadExtScalar::inv() const {
    if (is_zero()) throw DivisionByZero();
    PadicScalar n = norm().inv();
    return QuadExtScalar(mul(a_, n), mul(b_, n).neg(), d_, ram_);
}

QuadExtScalar QuadExtScalar::pow(long n) const {
    unsigned long p = prime();
    int prec = precision();
    QuadExtScalar r = from_base(PadicScalar::from_integer(1, p, prec));
    r = QuadExtScalar(r.re(), r.im(), d_, ram_);
    if (n == 0) return r;
    QuadExtScalar base = n > 0 ? *this : inv();
    unsigned long e = static_cast<unsigned long>(n > 0 ? n : -n);
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

bool QuadExtScalar::is_one_to(int digits) const {
    return b_.is_zero() && a_.is_one_to(digits);
}

std::string QuadExtScalar::str() const {
    if (is_base()) return a_.str();
    return a_.str() + " + (" + b_.str() + ")*w";
}

QuadExtScalar add(const QuadExtScalar& x, const QuadExtScalar& y, int cancellation_floor) {
    if (x.defining() != y.defining() || x.is_ramified() != y.is_ramified())
        throw Error("adding elements of different extensions");
    return QuadExtScalar(add(x.re(), y.re(), cancellation_floor),
                         add(x.im(), y.im(), cancellation_floor), x.defining(), x.is_ramified());
}

QuadExtScalar add_lenient(const QuadExtScalar& x, const QuadExtScalar& y) {
    if (x.defining() != y.defining() || x.is_ramified() != y.is_ramified())
        throw Error("adding elements of different extensions");
    unsigned long p = x.prime();
    int prec = std::min(x.precision(), y.precision());
    auto guarded = [&](const PadicScalar& u, const PadicScalar& v) {
        try {
            return add(u, v);
        } catch (const CancellationError&) {
            return PadicScalar::zero(p, prec);
        }
    };
    return QuadExtScalar(guarded(x.re(), y.re()), guarded(x.im(), y.im()), x.defining(),
                         x.is_ramified());
}

QuadExtScalar mul(const QuadExtScalar& x, const QuadExtScalar& y) {
    if (x.defining() != y.defining() || x.is_ramified() != y.is_ramified())
        throw Error("multiplying elements of different extensions");
    unsigned long p = x.prime();
    int prec = std::min(x.precision(), y.precision());
    PadicScalar d = PadicScalar::from_rational(
        x.is_ramified() ? mpq_class(static_cast<long>(p)) : mpq_class(x.defining()), p, prec);
    // (a + bw)(a' + b'w) = (aa' + d bb') + (ab' + a'b) w
    PadicScalar re = add(mul(x.re(), y.re()), mul(d, mul(x.im(), y.im())));
    PadicScalar im = add(mul(x.re(), y.im()), mul(x.im(), y.re()));
    return QuadExtScalar(re, im, x.defining(), x.is_ramified());
}

QuadExtScalar ext_frobenius(const QuadExtScalar& z) {
    if (z.is_ramified()) throw RamifiedUnsupported();
    return z.conj();
}

bool eq_to(const QuadExtScalar& x, const QuadExtScalar& y, int digits) {
    return eq_to(x.re(), y.re(), digits) && eq_to(x.im(), y.im(), digits);
}

int agreement_digits(const QuadExtScalar& x, const QuadExtScalar& y) {
    if (x.im().is_zero() && y.im().is_zero()) return agreement_digits(x.re(), y.re());
    return std::min(agreement_digits(x.re(), y.re()), agreement_digits(x.im(), y.im()));
}

std::string serialize_quadext(const QuadExtScalar& z) {
    nlohmann::json j;
    j["a"] = nlohmann::json::parse(serialize_padic(z.re()));
    j["b"] = nlohmann::json::parse(serialize_padic(z.im()));
    j["d"] = z.defining();
    j["ramified"] = z.is_ramified();
    return j.dump();
}

} // namespace plectic
