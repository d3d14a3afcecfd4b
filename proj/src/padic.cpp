#include "plectic/padic.hpp"

#include <algorithm>

#include "json.hpp"

namespace plectic {

PadicScalar PadicScalar::make(unsigned long p, long val, mpz_class unit, int prec) {
    if (prec < 1) throw PrecisionExhausted();
    PadicScalar x;
    x.prime_ = p;
    mpz_class mod = ppow(p, static_cast<unsigned long>(prec));
    unit %= mod;
    if (unit < 0) unit += mod;
    if (unit == 0) throw Error("make: unit part vanishes");
    // Renormalize so the leading digit is nonzero.
    long shift = valp(unit, p);
    if (shift > 0) {
        unit /= ppow(p, static_cast<unsigned long>(shift));
        val += shift;
        prec -= static_cast<int>(shift);
        if (prec < 1) throw PrecisionExhausted();
        unit %= ppow(p, static_cast<unsigned long>(prec));
    }
    x.zero_ = false;
    x.val_ = val;
    x.unit_ = unit;
    x.prec_ = prec;
    return x;
}

PadicScalar PadicScalar::zero(unsigned long p, int prec) {
    PadicScalar x;
    x.prime_ = p;
    x.zero_ = true;
    x.prec_ = prec;
    return x;
}

PadicScalar PadicScalar::from_integer(long n, unsigned long p, int prec) {
    return from_rational(mpq_class(n), p, prec);
}

PadicScalar PadicScalar::from_rational(const mpq_class& q, unsigned long p, int prec) {
    if (p < 2) throw ConfigError("prime must be >= 2");
    if (q == 0) return zero(p, prec);
    long v = valp(q, p);
    mpz_class num = q.get_num(), den = q.get_den();
    mpz_class a = num / ppow(p, static_cast<unsigned long>(std::max(0L, valp(num, p))));
    mpz_class b = den / ppow(p, static_cast<unsigned long>(std::max(0L, valp(den, p))));
    mpz_class mod = ppow(p, static_cast<unsigned long>(prec));
    mpz_class binv;
    if (mpz_invert(binv.get_mpz_t(), b.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw Error("from_rational: denominator not invertible");
    return make(p, v, a * binv, prec);
}

std::vector<unsigned long> PadicScalar::digits() const {
    std::vector<unsigned long> d;
    if (zero_) return d;
    mpz_class u = unit_;
    for (int i = 0; i < prec_; ++i) {
        mpz_class r = u % prime_;
        d.push_back(r.get_ui());
        u /= prime_;
    }
    return d;
}

bool PadicScalar::is_one_to(int digits) const {
    if (zero_) return false;
    if (val_ != 0) return false;
    int k = std::min(digits, prec_);
    return unit_ % ppow(prime_, static_cast<unsigned long>(k)) == 1;
}

PadicScalar PadicScalar::neg() const {
    if (zero_) return *this;
    mpz_class mod = ppow(prime_, static_cast<unsigned long>(prec_));
    return make(prime_, val_, mod - unit_, prec_);
}

PadicScalar PadicScalar::inv() const {
    if (zero_) throw DivisionByZero();
    mpz_class mod = ppow(prime_, static_cast<unsigned long>(prec_));
    mpz_class u;
    mpz_invert(u.get_mpz_t(), unit_.get_mpz_t(), mod.get_mpz_t());
    return make(prime_, -val_, u, prec_);
}

PadicScalar PadicScalar::pow(long n) const {
    if (n == 0) {
        if (zero_) throw Error("0^0");
        return from_integer(1, prime_, prec_);
    }
    if (zero_) return *this;
    if (n < 0) return inv().pow(-n);
    mpz_class mod = ppow(prime_, static_cast<unsigned long>(prec_));
    mpz_class u, e(n);
    mpz_powm(u.get_mpz_t(), unit_.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
    return make(prime_, val_ * n, u, prec_);
}

PadicScalar PadicScalar::sqrt() const {
    if (zero_) return *this;
    if (prime_ == 2) throw Error("sqrt: p = 2 not supported");
    if (val_ % 2 != 0) throw Error("sqrt: odd valuation");
    // Root of the unit mod p, then Newton lifting.
    mpz_class r0 = -1;
    mpz_class u0 = unit_ % prime_;
    for (unsigned long r = 1; r < prime_; ++r) {
        if ((r * r) % prime_ == u0) { r0 = r; break; }
    }
    if (r0 < 0) throw Error("sqrt: unit is not a square");
    mpz_class r = r0;
    int known = 1;
    mpz_class inv2;
    while (known < prec_) {
        known = std::min(2 * known, prec_);
        mpz_class mod = ppow(prime_, static_cast<unsigned long>(known));
        mpz_class rinv;
        mpz_invert(rinv.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
        mpz_class two(2);
        mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), mod.get_mpz_t());
        r = (r + unit_ % mod * rinv) % mod * inv2 % mod;
    }
    return make(prime_, val_ / 2, r, prec_);
}

PadicScalar PadicScalar::teichmuller() const {
    if (zero_) throw DivisionByZero("teichmuller of zero");
    mpz_class mod = ppow(prime_, static_cast<unsigned long>(prec_));
    mpz_class x = unit_ % mod, prev;
    mpz_class e(static_cast<unsigned long>(prime_));
    do {
        prev = x;
        mpz_powm(x.get_mpz_t(), x.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
    } while (x != prev);
    return make(prime_, 0, x, prec_);
}

PadicScalar PadicScalar::truncated(int prec) const {
    if (zero_ || prec >= prec_) return *this;
    return make(prime_, val_, unit_ % ppow(prime_, static_cast<unsigned long>(prec)), prec);
}

std::string PadicScalar::str() const {
    if (zero_) return "0";
    std::string s = "...";
    auto d = digits();
    for (auto it = d.rbegin(); it != d.rend(); ++it) s += std::to_string(*it) + (it + 1 == d.rend() ? "" : ",");
    s += " * " + std::to_string(prime_) + "^" + std::to_string(val_);
    return s;
}

PadicScalar add(const PadicScalar& x, const PadicScalar& y, int cancellation_floor) {
    if (x.prime_ != y.prime_) throw PrimeMismatch();
    if (x.zero_) return y;
    if (y.zero_) return x;
    unsigned long p = x.prime_;
    long v = std::min(x.val_, y.val_);
    long kx = x.val_ + x.prec_, ky = y.val_ + y.prec_;
    long k = std::min(kx, ky);       // absolute precision of the sum
    int rel = static_cast<int>(k - v);
    if (rel < 1) throw PrecisionExhausted("add: operand valuations too far below precision");
    mpz_class mod = ppow(p, static_cast<unsigned long>(rel));
    mpz_class s = x.unit_ * ppow(p, static_cast<unsigned long>(x.val_ - v)) +
                  y.unit_ * ppow(p, static_cast<unsigned long>(y.val_ - v));
    s %= mod;
    if (s < 0) s += mod;
    long cancel = (s == 0) ? rel : valp(s, p);
    if (rel - cancel < cancellation_floor)
        throw CancellationError("add: " + std::to_string(rel - cancel) +
                                " surviving digits < floor " + std::to_string(cancellation_floor));
    return PadicScalar::make(p, v, s, rel);
}

PadicScalar mul(const PadicScalar& x, const PadicScalar& y) {
    if (x.prime_ != y.prime_) throw PrimeMismatch();
    if (x.zero_ || y.zero_) return PadicScalar::zero(x.prime_, std::min(x.prec_, y.prec_));
    int prec = std::min(x.prec_, y.prec_);
    return PadicScalar::make(x.prime_, x.val_ + y.val_, x.unit_ * y.unit_, prec);
}

bool eq_to(const PadicScalar& x, const PadicScalar& y, int digits) {
    if (x.is_zero() && y.is_zero()) return true;
    if (x.is_zero() || y.is_zero()) return false;
    if (x.valuation() != y.valuation()) return false;
    int k = std::min({digits, x.precision(), y.precision()});
    mpz_class mod = ppow(x.prime(), static_cast<unsigned long>(k));
    return (x.unit() - y.unit()) % mod == 0;
}

int agreement_digits(const PadicScalar& x, const PadicScalar& y) {
    if (x.is_zero() && y.is_zero()) return std::min(x.precision(), y.precision());
    if (x.is_zero() || y.is_zero()) return 0;
    if (x.valuation() != y.valuation()) return 0;
    int k = std::min(x.precision(), y.precision());
    mpz_class d = x.unit() - y.unit();
    if (d == 0) return k;
    long v = valp(d, x.prime());
    return static_cast<int>(std::min<long>(v, k));
}

std::string serialize_padic(const PadicScalar& x) {
    nlohmann::json j;
    if (x.is_zero()) {
        j["valuation"] = "inf";
        j["digits"] = nlohmann::json::array();
    } else {
        j["valuation"] = x.valuation();
        j["digits"] = x.digits();
    }
    j["precision"] = x.precision();
    return j.dump();
}

PadicScalar deserialize_padic(const std::string& record, unsigned long prime) {
    nlohmann::json j = nlohmann::json::parse(record);
    int prec = j.at("precision").get<int>();
    if (j.at("valuation").is_string()) {
        if (j["valuation"].get<std::string>() != "inf")
            throw ConfigError("bad valuation in scalar record");
        return PadicScalar::zero(prime, prec);
    }
    long val = j.at("valuation").get<long>();
    mpz_class u = 0, pk = 1;
    for (auto d : j.at("digits")) {
        u += mpz_class(d.get<unsigned long>()) * pk;
        pk *= prime;
    }
    if (u == 0) throw ConfigError("nonzero record with vanishing digits");
    mpq_class power = val >= 0 ? mpq_class(ppow(prime, static_cast<unsigned long>(val)))
                               : mpq_class(1, ppow(prime, static_cast<unsigned long>(-val)));
    PadicScalar unit = PadicScalar::from_rational(mpq_class(u), prime, prec).truncated(prec);
    return mul(unit, PadicScalar::from_rational(power, prime, prec));
}

} // namespace plectic
