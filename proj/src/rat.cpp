#include "plectic/rat.hpp"

namespace plectic {

long valp(const mpz_class& n, unsigned long p) {
    if (n == 0) return VAL_INF;
    mpz_class m = n, q, r;
    long v = 0;
    mpz_class P(p);
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), P.get_mpz_t());
        if (r != 0) break;
        m = q;
        ++v;
    }
    return v;
}

long valp(const mpq_class& q, unsigned long p) {
    if (q == 0) return VAL_INF;
    return valp(mpz_class(q.get_num()), p) - valp(mpz_class(q.get_den()), p);
}

mpz_class ppow(unsigned long p, unsigned long k) {
    mpz_class z;
    mpz_ui_pow_ui(z.get_mpz_t(), p, k);
    return z;
}

mpq_class mod_ppow(const mpq_class& t, long n, unsigned long p) {
    if (t == 0) return mpq_class(0);
    long v = valp(t, p);
    if (v >= n) return mpq_class(0);
    long e = v < 0 ? -v : 0;
    // t = a / (b * p^e) with a, b prime to p (after extracting p-powers from a).
    mpz_class num = t.get_num(), den = t.get_den();
    long vden = valp(den, p);
    long vnum = valp(num, p);
    mpz_class a = num / ppow(p, static_cast<unsigned long>(vnum));
    mpz_class b = den / ppow(p, static_cast<unsigned long>(vden));
    // t = p^v * (a/b), v = vnum - vden;  want m = p^(v+e) * a * b^{-1} mod p^(n+e)
    mpz_class mod = ppow(p, static_cast<unsigned long>(n + e));
    mpz_class binv;
    if (mpz_invert(binv.get_mpz_t(), b.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw Error("mod_ppow: denominator not invertible");
    mpz_class m = a * binv % mod;
    if (m < 0) m += mod;
    m = m * ppow(p, static_cast<unsigned long>(v + e)) % mod;
    mpq_class r(m, ppow(p, static_cast<unsigned long>(e)));
    r.canonicalize();
    return r;
}

mpq_class parse_rational(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0)
        throw ConfigError("cannot parse rational: '" + s + "'");
    q.canonicalize();
    if (q.get_den() == 0) throw ConfigError("zero denominator in rational: '" + s + "'");
    return q;
}

std::string rational_str(const mpq_class& q) {
    return q.get_str();
}

} // namespace plectic
