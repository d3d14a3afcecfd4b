#include "doctest.h"

#include <random>

#include "json.hpp"
#include "plectic/padic.hpp"
#include "plectic/quadext.hpp"

using namespace plectic;

namespace {

PadicScalar rnd_scalar(std::mt19937& rng, unsigned long p, int prec) {
    std::uniform_int_distribution<long> num(-5000, 5000), den(1, 5000), val(-3, 3);
    mpq_class q;
    do {
        q = mpq_class(num(rng), den(rng));
        q.canonicalize();
    } while (q == 0);
    long v = val(rng);
    mpq_class pw = v >= 0 ? mpq_class(ppow(p, static_cast<unsigned long>(v)))
                          : mpq_class(1, ppow(p, static_cast<unsigned long>(-v)));
    return PadicScalar::from_rational(q * pw, p, prec);
}

} // namespace

TEST_CASE("padic add basics over Q5") {
    auto two = PadicScalar::from_integer(2, 5, 4);
    auto three = PadicScalar::from_integer(3, 5, 4);
    auto s = two + three;
    CHECK(s.valuation() == 1);
    CHECK(s.digits() == std::vector<unsigned long>{1, 0, 0});
    CHECK(s.precision() == 3);   // one digit lost to cancellation

    auto z = PadicScalar::zero(5, 4);
    auto x = PadicScalar::from_rational(mpq_class(7, 3), 5, 4);
    CHECK(eq_to(add(x, z), x, 4));

    // perturbation below precision is invisible
    auto one = PadicScalar::from_integer(1, 5, 4);
    auto eps = PadicScalar::from_integer(625, 5, 4);
    CHECK(eq_to(add(one, eps), one, 4));
}

TEST_CASE("padic mul and inv") {
    auto a = PadicScalar::from_integer(13, 5, 4);
    auto b = PadicScalar::from_integer(3, 5, 4);
    CHECK(mul(a, b).digits() == std::vector<unsigned long>{4, 2, 1, 0});

    auto x = PadicScalar::from_rational(mpq_class(7, 9), 5, 8);
    CHECK(eq_to(mul(x, PadicScalar::from_integer(1, 5, 8)), x, 8));

    auto five = PadicScalar::from_integer(5, 5, 4);
    auto sq = mul(five, five);
    CHECK(sq.valuation() == 2);
    CHECK(sq.digits() == std::vector<unsigned long>{1, 0, 0, 0});

    auto inv2 = PadicScalar::from_integer(2, 5, 4).inv();
    CHECK(inv2.digits() == std::vector<unsigned long>{3, 2, 2, 2});
    CHECK(mul(PadicScalar::from_integer(2, 5, 4), inv2).is_one_to(4));
    CHECK(eq_to(PadicScalar::from_integer(1, 5, 4).inv(), PadicScalar::from_integer(1, 5, 4), 4));
    CHECK(eq_to(x.inv().inv(), x, 8));
    CHECK(x.inv().precision() == x.precision());
    CHECK_THROWS_AS(PadicScalar::zero(5, 4).inv(), DivisionByZero);
}

TEST_CASE("valuation laws on random pairs") {
    std::mt19937 rng(20240811);
    for (int i = 0; i < 200; ++i) {
        auto x = rnd_scalar(rng, 7, 32);
        auto y = rnd_scalar(rng, 7, 32);
        CHECK(mul(x, y).valuation() == x.valuation() + y.valuation());
        try {
            auto s = add(x, y);
            CHECK(s.valuation() >= std::min(x.valuation(), y.valuation()));
            if (x.valuation() != y.valuation())
                CHECK(s.valuation() == std::min(x.valuation(), y.valuation()));
        } catch (const CancellationError&) {
            CHECK(x.valuation() == y.valuation());
        }
    }
}

TEST_CASE("cancellation floor is enforced") {
    auto x = PadicScalar::from_integer(7, 5, 8);
    CHECK_THROWS_AS(add(x, x.neg()), CancellationError);
    auto y = PadicScalar::from_integer(7 + 625, 5, 8);
    CHECK_THROWS_AS(add(x, y.neg(), 6), CancellationError);
    CHECK_NOTHROW(add(x, y.neg(), 4));
}

TEST_CASE("prime mismatch is rejected") {
    auto x = PadicScalar::from_integer(1, 5, 4);
    auto y = PadicScalar::from_integer(1, 7, 4);
    CHECK_THROWS_AS(add(x, y), PrimeMismatch);
    CHECK_THROWS_AS(mul(x, y), PrimeMismatch);
}

TEST_CASE("serialization round trip") {
    auto x = PadicScalar::from_integer(39, 5, 4);
    auto j = nlohmann::json::parse(serialize_padic(x));
    CHECK(j["valuation"] == 0);
    CHECK(j["digits"] == nlohmann::json::array({4, 2, 1, 0}));
    CHECK(j["precision"] == 4);

    auto z = nlohmann::json::parse(serialize_padic(PadicScalar::zero(5, 4)));
    CHECK(z["valuation"] == "inf");
    CHECK(z["digits"].empty());

    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
        auto v = rnd_scalar(rng, 5, 16);
        auto back = deserialize_padic(serialize_padic(v), 5);
        CHECK(eq_to(v, back, 16));
        CHECK(v.valuation() == back.valuation());
        CHECK(v.precision() == back.precision());
    }
}

TEST_CASE("sqrt and teichmuller") {
    auto x = PadicScalar::from_integer(11, 5, 20);
    auto r = mul(x, x).sqrt();
    CHECK((eq_to(r, x, 20) || eq_to(r, x.neg(), 20)));

    auto t = PadicScalar::from_integer(2, 5, 20).teichmuller();
    CHECK(t.pow(4).is_one_to(20));
}

TEST_CASE("frobenius on the unramified quadratic extension") {
    unsigned long p = 5;
    int prec = 24;
    auto a = PadicScalar::from_rational(mpq_class(7, 2), p, prec);
    auto base = QuadExtScalar::from_base(a);
    CHECK(eq_to(ext_frobenius(base), base, prec));

    auto w = QuadExtScalar::unramified(PadicScalar::zero(p, prec), PadicScalar::from_integer(1, p, prec));
    CHECK(eq_to(ext_frobenius(w), w.neg(), prec));

    std::mt19937 rng(99);
    for (int i = 0; i < 40; ++i) {
        auto z = QuadExtScalar::unramified(rnd_scalar(rng, p, prec), rnd_scalar(rng, p, prec));
        auto zz = QuadExtScalar::unramified(rnd_scalar(rng, p, prec), rnd_scalar(rng, p, prec));
        CHECK(eq_to(ext_frobenius(ext_frobenius(z)), z, prec));
        // ring homomorphism, up to additive cancellation
        try {
            CHECK(eq_to(ext_frobenius(z + zz), ext_frobenius(z) + ext_frobenius(zz), prec - 8));
        } catch (const CancellationError&) {}
        CHECK(eq_to(ext_frobenius(z * zz), ext_frobenius(z) * ext_frobenius(zz), prec - 8));
    }

    auto ram = QuadExtScalar(PadicScalar::from_integer(1, p, prec),
                             PadicScalar::from_integer(1, p, prec), 5, true);
    CHECK_THROWS_AS(ext_frobenius(ram), RamifiedUnsupported);
    CHECK(ram.twice_valuation() == 0);
    auto ram2 = QuadExtScalar(PadicScalar::from_integer(5, p, prec),
                              PadicScalar::from_integer(1, p, prec), 5, true);
    CHECK(ram2.twice_valuation() == 1);   // v = 1/2 stored as a half-integer numerator
}

TEST_CASE("extension descriptor must be a non-square") {
    auto one = PadicScalar::from_integer(1, 5, 8);
    CHECK_THROWS_AS(QuadExtScalar::unramified(one, one, 4), ConfigError);
    CHECK_NOTHROW(QuadExtScalar::unramified(one, one, 2));
}
