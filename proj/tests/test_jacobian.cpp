#include "doctest.h"

#include <random>

#include "plectic/jacobian.hpp"

using namespace plectic;

namespace {

const int PREC = 32;

SchottkyFactor rank2_q5() {
    return SchottkyFactor(5, PREC, {PGL2Elem(125, 0, 0, 1), PGL2Elem(63, 62, 62, 63)},
                          {{{0, 1, false}, {0, 0, true}}, {{-1, 1, false}, {1, 1, false}}});
}

PlecticGroup cyclic5() { return PlecticGroup({GroupFactor::cyclic(5, PREC, PGL2Elem(5, 0, 0, 1))}); }

ProjPoint pt(const mpq_class& q, unsigned long p = 5) { return ProjPoint::from_rational(q, p, PREC); }

QuadExtScalar rat(const mpq_class& q, unsigned long p = 5) {
    return QuadExtScalar::from_base(PadicScalar::from_rational(q, p, PREC));
}

PlecticCycle pair_cycle(const ProjPoint& x, const ProjPoint& y) { return {{{1, {{x, y}}}}}; }

} // namespace

TEST_CASE("cyclic period lattice is 5^Z") {
    auto h = invariant_measure_lattice(cyclic5(), 6);
    auto lat = period_lattice(h, 6);
    REQUIRE(lat.periods.size() == 1);
    REQUIRE(lat.periods[0].size() == 1);
    CHECK(eq_to(lat.periods[0][0][0], rat(5), PREC));
}

TEST_CASE("rank-2 period matrix is symmetric with positive diagonal valuation") {
    auto h = invariant_measure_lattice(PlecticGroup({GroupFactor::schottky(rank2_q5())}), 8);
    auto lat = period_lattice(h, 8);
    const auto& q = lat.periods[0];
    CHECK(agreement_digits(q[0][1], q[1][0]) >= 20);
    CHECK(q[0][0].twice_valuation() > 0);
    CHECK(q[1][1].twice_valuation() > 0);
}

TEST_CASE("tate normal form reduction") {
    auto h = invariant_measure_lattice(cyclic5(), 6);
    auto lat = period_lattice(h, 6);
    JacobianElement v{{{rat(250)}}};   // 2 * 5^3
    auto r = reduce_mod_lattice(v, lat, h);
    CHECK(eq_to(r.comps[0][0], rat(2), PREC));
    // idempotent; lattice generator reduces to the identity
    CHECK(jacobian_eq(reduce_mod_lattice(r, lat, h), r, PREC));
    JacobianElement g{{{rat(5)}}};
    CHECK(reduce_mod_lattice(g, lat, h).is_identity(PREC));
}

TEST_CASE("abel-jacobi in the tate case") {
    auto h = invariant_measure_lattice(cyclic5(), 6);
    auto lat = period_lattice(h, 6);
    auto a = abel_jacobi(h, lat, pair_cycle(pt(2), pt(3)), 6);
    CHECK(eq_to(a.comps[0][0], rat(mpq_class(2, 3)), PREC));
    // degenerate cycle and translated cycle
    CHECK(abel_jacobi(h, lat, pair_cycle(pt(2), pt(2)), 6).is_identity(PREC));
    auto moved = abel_jacobi(h, lat, pair_cycle(pt(10), pt(15)), 6);
    CHECK(jacobian_eq(a, moved, PREC));
}

TEST_CASE("abel-jacobi kills the lattice generators") {
    auto f = rank2_q5();
    auto h = invariant_measure_lattice(PlecticGroup({GroupFactor::schottky(f)}), 8);
    auto lat = period_lattice(h, 8);
    for (size_t j = 0; j < 2; ++j) {
        auto t0 = pt(2);
        auto d = pair_cycle(ProjPoint::from_rational(f.gen(j).apply(mpq_class(2)).value(), 5, PREC),
                            t0);
        CHECK(abel_jacobi(h, lat, d, 8).is_identity(14));
    }
}

TEST_CASE("abel-jacobi invariance on the rank-2 factor") {
    auto f = rank2_q5();
    auto h = invariant_measure_lattice(PlecticGroup({GroupFactor::schottky(f)}), 8);
    auto lat = period_lattice(h, 8);
    auto d = pair_cycle(pt(2), pt(3));
    auto a = abel_jacobi(h, lat, d, 8);
    auto b = abel_jacobi(h, lat, translate_cycle(d, {f.gen(1)}), 8);
    CHECK(jacobian_eq(a, b, 14));
}

TEST_CASE("kunneth compose and decompose") {
    PlecticGroup g({GroupFactor::cyclic(5, PREC, PGL2Elem(5, 0, 0, 1)),
                    GroupFactor::cyclic(7, PREC, PGL2Elem(7, 0, 0, 1))});
    auto h = invariant_measure_lattice(g, 6);
    auto lat = period_lattice(h, 6);

    PlecticCycle d = {{{1, {{pt(2, 5), pt(3, 5)}, {pt(3, 7), pt(1, 7)}}}}};
    auto joint = abel_jacobi(h, lat, d, 6);

    auto h1 = invariant_measure_lattice(cyclic5(), 6);
    auto lat1 = period_lattice(h1, 6);
    auto a1 = abel_jacobi(h1, lat1, pair_cycle(pt(2, 5), pt(3, 5)), 6);
    PlecticGroup g7({GroupFactor::cyclic(7, PREC, PGL2Elem(7, 0, 0, 1))});
    auto h7 = invariant_measure_lattice(g7, 6);
    auto lat7 = period_lattice(h7, 6);
    auto a7 = abel_jacobi(h7, lat7, pair_cycle(pt(3, 7), pt(1, 7)), 6);

    CHECK(jacobian_eq(joint, kunneth_compose({a1, a7}, h), PREC - 2));
    auto parts = kunneth_decompose(joint, h, PREC - 2);
    REQUIRE(parts.size() == 2);
    CHECK(eq_to(parts[0].comps[0][0], rat(mpq_class(2, 3), 5), PREC - 2));
    CHECK(eq_to(parts[1].comps[0][0], rat(3, 7), PREC - 2));

    // a place-2 period in the cycle degenerates the whole class
    PlecticCycle dq = {{{1, {{pt(2, 5), pt(3, 5)}, {pt(7, 7), pt(1, 7)}}}}};
    CHECK(abel_jacobi(h, lat, dq, 6).is_identity(PREC));
}

TEST_CASE("kunneth roundtrip on random elementary classes") {
    PlecticGroup g({GroupFactor::cyclic(5, PREC, PGL2Elem(5, 0, 0, 1)),
                    GroupFactor::cyclic(7, PREC, PGL2Elem(7, 0, 0, 1))});
    auto h = invariant_measure_lattice(g, 5);
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        long u1 = 1 + rng() % 100000, u7 = 1 + rng() % 100000;
        if (u1 % 5 == 0) ++u1;
        if (u7 % 7 == 0) ++u7;
        JacobianElement p1{{{rat(u1, 5)}}}, p7{{{rat(u7, 7)}}};
        auto x = kunneth_compose({p1, p7}, h);
        auto parts = kunneth_decompose(x, h, PREC);
        CHECK(jacobian_eq(kunneth_compose(parts, h), x, PREC));
        CHECK(eq_to(parts[0].comps[0][0], rat(u1, 5), PREC));
    }
}

TEST_CASE("tate curve point operations") {
    TateCurve e(PadicScalar::from_integer(5, 5, PREC));
    auto u = rat(2), w = rat(3);
    CHECK(eq_to(e.add(u, w), rat(6), PREC));
    CHECK(eq_to(e.add(u, e.identity()), u, PREC));
    CHECK(e.add(u, e.neg(u)).is_one_to(PREC));
    // normalization puts valuations into [0, v(q))
    CHECK(eq_to(e.normalize(rat(250)), rat(2), PREC));
    CHECK(eq_to(e.normalize(rat(mpq_class(2, 5))), rat(2), PREC));
    CHECK_THROWS_AS(TateCurve(PadicScalar::from_integer(2, 5, PREC)), ConfigError);
}

TEST_CASE("commensurability of tate periods") {
    auto s = [&](long n) { return PadicScalar::from_integer(n, 5, PREC); };
    auto r = commensurability_check(s(5), s(25));
    CHECK(r.yes);
    CHECK(r.a == 2);
    CHECK(r.b == 1);
    CHECK(!r.at_precision);

    CHECK(!commensurability_check(s(5), s(10)).yes);

    auto same = commensurability_check(s(5), s(5));
    CHECK(same.yes);
    CHECK(same.a == 1);
    CHECK(same.b == 1);

    // off by the Teichmuller root -1: q^2 = qt^2
    auto tor = commensurability_check(s(5), s(-5));
    CHECK(tor.yes);
    CHECK(tor.a == 2);
    CHECK(tor.b == 2);
    CHECK(!tor.at_precision);

    CHECK_THROWS_AS(commensurability_check(s(2), s(5)), ConfigError);
}

TEST_CASE("modular projection on the tate curve") {
    auto h = invariant_measure_lattice(cyclic5(), 6);
    auto lat = period_lattice(h, 6);
    auto mp = modular_projection(h, {1}, {PadicScalar::from_integer(5, 5, PREC)});
    auto a = abel_jacobi(h, lat, pair_cycle(pt(2), pt(3)), 6);
    auto img = mp.apply(a);
    REQUIRE(img.size() == 1);
    CHECK(eq_to(img[0], rat(mpq_class(2, 3)), PREC));

    CHECK_THROWS_AS(modular_projection(h, {0}, {PadicScalar::from_integer(5, 5, PREC)}),
                    NonPrimitiveCharacter);

    // homomorphism on classes
    auto b = abel_jacobi(h, lat, pair_cycle(pt(7), pt(2)), 6);
    auto prod = mp.apply(jacobian_mul(a, b, lat, h));
    TateCurve e(PadicScalar::from_integer(5, 5, PREC));
    CHECK(eq_to(prod[0], e.add(mp.apply(a)[0], mp.apply(b)[0]), PREC));
}

TEST_CASE("modular projection on a product recovers the closed forms") {
    PlecticGroup g({GroupFactor::cyclic(5, PREC, PGL2Elem(5, 0, 0, 1)),
                    GroupFactor::cyclic(7, PREC, PGL2Elem(7, 0, 0, 1))});
    auto h = invariant_measure_lattice(g, 6);
    auto lat = period_lattice(h, 6);
    PlecticCycle d = {{{1, {{pt(2, 5), pt(3, 5)}, {pt(3, 7), pt(1, 7)}}}}};
    auto mp = modular_projection(h, {1}, {PadicScalar::from_integer(5, 5, PREC),
                                          PadicScalar::from_integer(7, 7, PREC)});
    auto img = mp.apply(abel_jacobi(h, lat, d, 6));
    REQUIRE(img.size() == 2);
    CHECK(eq_to(img[0], rat(mpq_class(2, 3), 5), PREC - 2));
    CHECK(eq_to(img[1], rat(3, 7), PREC - 2));
}
