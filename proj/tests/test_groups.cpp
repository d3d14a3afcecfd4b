#include "doctest.h"

#include "plectic/groups.hpp"

using namespace plectic;

namespace {

const int PREC = 32;

SchottkyFactor rank2_q5() {
    PGL2Elem g1(125, 0, 0, 1);
    PGL2Elem g2(63, 62, 62, 63);
    std::vector<std::pair<BoundaryBall, BoundaryBall>> balls = {
        {{0, 1, false}, {0, 0, true}},
        {{-1, 1, false}, {1, 1, false}},
    };
    return SchottkyFactor(5, PREC, {g1, g2}, balls);
}

} // namespace

TEST_CASE("free words reduce") {
    auto w = FreeWord::one().appended(1).appended(2).appended(-2);
    CHECK(w.letters == std::vector<int>{1});
    CHECK(w.concat(w.inverse()).empty());
    CHECK(FreeWord{{1, -2, 1}}.str() == "g1*g2^-1*g1");
}

TEST_CASE("word enumeration counts") {
    auto f = rank2_q5();
    CHECK(enumerate_words(f, 0).size() == 1);
    CHECK(enumerate_words(f, 1).size() == 5);
    CHECK(enumerate_words(f, 2).size() == 17);   // 1 + 4 + 4*3

    // freeness: distinct reduced words give distinct matrices
    auto words = enumerate_words(f, 4);
    for (size_t a = 0; a < words.size(); ++a) {
        for (size_t b = a + 1; b < words.size(); ++b)
            CHECK(!proj_equal(words[a].mat, words[b].mat));
        if (a > 0) CHECK(!words[a].mat.is_identity());
    }
}

TEST_CASE("good position certificates") {
    auto f = rank2_q5();
    CHECK(f.rank() == 2);

    // same generator twice: balls collide
    PGL2Elem g1(125, 0, 0, 1);
    auto bad = good_position_check(5, {g1, g1},
                                   {{{0, 1, false}, {0, 0, true}},
                                    {{0, 1, false}, {0, 0, true}}});
    CHECK(!bad.ok);

    // non-hyperbolic generator is rejected
    auto par = good_position_check(5, {PGL2Elem(1, 1, 0, 1)}, {{{0, 1, false}, {0, 0, true}}});
    CHECK(!par.ok);

    // rank-1 factors certify automatically from the axis
    auto c = SchottkyFactor::cyclic(5, PREC, PGL2Elem(5, 0, 0, 1));
    CHECK(c.rank() == 1);
    CHECK(ball_contains(c.letter_ball(1), mpq_class(0), 5));
    CHECK(ball_contains(c.letter_ball(-1), std::nullopt, 5));
}

TEST_CASE("limit set of a cyclic factor") {
    PlecticGroup g({GroupFactor::cyclic(5, PREC, PGL2Elem(5, 0, 0, 1))});
    auto approx = limit_set_approx(g, 0, 3);
    REQUIRE(approx.points.size() == 2);
    bool zero = false, inf = false;
    for (const auto& pt : approx.points) {
        if (pt.infinite) inf = true;
        else if (pt.z.is_zero()) zero = true;
    }
    CHECK(zero);
    CHECK(inf);
    CHECK(classify_limit_set(g.factor(0)) == LimitSetClass::TwoPoints);
}

TEST_CASE("limit set classification") {
    CHECK(classify_limit_set(GroupFactor::trivial(5)) == LimitSetClass::Empty);
    CHECK(classify_limit_set(GroupFactor::schottky(rank2_q5())) == LimitSetClass::Perfect);
}

TEST_CASE("depth-2 limit points lie in the depth-3 cover") {
    PlecticGroup g({GroupFactor::schottky(rank2_q5())});
    auto shallow = limit_set_approx(g, 0, 2);
    auto deep = limit_set_approx(g, 0, 3);
    CHECK(deep.cover.size() == 4 * 3 * 3);
    for (const auto& pt : shallow.points) {
        int hits = 0;
        for (const auto& b : deep.cover) hits += ball_contains(b, pt) ? 1 : 0;
        CHECK(hits >= 1);
    }
    // cover balls of one depth are pairwise disjoint
    for (size_t a = 0; a < deep.cover.size(); ++a)
        for (size_t b = a + 1; b < deep.cover.size(); ++b)
            CHECK(ball_disjoint(deep.cover[a], deep.cover[b], 5));
}

TEST_CASE("conjugation transports the limit set") {
    PlecticGroup g({GroupFactor::schottky(rank2_q5())});
    PGL2Elem h(2, 5, 1, 3);
    auto conj = conjugate_group(g, {h});
    auto base = limit_set_approx(g, 0, 2);
    auto moved = limit_set_approx(conj, 0, 2);
    REQUIRE(base.points.size() == moved.points.size());
    for (const auto& pt : base.points) {
        auto img = moebius_apply(h, pt);
        bool found = false;
        for (const auto& q : moved.points)
            if (eq_to(img, q, PREC - 8)) { found = true; break; }
        CHECK(found);
    }
    // double conjugation composes
    auto twice = conjugate_group(conj, {h});
    auto direct = conjugate_group(g, {h * h});
    CHECK(proj_equal(twice.factor(0).factor().gen(0), direct.factor(0).factor().gen(0)));
}

TEST_CASE("partial intersection keeps the subproduct") {
    PlecticGroup g({GroupFactor::cyclic(5, PREC, PGL2Elem(5, 0, 0, 1)),
                    GroupFactor::schottky(SchottkyFactor(
                        7, PREC, {PGL2Elem(7, 0, 0, 1)}, {{{0, 1, false}, {0, 0, true}}}))});
    auto sub = partial_intersection(g, {0});
    CHECK(!sub.factor(0).is_trivial());
    CHECK(sub.factor(1).is_trivial());
    CHECK(sub.support() == std::vector<size_t>{0});
    auto all = partial_intersection(g, {0, 1});
    CHECK(all.support() == std::vector<size_t>{0, 1});
    // kept place has the same limit points at equal depth
    auto a = limit_set_approx(g, 0, 2), b = limit_set_approx(sub, 0, 2);
    CHECK(a.points.size() == b.points.size());
}

TEST_CASE("Schreier subgroups") {
    auto f = rank2_q5();
    // index 2, both generators swap the cosets
    auto sub = schreier_subgroup(f, {{1, 0}, {1, 0}});
    CHECK(sub.index == 2);
    CHECK(sub.sub_gens.size() == 3);   // 1 + 2*(2-1)
    for (const auto& m : sub.sub_mats) CHECK(!m.is_identity());

    // index 1 gives back the factor
    auto same = schreier_subgroup(f, {{0}, {0}});
    CHECK(same.sub_gens.size() == 2);
    CHECK(proj_equal(same.sub_mats[0], f.gen(0)));

    // cyclic parent, index 2: the square
    auto c = SchottkyFactor::cyclic(5, PREC, PGL2Elem(5, 0, 0, 1));
    auto sq = schreier_subgroup(c, {{1, 0}});
    REQUIRE(sq.sub_gens.size() == 1);
    CHECK(proj_equal(sq.sub_mats[0], PGL2Elem(25, 0, 0, 1)));

    // rewriting: a subgroup word factors through the Schreier generators
    FreeWord w{{1, 1}};   // g1^2 stays in coset 0
    auto rw = sub.rewrite(w);
    PGL2Elem check;
    for (int l : rw.letters) {
        auto m = sub.sub_mats[static_cast<size_t>(std::abs(l)) - 1];
        check = check * (l > 0 ? m : m.inverse());
    }
    CHECK(proj_equal(check, f.evaluate(w)));
    CHECK_THROWS_AS(sub.rewrite(FreeWord{{1}}), NotASubgroup);

    CHECK_THROWS_AS(schreier_subgroup(f, {{0, 1}, {0, 1}}), NotTransitive);
}

TEST_CASE("membership by ball descent") {
    auto f = rank2_q5();
    auto w = FreeWord{{1, -2}};
    auto found = membership_word(f, f.evaluate(w), 6);
    REQUIRE(found.has_value());
    CHECK(*found == w);

    auto id = membership_word(f, PGL2Elem::identity(), 6);
    REQUIRE(id.has_value());
    CHECK(id->empty());

    // vertex stabilizer element is not in the group
    CHECK(!membership_word(f, PGL2Elem(2, 1, 1, 1), 8).has_value());

    // round trip over all words of length <= 3
    for (const auto& [word, mat] : enumerate_words(f, 3)) {
        auto back = membership_word(f, mat, 3);
        REQUIRE(back.has_value());
        CHECK(*back == word);
    }
}
