#include "doctest.h"

#include <random>

#include "plectic/measures.hpp"

using namespace plectic;

namespace {

const int PREC = 32;
const long DEPTH = 8;

SchottkyFactor rank2_q5() {
    return SchottkyFactor(5, PREC, {PGL2Elem(125, 0, 0, 1), PGL2Elem(63, 62, 62, 63)},
                          {{{0, 1, false}, {0, 0, true}}, {{-1, 1, false}, {1, 1, false}}});
}

PlecticGroup cyclic5() { return PlecticGroup({GroupFactor::cyclic(5, PREC, PGL2Elem(5, 0, 0, 1))}); }

std::vector<BoundaryBall> children(const BoundaryBall& b, unsigned long p) {
    auto e = edge_of_ball(b, p);
    std::vector<BoundaryBall> out;
    for (const auto& w : neighbors(e.target, p))
        if (!(w == e.source)) out.push_back(ball_of_edge({e.target, w}, p));
    return out;
}

} // namespace

TEST_CASE("limit tree of a cyclic factor is the apartment") {
    auto f = SchottkyFactor::cyclic(5, PREC, PGL2Elem(5, 0, 0, 1));
    auto t = limit_tree(f, 4);
    for (const auto& v : t.verts) CHECK(v.center == 0);   // 0-infinity apartment
    CHECK(t.verts.size() >= 5);
}

TEST_CASE("limit tree contains the generator axes") {
    auto f = rank2_q5();
    auto t = limit_tree(f, DEPTH);
    for (size_t i = 0; i < 2; ++i) {
        auto fp = f.gen_fixed(i);
        for (const auto& v : geodesic_between_ends(fp.attracting, fp.repelling, 3))
            CHECK(t.verts.count(v) == 1);
    }
    // monotone in depth
    auto small = limit_tree(f, DEPTH - 2);
    for (const auto& v : small.verts) CHECK(t.verts.count(v) == 1);
}

TEST_CASE("quotient of a cyclic factor is a cycle") {
    PlecticGroup g = cyclic5();
    auto qc = quotient_complex(g, DEPTH);
    REQUIRE(qc.factors[0].has_value());
    const auto& q = *qc.factors[0];
    CHECK(q.betti == 1);
    CHECK(q.nv == 1);   // translation length 1
    CHECK(q.ne == 2);
}

TEST_CASE("quotient of the rank-2 factor has Betti number 2") {
    PlecticGroup g({GroupFactor::schottky(rank2_q5())});
    auto qc = quotient_complex(g, DEPTH);
    const auto& q = *qc.factors[0];
    CHECK(q.betti == 2);
    // free action: every vertex class keeps its tree valence
    for (int c = 0; c < q.nv; ++c) CHECK(q.out_edges[c].size() >= 2);
}

TEST_CASE("cyclic measure lattice") {
    auto h = invariant_measure_lattice(cyclic5(), DEPTH);
    CHECK(h.rank == 1);
    // +1 on the 0-side, -1 on the infinity-side, at several depths
    CHECK(h.eval_place(0, 0, {0, 1, false}) == 1);
    CHECK(h.eval_place(0, 0, {0, 3, false}) == 1);
    CHECK(h.eval_place(0, 0, {0, 0, true}) == -1);
    CHECK(h.eval_place(0, 0, {0, -2, true}) == -1);
    // balls missing the limit set
    CHECK(h.eval_place(0, 0, {1, 1, false}) == 0);
    CHECK(h.eval_place(0, 0, {2, 4, false}) == 0);
}

TEST_CASE("harmonicity and antisymmetry of every basis flow") {
    for (const PlecticGroup& g :
         {cyclic5(), PlecticGroup({GroupFactor::schottky(rank2_q5())})}) {
        auto h = invariant_measure_lattice(g, DEPTH);
        const auto& q = *h.qc.factors[0];
        for (const auto& flow : h.flows[0]) {
            for (int e = 0; e < q.ne; ++e) CHECK(flow[e] == -flow[q.reverse_of[e]]);
            for (int c = 0; c < q.nv; ++c) {
                long sum = 0;
                for (int e : q.out_edges[c]) sum += flow[e];
                CHECK(sum == 0);
            }
        }
    }
}

TEST_CASE("rank-2 lattice is normalized against the certificate balls") {
    auto f = rank2_q5();
    PlecticGroup g({GroupFactor::schottky(f)});
    auto h = invariant_measure_lattice(g, DEPTH);
    CHECK(h.rank == 2);
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) {
            long plus = h.eval_place(0, i, f.letter_ball(static_cast<int>(j + 1)));
            long minus = h.eval_place(0, i, f.letter_ball(-static_cast<int>(j + 1)));
            CHECK(plus == (i == j ? 1 : 0));
            CHECK(minus == (i == j ? -1 : 0));
        }
}

TEST_CASE("total mass vanishes over a full partition") {
    auto h = invariant_measure_lattice(cyclic5(), DEPTH);
    auto h2 = invariant_measure_lattice(PlecticGroup({GroupFactor::schottky(rank2_q5())}), DEPTH);
    for (const auto* lat : {&h, &h2}) {
        for (size_t i = 0; i < lat->flows[0].size(); ++i) {
            long sum = 0;
            for (const auto& w : neighbors(TreeVertex::standard(), 5))
                sum += lat->eval_place(0, i, ball_of_edge({TreeVertex::standard(), w}, 5));
            CHECK(sum == 0);
        }
    }
}

TEST_CASE("additivity under ball refinement") {
    PlecticGroup g({GroupFactor::schottky(rank2_q5())});
    auto h = invariant_measure_lattice(g, DEPTH);
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> c(-3, 3), n(-1, 2);
    int tried = 0;
    for (int k = 0; k < 60 && tried < 20; ++k) {
        BoundaryBall b{c(rng), n(rng), k % 2 == 0};
        for (size_t i = 0; i < 2; ++i) {
            long parent;
            try {
                parent = h.eval_place(0, i, b);
            } catch (const BallTooDeep&) { continue; }
            long sum = 0;
            bool ok = true;
            for (const auto& kid : children(b, 5)) {
                try {
                    sum += h.eval_place(0, i, kid);
                } catch (const BallTooDeep&) { ok = false; break; }
            }
            if (!ok) continue;
            CHECK(sum == parent);
            ++tried;
        }
    }
    CHECK(tried >= 20);
}

TEST_CASE("invariance under the group action") {
    auto f = rank2_q5();
    PlecticGroup g({GroupFactor::schottky(f)});
    auto h = invariant_measure_lattice(g, DEPTH);
    std::vector<BoundaryBall> balls = {{0, 1, false}, {1, 1, false}, {-1, 1, false},
                                       {0, 0, true}, {0, 2, false}};
    for (const auto& [w, m] : enumerate_words(f, 3)) {
        if (w.length() < 1) continue;
        for (const auto& b : balls)
            for (size_t i = 0; i < 2; ++i)
                CHECK(h.eval_place(0, i, ball_action(m, b, 5)) == h.eval_place(0, i, b));
    }
}

TEST_CASE("product lattice has product rank and product values") {
    PlecticGroup g({GroupFactor::cyclic(5, PREC, PGL2Elem(5, 0, 0, 1)),
                    GroupFactor::schottky(SchottkyFactor(
                        7, PREC,
                        {PGL2Elem(343, 0, 0, 1), PGL2Elem(172, 171, 171, 172)},
                        {{{0, 1, false}, {0, 0, true}}, {{-1, 1, false}, {1, 1, false}}}))});
    auto h = invariant_measure_lattice(g, DEPTH);
    CHECK(h.rank == 2);   // 1 * 2
    auto vals = measure_of_ball(h, {{0, 1, false}, {0, 1, false}});
    REQUIRE(vals.size() == 2);
    CHECK(vals[0] == 1);   // mu_cyc (x) mu_1
    CHECK(vals[1] == 0);   // mu_cyc (x) mu_2
    auto flip = measure_of_ball(h, {{0, 0, true}, {-1, 1, false}});
    CHECK(flip[0] == 0);
    CHECK(flip[1] == -1);
}

TEST_CASE("trivial places kill the lattice") {
    PlecticGroup g({GroupFactor::cyclic(5, PREC, PGL2Elem(5, 0, 0, 1)), GroupFactor::trivial(7)});
    auto h = invariant_measure_lattice(g, DEPTH);
    CHECK(h.vanishing_support);
    CHECK(h.rank == 0);
}

TEST_CASE("orientation and duality report") {
    auto r = orientation_and_duality_report(cyclic5(), DEPTH);
    CHECK(r.dim == 1);
    CHECK(r.rank == 1);
    CHECK(r.chi[0] == std::vector<int>{-1});   // v_5(det diag(5,1)) = 1

    auto empty = orientation_and_duality_report(
        PlecticGroup({GroupFactor::trivial(5), GroupFactor::trivial(7)}), DEPTH);
    CHECK(empty.dim == 0);
    CHECK(empty.rank == 0);

    PlecticGroup prod({GroupFactor::cyclic(5, PREC, PGL2Elem(5, 0, 0, 1)),
                       GroupFactor::cyclic(7, PREC, PGL2Elem(7, 0, 0, 1))});
    CHECK(orientation_and_duality_report(prod, DEPTH).dim == 2);
}

TEST_CASE("depth stability of the lattice") {
    PlecticGroup g({GroupFactor::schottky(rank2_q5())});
    auto h1 = invariant_measure_lattice(g, DEPTH);
    auto h2 = invariant_measure_lattice(g, DEPTH + 1);
    std::vector<BoundaryBall> balls = {{0, 1, false}, {0, 2, false}, {1, 1, false},
                                       {-1, 1, false}, {0, 0, true}, {5, 2, false}};
    for (const auto& b : balls)
        for (size_t i = 0; i < 2; ++i)
            CHECK(h1.eval_place(0, i, b) == h2.eval_place(0, i, b));
}

TEST_CASE("exports") {
    PlecticGroup g({GroupFactor::schottky(rank2_q5())});
    auto h = invariant_measure_lattice(g, DEPTH);
    auto dot = quotient_dot(h.qc);
    CHECK(dot.find("graph quotient") != std::string::npos);
    CHECK(dot.find("cluster_p0") != std::string::npos);
    auto j = basis_json(h);
    CHECK(j.find("\"place\"") != std::string::npos);
    CHECK(j.find("\"value\"") != std::string::npos);
}
