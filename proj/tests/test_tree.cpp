#include "doctest.h"

#include <queue>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "plectic/tree.hpp"

using namespace plectic;

namespace {

const int PREC = 32;

std::unordered_set<TreeVertex, TreeVertexHash> bfs_ball(const TreeVertex& root, long radius,
                                                        unsigned long p) {
    std::unordered_set<TreeVertex, TreeVertexHash> seen{root};
    std::queue<std::pair<TreeVertex, long>> q;
    q.push({root, 0});
    while (!q.empty()) {
        auto [v, d] = q.front();
        q.pop();
        if (d == radius) continue;
        for (const auto& w : neighbors(v, p))
            if (seen.insert(w).second) q.push({w, d + 1});
    }
    return seen;
}

PGL2Elem rnd_elem(std::mt19937& rng) {
    std::uniform_int_distribution<long> d(-9, 9);
    for (;;) {
        mpq_class a(d(rng)), b(d(rng)), c(d(rng)), e(d(rng));
        if (a * e - b * c != 0) return PGL2Elem(a, b, c, e);
    }
}

} // namespace

TEST_CASE("valence and BFS growth") {
    CHECK(neighbors(TreeVertex::standard(), 5).size() == 6);
    CHECK(bfs_ball(TreeVertex::standard(), 2, 2).size() == 10);   // 1 + 3 + 3*2

    // symmetry of adjacency
    std::mt19937 rng(5);
    for (const auto& v : bfs_ball(TreeVertex::standard(), 2, 5)) {
        for (const auto& w : neighbors(v, 5)) {
            auto back = neighbors(w, 5);
            CHECK(std::count(back.begin(), back.end(), v) == 1);
        }
    }
}

TEST_CASE("closed-form distance matches BFS") {
    unsigned long p = 3;
    auto ball = bfs_ball(TreeVertex::standard(), 6, p);
    std::vector<TreeVertex> verts(ball.begin(), ball.end());
    std::mt19937 rng(17);
    std::uniform_int_distribution<size_t> pick(0, verts.size() - 1);
    for (int i = 0; i < 50; ++i) {
        auto u = verts[pick(rng)], v = verts[pick(rng)];
        // BFS distance from u
        std::unordered_map<TreeVertex, long, TreeVertexHash> dist{{u, 0}};
        std::queue<TreeVertex> q;
        q.push(u);
        long found = -1;
        while (!q.empty()) {
            auto w = q.front();
            q.pop();
            if (w == v) { found = dist[w]; break; }
            // the geodesic between two ball members stays in the ball
            for (const auto& x : neighbors(w, p))
                if (ball.count(x) && !dist.count(x)) { dist[x] = dist[w] + 1; q.push(x); }
        }
        CHECK(found == tree_distance(u, v, p));
    }
    CHECK(tree_distance(TreeVertex::standard(), TreeVertex::standard(), p) == 0);
    CHECK(tree_distance(TreeVertex::standard(), make_vertex(1, 0, p), p) == 1);
}

TEST_CASE("vertex action is by tree automorphisms and respects composition") {
    unsigned long p = 5;
    std::mt19937 rng(23);
    auto ball = bfs_ball(TreeVertex::standard(), 3, p);
    for (int i = 0; i < 20; ++i) {
        auto g = rnd_elem(rng), h = rnd_elem(rng);
        for (const auto& v : ball) {
            auto gv = vertex_action(g, v, p);
            CHECK(vertex_action(g * h, v, p) == vertex_action(g, vertex_action(h, v, p), p));
            for (const auto& w : neighbors(v, p)) {
                CHECK(tree_distance(gv, vertex_action(g, w, p), p) == 1);
            }
        }
    }
}

TEST_CASE("vertex stabilizer membership") {
    unsigned long p = 5;
    CHECK(is_in_vertex_stabilizer(PGL2Elem::identity(), TreeVertex::standard(), p));
    CHECK(is_in_vertex_stabilizer(PGL2Elem::identity(), make_vertex(2, 3, p), p));
    CHECK(!is_in_vertex_stabilizer(PGL2Elem(5, 0, 0, 1), TreeVertex::standard(), p));
    CHECK(is_in_vertex_stabilizer(PGL2Elem(2, 1, 1, 1), TreeVertex::standard(), p));
}

TEST_CASE("edge balls partition and refine") {
    unsigned long p = 5;
    auto v0 = TreeVertex::standard();
    auto e = DirectedEdge{v0, make_vertex(1, 0, p)};
    auto b = ball_of_edge(e, p);
    CHECK(!b.complement);
    CHECK(b.n == 1);
    CHECK(valp(b.center, p) >= 1);

    // reverse edge carries the complement ball
    auto br = ball_of_edge(e.reversed(), p);
    CHECK(br.complement);

    // the p+1 balls at the standard vertex partition P1(Q5), sampled
    std::vector<BoundaryBall> balls;
    for (const auto& w : neighbors(v0, p)) balls.push_back(ball_of_edge({v0, w}, p));
    std::mt19937 rng(31);
    std::uniform_int_distribution<long> num(-400, 400), den(1, 60);
    for (int i = 0; i < 200; ++i) {
        std::optional<mpq_class> x;
        if (i == 0) x = std::nullopt;   // infinity
        else x = mpq_class(num(rng), den(rng));
        int hits = 0;
        for (const auto& bb : balls) hits += ball_contains(bb, x, p) ? 1 : 0;
        CHECK(hits == 1);
    }

    // refinement: children balls partition the parent ball
    for (const auto& w : neighbors(v0, p)) {
        if (w.level != 1) continue;
        auto parent_ball = ball_of_edge({v0, w}, p);
        std::vector<BoundaryBall> kids;
        for (const auto& u : neighbors(w, p))
            if (!(u == v0)) kids.push_back(ball_of_edge({w, u}, p));
        CHECK(kids.size() == p);
        for (const auto& k : kids) CHECK(ball_subset(k, parent_ball, p));
        for (size_t a = 0; a < kids.size(); ++a)
            for (size_t b2 = a + 1; b2 < kids.size(); ++b2)
                CHECK(ball_disjoint(kids[a], kids[b2], p));
    }
}

TEST_CASE("reduction map") {
    unsigned long p = 5;
    auto w = QuadExtScalar::unramified(PadicScalar::zero(p, PREC),
                                       PadicScalar::from_integer(1, p, PREC));
    CHECK(reduction_map(w) == TreeVertex::standard());

    auto one_plus_w = QuadExtScalar::unramified(PadicScalar::from_integer(1, p, PREC),
                                                PadicScalar::from_integer(1, p, PREC));
    CHECK(reduction_map(one_plus_w) == TreeVertex::standard());

    auto five_w = QuadExtScalar::unramified(PadicScalar::zero(p, PREC),
                                            PadicScalar::from_integer(5, p, PREC));
    CHECK(reduction_map(five_w) == make_vertex(1, 0, p));

    CHECK_THROWS_AS(reduction_map(QuadExtScalar::from_base(PadicScalar::from_integer(3, p, PREC))),
                    RationalPoint);
    auto ram = QuadExtScalar(PadicScalar::from_integer(1, p, PREC),
                             PadicScalar::from_integer(1, p, PREC), 5, true);
    CHECK_THROWS_AS(reduction_map(ram), RamifiedMidpoint);
}

TEST_CASE("reduction map equivariance on random samples") {
    unsigned long p = 5;
    std::mt19937 rng(41);
    std::uniform_int_distribution<long> d(-60, 60), den(1, 30), vv(-2, 2);
    for (int i = 0; i < 50; ++i) {
        auto g = rnd_elem(rng);
        mpq_class a(d(rng), den(rng)), b(d(rng), den(rng));
        a.canonicalize(); b.canonicalize();
        if (b == 0) b = 1;
        long v = vv(rng);
        mpq_class pw = v >= 0 ? mpq_class(ppow(p, static_cast<unsigned long>(v)))
                              : mpq_class(1, ppow(p, static_cast<unsigned long>(-v)));
        auto z = QuadExtScalar::unramified(PadicScalar::from_rational(a, p, PREC),
                                           PadicScalar::from_rational(b * pw, p, PREC));
        auto gz = moebius_apply(g, ProjPoint::from_quadext(z));
        REQUIRE(!gz.infinite);
        CHECK(reduction_map(gz.z) == vertex_action(g, reduction_map(z), p));
    }
}

TEST_CASE("geodesics between ends") {
    unsigned long p = 5;
    auto zero = ProjPoint::from_rational(0, p, PREC);
    auto inf = ProjPoint::infinity(p, PREC);
    auto path = geodesic_between_ends(zero, inf, 3);
    REQUIRE(path.size() == 7);
    for (long k = 0; k < 7; ++k) {
        CHECK(path[k].level == 3 - k);
        CHECK(path[k].center == 0);
    }

    // reversal
    auto x = ProjPoint::from_rational(2, p, PREC);
    auto y = ProjPoint::from_rational(3, p, PREC);
    auto fwd = geodesic_between_ends(x, y, 4);
    auto bwd = geodesic_between_ends(y, x, 4);
    std::reverse(bwd.begin(), bwd.end());
    REQUIRE(fwd.size() == bwd.size());
    for (size_t i = 0; i < fwd.size(); ++i) CHECK(fwd[i] == bwd[i]);

    // consecutive vertices are adjacent
    for (size_t i = 0; i + 1 < fwd.size(); ++i)
        CHECK(tree_distance(fwd[i], fwd[i + 1], p) == 1);

    // equivariance
    std::mt19937 rng(53);
    for (int i = 0; i < 10; ++i) {
        auto g = rnd_elem(rng);
        auto gx = moebius_apply(g, x), gy = moebius_apply(g, y);
        auto transported = geodesic_between_ends(gx, gy, 2);
        // every transported vertex lies on the g-image of a wide window
        auto wide = geodesic_between_ends(x, y, 12);
        std::unordered_set<TreeVertex, TreeVertexHash> image;
        for (const auto& v : wide) image.insert(vertex_action(g, v, p));
        for (const auto& v : transported) CHECK(image.count(v) == 1);
    }

    // nested balls along the geodesic shrink toward the target end
    auto long_path = geodesic_between_ends(x, y, 6);
    for (size_t i = 0; i + 2 < long_path.size(); ++i) {
        auto b1 = ball_of_edge({long_path[i], long_path[i + 1]}, p);
        auto b2 = ball_of_edge({long_path[i + 1], long_path[i + 2]}, p);
        CHECK(ball_subset(b2, b1, p));
        CHECK(ball_contains(b2, y));
    }
}
