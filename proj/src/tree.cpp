#include "plectic/tree.hpp"

#include <algorithm>
#include <functional>

namespace plectic {

std::string TreeVertex::str() const {
    return std::to_string(level) + ":" + center.get_str();
}

std::string BoundaryBall::str() const {
    return std::string(complement ? "P1 - " : "") + "B(" + center.get_str() +
           ", p^" + std::to_string(-n) + ")";
}

TreeVertex make_vertex(long level, const mpq_class& center, unsigned long p) {
    return TreeVertex{level, mod_ppow(center, level, p)};
}

bool operator==(const TreeVertex& u, const TreeVertex& v) {
    return u.level == v.level && u.center == v.center;
}

size_t TreeVertexHash::operator()(const TreeVertex& v) const {
    return std::hash<std::string>{}(v.str());
}

bool operator==(const DirectedEdge& e, const DirectedEdge& f) {
    return e.source == f.source && e.target == f.target;
}

size_t DirectedEdgeHash::operator()(const DirectedEdge& e) const {
    return TreeVertexHash{}(e.source) * 1000003u ^ TreeVertexHash{}(e.target);
}

TreeVertex parent_vertex(const TreeVertex& v, unsigned long p) {
    return make_vertex(v.level - 1, v.center, p);
}

std::vector<TreeVertex> neighbors(const TreeVertex& v, unsigned long p) {
    std::vector<TreeVertex> out;
    mpz_class step = ppow(p, 0);
    for (unsigned long k = 0; k < p; ++k) {
        mpq_class c = v.center + mpq_class(static_cast<long>(k)) *
            (v.level >= 0 ? mpq_class(ppow(p, static_cast<unsigned long>(v.level)))
                          : mpq_class(1, ppow(p, static_cast<unsigned long>(-v.level))));
        out.push_back(make_vertex(v.level + 1, c, p));
    }
    out.push_back(parent_vertex(v, p));
    return out;
}

long tree_distance(const TreeVertex& u, const TreeVertex& v, unsigned long p) {
    long meet = std::min({u.level, v.level, valp(mpq_class(u.center - v.center), p)});
    return (u.level - meet) + (v.level - meet);
}

TreeVertex vertex_action(const PGL2Elem& g, const TreeVertex& v, unsigned long p) {
    mpq_class pa = v.level >= 0 ? mpq_class(ppow(p, static_cast<unsigned long>(v.level)))
                                : mpq_class(1, ppow(p, static_cast<unsigned long>(-v.level)));
    // Columns of g * [[p^a, b],[0,1]].
    mpq_class u1 = g.a() * pa, u2 = g.c() * pa;
    mpq_class w1 = g.a() * v.center + g.b(), w2 = g.c() * v.center + g.d();
    if (u2 == 0 || (w2 != 0 && valp(w2, p) < valp(u2, p))) {
        std::swap(u1, w1);
        std::swap(u2, w2);
    }
    // u2 != 0 of minimal valuation; clear w2 by a Z_p-column operation.
    if (w2 != 0) {
        w1 -= (w2 / u2) * u1;
        w2 = 0;
    }
    mpq_class t = u1 / u2, s = w1 / u2;
    long A = valp(s, p);
    return make_vertex(A, t, p);
}

DirectedEdge edge_action(const PGL2Elem& g, const DirectedEdge& e, unsigned long p) {
    return {vertex_action(g, e.source, p), vertex_action(g, e.target, p)};
}

bool is_in_vertex_stabilizer(const PGL2Elem& g, const TreeVertex& v, unsigned long p) {
    return vertex_action(g, v, p) == v;
}

BoundaryBall ball_of_edge(const DirectedEdge& e, unsigned long p) {
    if (e.target.level == e.source.level + 1 &&
        valp(mpq_class(e.source.center - e.target.center), p) >= e.source.level)
        return BoundaryBall{e.target.center, e.target.level, false};
    if (e.target.level == e.source.level - 1 &&
        valp(mpq_class(e.source.center - e.target.center), p) >= e.target.level)
        return BoundaryBall{e.source.center, e.source.level, true};
    throw Error("ball_of_edge: vertices are not adjacent");
}

DirectedEdge edge_of_ball(const BoundaryBall& b, unsigned long p) {
    TreeVertex inner = make_vertex(b.n, b.center, p);
    TreeVertex outer = parent_vertex(inner, p);
    if (b.complement) return {inner, outer};
    return {outer, inner};
}

BoundaryBall ball_action(const PGL2Elem& g, const BoundaryBall& b, unsigned long p) {
    return ball_of_edge(edge_action(g, edge_of_ball(b, p), p), p);
}

bool ball_contains(const BoundaryBall& b, const std::optional<mpq_class>& x, unsigned long p) {
    if (!x) return b.complement;
    long v = valp(mpq_class(*x - b.center), p);
    return b.complement ? v < b.n : v >= b.n;
}

bool ball_contains(const BoundaryBall& b, const ProjPoint& x) {
    if (x.infinite) return b.complement;
    unsigned long p = x.prime();
    int prec = x.z.precision();
    PadicScalar c = PadicScalar::from_rational(b.center, p, prec);
    long big = 2 * (static_cast<long>(prec) + 1);   // indistinguishable from zero
    long tva;
    try {
        PadicScalar d = add(x.z.re(), c.neg());
        tva = d.is_zero() ? big : 2 * d.valuation();
    } catch (const CancellationError&) {
        tva = big;
    }
    long tvb = x.z.im().is_zero() ? big
                                  : 2 * x.z.im().valuation() + (x.z.is_ramified() ? 1 : 0);
    long twice_v = std::min(tva, tvb);
    return b.complement ? twice_v < 2 * b.n : twice_v >= 2 * b.n;
}

bool ball_disjoint(const BoundaryBall& b1, const BoundaryBall& b2, unsigned long p) {
    if (!b1.complement && !b2.complement) {
        long m = valp(mpq_class(b1.center - b2.center), p);
        return m < std::min(b1.n, b2.n);
    }
    if (b1.complement && b2.complement) return false;   // both contain infinity
    const BoundaryBall& plain = b1.complement ? b2 : b1;
    const BoundaryBall& comp = b1.complement ? b1 : b2;
    // plain ball misses the complement iff it sits inside the removed ball.
    long m = valp(mpq_class(plain.center - comp.center), p);
    return plain.n >= comp.n && m >= comp.n;
}

bool ball_subset(const BoundaryBall& b1, const BoundaryBall& b2, unsigned long p) {
    long m = valp(mpq_class(b1.center - b2.center), p);
    if (!b1.complement && !b2.complement) return b1.n >= b2.n && m >= b2.n;
    if (!b1.complement && b2.complement)
        return ball_disjoint(b1, BoundaryBall{b2.center, b2.n, false}, p);
    if (b1.complement && b2.complement)
        return ball_subset(BoundaryBall{b2.center, b2.n, false},
                           BoundaryBall{b1.center, b1.n, false}, p);
    return false;   // complement inside a plain ball: impossible (infinity)
}

bool ball_equal(const BoundaryBall& b1, const BoundaryBall& b2, unsigned long p) {
    return b1.complement == b2.complement && b1.n == b2.n &&
           valp(mpq_class(b1.center - b2.center), p) >= b1.n;
}

mpq_class padic_mod_ppow(const PadicScalar& x, long m) {
    if (x.is_zero()) return mpq_class(0);
    long v = x.valuation();
    if (v >= m) return mpq_class(0);
    if (m - v > x.precision())
        throw PrecisionExhausted("padic_mod_ppow: not enough digits");
    unsigned long p = x.prime();
    mpz_class u = x.unit() % ppow(p, static_cast<unsigned long>(m - v));
    mpq_class c = v >= 0 ? mpq_class(u * ppow(p, static_cast<unsigned long>(v)))
                         : mpq_class(u, ppow(p, static_cast<unsigned long>(-v)));
    c.canonicalize();
    return mod_ppow(c, m, p);
}

TreeVertex reduction_map(const QuadExtScalar& z) {
    if (z.is_base()) throw RationalPoint();
    if (z.is_ramified()) throw RamifiedMidpoint();
    long level = z.im().valuation();
    unsigned long p = z.prime();
    return make_vertex(level, z.re().is_zero() ? mpq_class(0) : padic_mod_ppow(z.re(), level), p);
}

std::vector<TreeVertex> geodesic_between_ends(const ProjPoint& x, const ProjPoint& y, long radius) {
    if (x.infinite && y.infinite) throw Error("geodesic: ends coincide at infinity");
    unsigned long p = x.infinite ? y.prime() : x.prime();
    long window = 2 * radius + 4;

    std::vector<TreeVertex> path;
    if (x.infinite || y.infinite) {
        const ProjPoint& fin = x.infinite ? y : x;
        const PadicScalar& val = fin.z.re();
        long lo = -window, hi = window;
        for (long n = hi; n >= lo; --n)
            path.push_back(make_vertex(n, n <= (val.is_zero() ? lo - 1 : val.valuation())
                                              ? mpq_class(0) : padic_mod_ppow(val, n), p));
        if (x.infinite) std::reverse(path.begin(), path.end());
        // path now runs from the x-side to the y-side
    } else {
        PadicScalar diff = add(x.z.re(), y.z.re().neg());
        if (diff.is_zero()) throw Error("geodesic: ends coincide");
        long m = diff.valuation();
        window = std::max(window, std::max(0L, -m) + radius + 2);
        for (long n = m + window; n > m; --n)
            path.push_back(make_vertex(n, padic_mod_ppow(x.z.re(), n), p));
        path.push_back(make_vertex(m, x.z.re().is_zero() ? mpq_class(0) : padic_mod_ppow(x.z.re(), m), p));
        for (long n = m + 1; n <= m + window; ++n)
            path.push_back(make_vertex(n, padic_mod_ppow(y.z.re(), n), p));
    }

    size_t best = 0;
    long best_d = tree_distance(path[0], TreeVertex::standard(), p);
    for (size_t i = 1; i < path.size(); ++i) {
        long d = tree_distance(path[i], TreeVertex::standard(), p);
        if (d < best_d) { best_d = d; best = i; }
    }
    size_t lo = best >= static_cast<size_t>(radius) ? best - radius : 0;
    size_t hi = std::min(path.size(), best + static_cast<size_t>(radius) + 1);
    return std::vector<TreeVertex>(path.begin() + lo, path.begin() + hi);
}

} // namespace plectic
