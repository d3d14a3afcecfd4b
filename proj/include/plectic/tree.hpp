#pragma once

#include <vector>

#include "plectic/proj.hpp"

namespace plectic {

/// Vertex of the Bruhat-Tits tree of PGL_2(Q_p): the lattice class of
/// [[p^level, center],[0,1]] in Hermite normal form, equivalently the ball
/// B(center, p^-level) of ends. center is the canonical representative
/// modulo p^level in Z[1/p].
struct TreeVertex {
    long level = 0;
    mpq_class center = 0;

    static TreeVertex standard() { return TreeVertex{}; }
    std::string str() const;
};

TreeVertex make_vertex(long level, const mpq_class& center, unsigned long p);
bool operator==(const TreeVertex& u, const TreeVertex& v);

struct TreeVertexHash {
    size_t operator()(const TreeVertex& v) const;
};

struct DirectedEdge {
    TreeVertex source, target;
    DirectedEdge reversed() const { return {target, source}; }
};

bool operator==(const DirectedEdge& e, const DirectedEdge& f);

struct DirectedEdgeHash {
    size_t operator()(const DirectedEdge& e) const;
};

/// Set of ends through a directed edge: the ball {x : v(x - center) >= n}
/// or, with the complement flag, its complement together with infinity.
struct BoundaryBall {
    mpq_class center = 0;
    long n = 0;
    bool complement = false;
    std::string str() const;
};

TreeVertex parent_vertex(const TreeVertex& v, unsigned long p);
std::vector<TreeVertex> neighbors(const TreeVertex& v, unsigned long p);
long tree_distance(const TreeVertex& u, const TreeVertex& v, unsigned long p);

// Action of PGL_2(Q) on lattice classes.
TreeVertex vertex_action(const PGL2Elem& g, const TreeVertex& v, unsigned long p);
DirectedEdge edge_action(const PGL2Elem& g, const DirectedEdge& e, unsigned long p);
bool is_in_vertex_stabilizer(const PGL2Elem& g, const TreeVertex& v, unsigned long p);

BoundaryBall ball_of_edge(const DirectedEdge& e, unsigned long p);
DirectedEdge edge_of_ball(const BoundaryBall& b, unsigned long p);
BoundaryBall ball_action(const PGL2Elem& g, const BoundaryBall& b, unsigned long p);

bool ball_contains(const BoundaryBall& b, const std::optional<mpq_class>& x, unsigned long p);
bool ball_contains(const BoundaryBall& b, const ProjPoint& x);
bool ball_subset(const BoundaryBall& b1, const BoundaryBall& b2, unsigned long p);
bool ball_disjoint(const BoundaryBall& b1, const BoundaryBall& b2, unsigned long p);
bool ball_equal(const BoundaryBall& b1, const BoundaryBall& b2, unsigned long p);

// Canonical rational representative of a p-adic value modulo p^m; throws
// PrecisionExhausted if the digits do not reach p^m.
mpq_class padic_mod_ppow(const PadicScalar& x, long m);

TreeVertex reduction_map(const QuadExtScalar& z);

// The apartment through the ends x and y, truncated to the given radius
// around its vertex closest to the standard vertex; ordered from the
// x-side to the y-side.
std::vector<TreeVertex> geodesic_between_ends(const ProjPoint& x, const ProjPoint& y, long radius);

} // namespace plectic
