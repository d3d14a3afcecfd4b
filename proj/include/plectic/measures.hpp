#pragma once

#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "plectic/groups.hpp"

namespace plectic {

/// Finite window of the smallest subtree of T_p whose ends are the limit
/// set: the union of axes of short words, truncated around the base
/// vertex. samples holds fixed points used to decide whether a direction
/// meets the limit set.
struct LimitTree {
    unsigned long p = 0;
    TreeVertex base;
    std::unordered_set<TreeVertex, TreeVertexHash> verts;
    std::unordered_set<DirectedEdge, DirectedEdgeHash> edges;
    std::vector<ProjPoint> samples;

    bool meets_limit(const BoundaryBall& b) const;
};

LimitTree limit_tree(const SchottkyFactor& f, long depth);

/// One factor of the quotient Gamma\T_L: vertex and directed-edge orbit
/// classes of the window under the generators, with a complete
/// representative per vertex class.
struct FactorQuotient {
    LimitTree tree;
    std::shared_ptr<const SchottkyFactor> factor;

    std::unordered_map<TreeVertex, int, TreeVertexHash> vclass;
    std::unordered_map<DirectedEdge, int, DirectedEdgeHash> eclass;
    int nv = 0, ne = 0;                    // class counts (ne is directed)
    std::vector<int> reverse_of;           // eclass pairing under reversal
    std::vector<DirectedEdge> edge_rep;
    std::vector<TreeVertex> vertex_rep;    // complete representative
    std::vector<std::vector<int>> out_edges;   // per vclass, incident eclasses
    std::vector<int> esource, etarget;     // vclass endpoints per eclass
    int betti = 0;

    // Class of an arbitrary limit-tree edge, found by translating into
    // the window with generator steps. Throws BallTooDeep if stuck.
    int locate(DirectedEdge e) const;
};

struct QuotientComplex {
    std::shared_ptr<const PlecticGroup> group;
    std::vector<std::optional<FactorQuotient>> factors;   // nullopt at trivial places

    size_t dim() const;   // number of non-trivial places
};

QuotientComplex quotient_complex(const PlecticGroup& g, long depth);

/// The lattice of Gamma-invariant plectic measures. Per non-trivial place
/// a basis of harmonic antisymmetric edge flows, normalized against the
/// certificate balls: flow i of a factor gives +-1 exactly on the
/// attracting/repelling ball pair of generator i. The product basis is
/// indexed by tuples, one flow per place, in lexicographic order.
struct HLattice {
    QuotientComplex qc;
    std::vector<std::vector<std::vector<long>>> flows;   // [place][basis i][eclass]
    std::vector<std::vector<size_t>> basis;              // tuples over support places
    size_t rank = 0;
    bool vanishing_support = false;   // some place is trivial: St = 0

    // Value of one factor flow on a ball at that place; 0 off the limit set.
    long eval_place(size_t place, size_t i, const BoundaryBall& b) const;
};

HLattice invariant_measure_lattice(const PlecticGroup& g, long depth);

// Values of every basis measure on a tuple of balls, one per place.
std::vector<long> measure_of_ball(const HLattice& h, const std::vector<BoundaryBall>& balls);

struct OrientationReport {
    size_t dim = 0;
    size_t rank = 0;
    std::vector<std::vector<int>> chi;   // per place, per generator
    std::string str() const;
};

OrientationReport orientation_and_duality_report(const PlecticGroup& g, long depth);

std::string quotient_dot(const QuotientComplex& qc);
std::string basis_json(const HLattice& h);

} // namespace plectic
