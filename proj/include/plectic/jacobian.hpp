#pragma once

#include "plectic/integration.hpp"

namespace plectic {

/// Period lattice of a product group: per support place the matrix of
/// periods q_{ij} (measure basis index i, generator index j) of that
/// factor. The product lattice is generated Kunneth-style: one factor
/// period in one slot, arbitrary components elsewhere.
struct PeriodLattice {
    std::vector<size_t> support;
    std::vector<unsigned long> primes;
    std::vector<int> precs;
    std::vector<std::vector<std::vector<QuadExtScalar>>> periods;   // [place][i][j]
};

PeriodLattice period_lattice(const HLattice& h, long depth);

/// Class in the plectic Jacobian: one reduced scalar per HLattice basis
/// coordinate and support place. Valuations sit in the canonical box of
/// the period valuation lattice; representatives are unique given the
/// reduction order (column HNF, pivots top down).
struct JacobianElement {
    std::vector<std::vector<QuadExtScalar>> comps;   // [basis coord][support place]

    bool is_identity(int digits) const;
};

bool jacobian_eq(const JacobianElement& a, const JacobianElement& b, int digits);

JacobianElement reduce_mod_lattice(const std::vector<MultiplicativeTensor>& coords,
                                   const PeriodLattice& lat, const HLattice& h);
JacobianElement reduce_mod_lattice(const JacobianElement& v, const PeriodLattice& lat,
                                   const HLattice& h);

JacobianElement abel_jacobi(const HLattice& h, const PeriodLattice& lat, const PlecticCycle& d,
                            long depth);

// Multiply two classes coordinatewise and reduce.
JacobianElement jacobian_mul(const JacobianElement& a, const JacobianElement& b,
                             const PeriodLattice& lat, const HLattice& h);

/// Kunneth: classes of a product decompose into per-factor classes and
/// back. Decomposition exists only for elementary representatives.
std::vector<JacobianElement> kunneth_decompose(const JacobianElement& x, const HLattice& h,
                                               int digits);
JacobianElement kunneth_compose(const std::vector<JacobianElement>& parts, const HLattice& h);

/// Tate curve C^x/q^Z with normalized representatives 0 <= v(u) < v(q).
struct TateCurve {
    PadicScalar q;

    explicit TateCurve(PadicScalar period);

    QuadExtScalar normalize(const QuadExtScalar& u) const;
    QuadExtScalar identity() const;
    QuadExtScalar add(const QuadExtScalar& u, const QuadExtScalar& w) const;
    QuadExtScalar neg(const QuadExtScalar& u) const;
};

struct CommensurabilityResult {
    bool yes = false;
    long a = 0, b = 0;   // minimal exponents with q^a = qt^b
    bool at_precision = false;   // unit equality holds to working precision only
};

CommensurabilityResult commensurability_check(const PadicScalar& q, const PadicScalar& qt);

/// Contraction of Jacobian classes by an integer character on the
/// measure basis, followed by per-place Tate reduction.
struct ModularProjection {
    std::vector<long> lambda;
    std::vector<TateCurve> curves;   // one per support place

    std::vector<QuadExtScalar> apply(const JacobianElement& x) const;
};

ModularProjection modular_projection(const HLattice& h, std::vector<long> lambda,
                                     std::vector<PadicScalar> qtilde);

} // namespace plectic
