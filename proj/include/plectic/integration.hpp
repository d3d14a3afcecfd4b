#pragma once

#include "plectic/measures.hpp"

namespace plectic {

/// Degree-(0,...,0) plectic 0-cycle: Z-linear combination of elementary
/// terms [x] - [y], one point pair per place of the group.
struct CyclePair {
    ProjPoint x, y;
};

struct CycleTerm {
    long coeff = 1;
    std::vector<CyclePair> places;
};

struct PlecticCycle {
    std::vector<CycleTerm> terms;
};

PlecticCycle translate_cycle(const PlecticCycle& d, const std::vector<PGL2Elem>& g);
PlecticCycle frobenius_cycle(const PlecticCycle& d);

/// Formal product of elementary tensors in the completed tensor product
/// of C^x factors, one component per support place. Exponents are folded
/// into the components; an empty factor list is the identity.
class MultiplicativeTensor {
public:
    MultiplicativeTensor(std::vector<unsigned long> primes, std::vector<int> precs);

    size_t places() const { return primes_.size(); }
    void push(std::vector<QuadExtScalar> comps);

    // Merge factors agreeing in all but one component until the product
    // is a single elementary tensor; throws NonElementary if stuck.
    void reduce();
    bool is_identity() const { return factors_.empty(); }
    std::vector<QuadExtScalar> elementary() const;   // reduces first

    const std::vector<std::vector<QuadExtScalar>>& factors() const { return factors_; }

private:
    std::vector<unsigned long> primes_;
    std::vector<int> precs_;
    std::vector<std::vector<QuadExtScalar>> factors_;
};

int tensor_agreement(const MultiplicativeTensor& a, const MultiplicativeTensor& b);
MultiplicativeTensor frobenius_tensor(const MultiplicativeTensor& t);
std::string serialize_tensor(const MultiplicativeTensor& t);

struct IntegralResult {
    std::vector<MultiplicativeTensor> coords;   // one per HLattice basis tuple
    long depth = 0;
    int stable_digits = 0;   // agreement across the last consecutive depths
    bool stabilized = false;
};

// (t_p - x_p)/(t_p - y_p) per place with the cross_ratio_factor
// conventions at infinity.
std::vector<QuadExtScalar> phi_eval(const CycleTerm& term, const std::vector<ProjPoint>& t);

// Riemann products over the depth-L ball covers, one coordinate per basis
// measure; the cycle points must avoid the cover. want_digits = 0 skips
// the stabilization gate, otherwise NonStabilized is thrown below it.
IntegralResult integrate_riemann(const HLattice& h, const PlecticCycle& d, long depth,
                                 int want_digits);

struct SeriesResult {
    QuadExtScalar value;
    int increment_digits = 0;   // agreement between the last two partial products
};

// Independent algorithm for one factor coordinate: the classical
// cross-ratio product over coset representatives of <gen_i>.
SeriesResult integrate_series(const SchottkyFactor& f, size_t i, const ProjPoint& x,
                              const ProjPoint& y, size_t word_len);

// Multiplicative period q_{ij}: integral of [gen_j t0] - [t0] against
// basis measure i of the given place.
QuadExtScalar period(const HLattice& h, size_t place, size_t j, size_t i, long depth,
                     const std::optional<ProjPoint>& base = std::nullopt);

// All periods q_{ij} of one place over a shared cover; [i][j] layout.
std::vector<std::vector<QuadExtScalar>> period_matrix(const HLattice& h, size_t place,
                                                      long depth);

struct FubiniReport {
    bool ok = false;
    int agree_digits = 0;
    std::vector<MultiplicativeTensor> joint;      // per basis coordinate
    std::vector<MultiplicativeTensor> factored;   // tensor of per-place integrals
};

// Factorization of the product-measure integral for an elementary cycle
// over a group supported at two or more places.
FubiniReport fubini_check(const HLattice& h, const PlecticCycle& d, long depth, int digits);

} // namespace plectic
