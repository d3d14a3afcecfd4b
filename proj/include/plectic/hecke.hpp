#pragma once

#include "plectic/jacobian.hpp"

namespace plectic {

/// Morphism [x] -> [gx] between Mumford data, with g Gamma g^-1 of finite
/// index in the target. Carries the verified inclusion data: each
/// conjugated source generator as a target word, and right coset
/// representatives u_a of H = g Gamma g^-1 in the target, per support
/// place.
struct MumfordMorphism {
    std::shared_ptr<const PlecticGroup> source, target;
    std::vector<PGL2Elem> g;                         // one per place
    std::vector<size_t> support;                     // common support places
    size_t index = 1;                                // product over places
    std::vector<size_t> place_index;                 // per support place
    std::vector<std::vector<FreeWord>> conj_words;   // [support][source gen]
    std::vector<std::vector<FreeWord>> coset_reps;   // [support][a]; H u_a
    // Right action of the target generators on the cosets H u_a.
    std::vector<std::vector<std::vector<size_t>>> action;   // [support][gen][a]
};

// Verifies g Gamma g^-1 <= Gamma' place by place and enumerates the
// cosets; both sides are bounded by word_bound. Throws NotASubgroup with
// the offending element, or BoundExhausted.
MumfordMorphism validate_morphism(const std::vector<PGL2Elem>& g, const PlecticGroup& src,
                                  const PlecticGroup& tgt, size_t word_bound);

// Term points map by g; pullback sums over the fibre g^-1 u_a x, one
// choice per place. Both preserve degree (0,...,0).
PlecticCycle pushforward_cycles(const MumfordMorphism& f, const PlecticCycle& d);
PlecticCycle pullback_cycles(const MumfordMorphism& f, const PlecticCycle& dp);

/// Integer matrices on the measure lattices in the flow bases: push is
/// the transfer f_* (source basis expressed over the target), pull the
/// restriction f^*. pull * push = index, exactly.
struct LatticeMaps {
    std::vector<std::vector<long>> push;   // [target coord][source coord]
    std::vector<std::vector<long>> pull;   // [source coord][target coord]
};

LatticeMaps lattice_maps(const MumfordMorphism& f, const HLattice& hs, const HLattice& ht);

// Induced maps on Jacobian classes. By adjunction against measures the
// coordinate action of f_* is the transpose of pull, and of f^* the
// transpose of push; results are reduced mod the receiving lattice.
JacobianElement pushforward_jacobian(const LatticeMaps& m, const JacobianElement& x,
                                     const PeriodLattice& lt, const HLattice& ht);
JacobianElement pullback_jacobian(const LatticeMaps& m, const JacobianElement& x,
                                  const PeriodLattice& ls, const HLattice& hs);

struct FunctorialityReport {
    bool ok = false;
    int push_digits = 0;   // worst agreement over the pushforward squares
    int pull_digits = 0;   // worst agreement over the pullback squares
};

// Both squares AJ o f_* = f_* o AJ and AJ o f^* = f^* o AJ on the given
// sample cycles (source samples for the first, target samples for the
// second), to the requested digits.
FunctorialityReport functoriality_check(const MumfordMorphism& f, const HLattice& hs,
                                        const PeriodLattice& ls, const HLattice& ht,
                                        const PeriodLattice& lt,
                                        const std::vector<PlecticCycle>& src_samples,
                                        const std::vector<PlecticCycle>& tgt_samples,
                                        long depth, int digits);

/// Correspondence on the variety of a parent group: middle data with the
/// two projections p (surjective) and q.
struct HeckeCorrespondence {
    MumfordMorphism p, q;
};

/// One component of a composed correspondence: the double coset
/// Gamma_2 rep Gamma_1 together with the intersection group
/// Gamma_1 n rep^-1 Gamma_2 rep as a subgroup of the parent factor.
struct CorrespondenceComponent {
    FreeWord rep;                  // parent word representing the double coset
    size_t size = 0;               // orbit size = [Gamma_1 : intersection]
    FiniteIndexSubgroup inter;
};

// Double coset decomposition Gamma_2 \ Gamma / Gamma_1 for two finite
// index subgroups of a single-place parent factor, by the exact orbit
// computation on the Gamma_2 coset space. word_bound caps the pair-coset
// enumeration for the intersection groups.
std::vector<CorrespondenceComponent> compose_correspondences(const SchottkyFactor& parent,
                                                             const FiniteIndexSubgroup& g2,
                                                             const FiniteIndexSubgroup& g1,
                                                             size_t word_bound);

} // namespace plectic
