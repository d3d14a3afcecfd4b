#pragma once

#include <string>
#include <vector>

#include "plectic/tree.hpp"

namespace plectic {

/// Reduced word in a free group; letters are +-(i+1) for generator i.
struct FreeWord {
    std::vector<int> letters;

    static FreeWord one() { return {}; }
    size_t length() const { return letters.size(); }
    bool empty() const { return letters.empty(); }

    FreeWord appended(int letter) const;
    FreeWord prepended(int letter) const;
    FreeWord inverse() const;
    FreeWord concat(const FreeWord& w) const;
    std::string str() const;
};

bool operator==(const FreeWord& v, const FreeWord& w);

struct Certificate {
    bool ok = false;
    std::string witness;   // violated condition when not ok
};

/// Pairwise disjointness of the 2g balls plus gen_i(P1 \ ball_i^-) inside
/// ball_i^+. Success implies the generators play ping-pong, hence generate
/// a free discrete group.
Certificate good_position_check(unsigned long p, const std::vector<PGL2Elem>& gens,
                                const std::vector<std::pair<BoundaryBall, BoundaryBall>>& balls);

/// Free product factor at one place: hyperbolic generators in good position.
/// Rank 1 is the cyclic case.
class SchottkyFactor {
public:
    SchottkyFactor(unsigned long p, int prec, std::vector<PGL2Elem> gens,
                   std::vector<std::pair<BoundaryBall, BoundaryBall>> balls);

    // Rank-1 constructor deriving the balls from the fixed points.
    static SchottkyFactor cyclic(unsigned long p, int prec, const PGL2Elem& gen);

    unsigned long prime() const { return p_; }
    int precision() const { return prec_; }
    size_t rank() const { return gens_.size(); }

    const PGL2Elem& gen(size_t i) const { return gens_[i]; }
    const std::vector<PGL2Elem>& gens() const { return gens_; }

    // letter is +-(i+1); positive letters give gen i, negative its inverse.
    PGL2Elem letter_matrix(int letter) const;
    // Ball of the attracting side of a letter: +(i+1) -> ball_i^+,
    // -(i+1) -> ball_i^-.
    const BoundaryBall& letter_ball(int letter) const;

    PGL2Elem evaluate(const FreeWord& w) const;
    const FixedPoints& gen_fixed(size_t i) const { return fixed_[i]; }

private:
    unsigned long p_;
    int prec_;
    std::vector<PGL2Elem> gens_;
    std::vector<std::pair<BoundaryBall, BoundaryBall>> balls_;
    std::vector<FixedPoints> fixed_;
};

enum class FactorKind { Trivial, Cyclic, Schottky };
enum class LimitSetClass { Empty, TwoPoints, Perfect };

/// One place of a plectic group: trivial, cyclic or Schottky. Cyclic
/// factors carry a rank-1 SchottkyFactor.
struct GroupFactor {
    FactorKind kind = FactorKind::Trivial;
    unsigned long prime = 0;
    std::vector<SchottkyFactor> s;   // empty iff trivial

    static GroupFactor trivial(unsigned long p) { return {FactorKind::Trivial, p, {}}; }
    static GroupFactor cyclic(unsigned long p, int prec, const PGL2Elem& gen);
    static GroupFactor schottky(SchottkyFactor f);

    bool is_trivial() const { return kind == FactorKind::Trivial; }
    const SchottkyFactor& factor() const;
    size_t rank() const { return is_trivial() ? 0 : s[0].rank(); }
};

/// Product of one factor per place. Plecticity is guaranteed by the
/// product shape; arbitrary discrete groups are not accepted.
class PlecticGroup {
public:
    explicit PlecticGroup(std::vector<GroupFactor> factors);

    size_t places() const { return factors_.size(); }
    const GroupFactor& factor(size_t place) const { return factors_[place]; }
    unsigned long prime(size_t place) const { return factors_[place].prime; }
    std::vector<size_t> support() const;   // places with non-trivial factor

private:
    std::vector<GroupFactor> factors_;
};

struct WordElem {
    FreeWord word;
    PGL2Elem mat;
};

// All reduced words of length <= max_len with their matrices, by length.
std::vector<WordElem> enumerate_words(const SchottkyFactor& f, size_t max_len);

struct LimitApprox {
    std::vector<ProjPoint> points;       // fixed points of words, length <= depth
    std::vector<BoundaryBall> cover;     // word-image certificate balls at depth
    std::vector<FreeWord> cover_words;   // the word indexing each cover ball
};

LimitApprox limit_set_approx(const PlecticGroup& g, size_t place, size_t depth);

LimitSetClass classify_limit_set(const GroupFactor& f);

PlecticGroup conjugate_group(const PlecticGroup& g, const std::vector<PGL2Elem>& h);

// Gamma_U for U a product of full vertex stabilizers away from keep:
// the subproduct supported on keep.
PlecticGroup partial_intersection(const PlecticGroup& g, const std::vector<size_t>& keep);

/// Finite-index subgroup of one Schottky factor, given by the coset action
/// of the generators; generators come from the Reidemeister-Schreier
/// rewriting along a spanning tree of the coset graph.
struct FiniteIndexSubgroup {
    const SchottkyFactor* parent;
    size_t index;
    std::vector<std::vector<size_t>> action;   // per generator, coset permutation
    std::vector<FreeWord> coset_reps;          // rep of coset 0 is the empty word
    std::vector<FreeWord> sub_gens;            // as words in the parent
    std::vector<PGL2Elem> sub_mats;

    // Schreier rewriting of a subgroup element given as a parent word;
    // throws NotASubgroup if the word leaves coset 0.
    FreeWord rewrite(const FreeWord& w) const;
};

FiniteIndexSubgroup schreier_subgroup(const SchottkyFactor& f,
                                      const std::vector<std::vector<size_t>>& action);

// Unique reduced word of length <= max_len with evaluate(word) = g, by
// nested-ball descent from a base point outside all certificate balls.
std::optional<FreeWord> membership_word(const SchottkyFactor& f, const PGL2Elem& g,
                                        size_t max_len);

} // namespace plectic
