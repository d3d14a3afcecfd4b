#include "plectic/hecke.hpp"

#include <algorithm>
#include <queue>

#include "plectic/errors.hpp"

namespace plectic {

namespace {

const SchottkyFactor& place_factor(const PlecticGroup& g, size_t pl) {
    return g.factor(pl).factor();
}

// Power of one tensor slot; (u (x) v)^n carries the exponent on a single
// component, so this is the whole action on an elementary tensor.
QuadExtScalar slot_pow(const QuadExtScalar& u, long n) { return u.pow(n); }

size_t act_letter(const std::vector<std::vector<size_t>>& action, int letter, size_t c) {
    if (letter > 0) return action[static_cast<size_t>(letter) - 1][c];
    const auto& perm = action[static_cast<size_t>(-letter) - 1];
    for (size_t b = 0; b < perm.size(); ++b)
        if (perm[b] == c) return b;
    throw ConfigError("coset action is not a permutation");
}

size_t act_word(const std::vector<std::vector<size_t>>& action, const FreeWord& w, size_t c) {
    for (int l : w.letters) c = act_letter(action, l, c);
    return c;
}

JacobianElement map_jacobian(const std::vector<std::vector<long>>& mat, bool transpose,
                             const JacobianElement& x, const PeriodLattice& lat,
                             const HLattice& h) {
    size_t rows = transpose ? (mat.empty() ? 0 : mat[0].size()) : mat.size();
    size_t cols = transpose ? mat.size() : (mat.empty() ? 0 : mat[0].size());
    if (x.comps.size() != cols) throw RankMismatch("jacobian map: coordinate count");
    std::vector<MultiplicativeTensor> out;
    out.reserve(rows);
    for (size_t r = 0; r < rows; ++r) {
        MultiplicativeTensor t(lat.primes, lat.precs);
        for (size_t c = 0; c < cols; ++c) {
            long e = transpose ? mat[c][r] : mat[r][c];
            if (e == 0) continue;
            auto comps = x.comps[c];
            comps[0] = slot_pow(comps[0], e);
            t.push(std::move(comps));
        }
        t.reduce();
        out.push_back(std::move(t));
    }
    return reduce_mod_lattice(out, lat, h);
}

int jacobian_agreement(const JacobianElement& a, const JacobianElement& b) {
    if (a.comps.size() != b.comps.size()) return 0;
    int worst = 1000;
    for (size_t i = 0; i < a.comps.size(); ++i) {
        if (a.comps[i].size() != b.comps[i].size()) return 0;
        for (size_t s = 0; s < a.comps[i].size(); ++s)
            worst = std::min(worst, agreement_digits(a.comps[i][s], b.comps[i][s]));
    }
    return std::max(worst, 0);
}

} // namespace

MumfordMorphism validate_morphism(const std::vector<PGL2Elem>& g, const PlecticGroup& src,
                                  const PlecticGroup& tgt, size_t word_bound) {
    if (src.places() != tgt.places() || g.size() != src.places())
        throw RankMismatch("morphism: place counts differ");
    MumfordMorphism f;
    f.source = std::make_shared<PlecticGroup>(src);
    f.target = std::make_shared<PlecticGroup>(tgt);
    f.g = g;
    for (size_t pl = 0; pl < src.places(); ++pl) {
        if (src.prime(pl) != tgt.prime(pl)) throw PrimeMismatch("morphism places");
        bool st = src.factor(pl).is_trivial(), tt = tgt.factor(pl).is_trivial();
        if (st != tt)
            throw UnsupportedGroupShape("morphism between different supports");
        if (st) continue;
        f.support.push_back(pl);
        const SchottkyFactor& S = place_factor(src, pl);
        const SchottkyFactor& T = place_factor(tgt, pl);
        const PGL2Elem gi = g[pl].inverse();

        std::vector<FreeWord> conj;
        for (size_t i = 0; i < S.rank(); ++i) {
            PGL2Elem m = g[pl] * S.gen(i) * gi;
            auto w = membership_word(T, m, word_bound);
            if (!w)
                throw NotASubgroup("conjugated generator " + std::to_string(i) +
                                   " is outside the target: " + m.str());
            conj.push_back(*w);
        }

        // Coset closure for H = g Gamma g^-1 by BFS; a target element lies
        // in H iff its g-conjugate descends in the source factor.
        auto in_h = [&](const PGL2Elem& m) {
            return membership_word(S, gi * m * g[pl], word_bound).has_value();
        };
        std::vector<FreeWord> reps{FreeWord::one()};
        std::vector<PGL2Elem> rep_mats{PGL2Elem::identity()};
        std::queue<size_t> bfs;
        bfs.push(0);
        while (!bfs.empty()) {
            size_t a = bfs.front();
            bfs.pop();
            for (size_t j = 1; j <= T.rank(); ++j)
                for (int sign : {1, -1}) {
                    int l = sign * static_cast<int>(j);
                    PGL2Elem m = rep_mats[a] * T.letter_matrix(l);
                    bool found = false;
                    for (size_t b = 0; b < reps.size() && !found; ++b)
                        found = in_h(m * rep_mats[b].inverse());
                    if (!found) {
                        if (reps.size() >= word_bound)
                            throw BoundExhausted("coset enumeration passed the bound");
                        reps.push_back(reps[a].appended(l));
                        rep_mats.push_back(m);
                        bfs.push(reps.size() - 1);
                    }
                }
        }
        std::vector<std::vector<size_t>> act(T.rank(), std::vector<size_t>(reps.size()));
        for (size_t j = 0; j < T.rank(); ++j)
            for (size_t a = 0; a < reps.size(); ++a) {
                PGL2Elem m = rep_mats[a] * T.gen(j);
                size_t to = reps.size();
                for (size_t b = 0; b < reps.size(); ++b)
                    if (in_h(m * rep_mats[b].inverse())) { to = b; break; }
                if (to == reps.size()) throw BoundExhausted("coset action left the table");
                act[j][a] = to;
            }

        f.place_index.push_back(reps.size());
        f.index *= reps.size();
        f.conj_words.push_back(std::move(conj));
        f.coset_reps.push_back(std::move(reps));
        f.action.push_back(std::move(act));
    }
    return f;
}

PlecticCycle pushforward_cycles(const MumfordMorphism& f, const PlecticCycle& d) {
    PlecticCycle out;
    for (const auto& term : d.terms) {
        if (term.places.size() != f.g.size()) throw RankMismatch("cycle place count");
        CycleTerm t;
        t.coeff = term.coeff;
        for (size_t pl = 0; pl < term.places.size(); ++pl)
            t.places.push_back({moebius_apply(f.g[pl], term.places[pl].x),
                                moebius_apply(f.g[pl], term.places[pl].y)});
        out.terms.push_back(std::move(t));
    }
    return out;
}

PlecticCycle pullback_cycles(const MumfordMorphism& f, const PlecticCycle& dp) {
    PlecticCycle out;
    for (const auto& term : dp.terms) {
        if (term.places.size() != f.g.size()) throw RankMismatch("cycle place count");
        // Fibre representatives g^-1 u_a per place, expanded multilinearly.
        std::vector<std::vector<PGL2Elem>> fibre(term.places.size());
        size_t s = 0;
        for (size_t pl = 0; pl < term.places.size(); ++pl) {
            const PGL2Elem gi = f.g[pl].inverse();
            if (s < f.support.size() && f.support[s] == pl) {
                const SchottkyFactor& T = place_factor(*f.target, pl);
                for (const auto& u : f.coset_reps[s]) fibre[pl].push_back(gi * T.evaluate(u));
                ++s;
            } else {
                fibre[pl].push_back(gi);
            }
        }
        std::vector<size_t> pick(term.places.size(), 0);
        while (true) {
            CycleTerm t;
            t.coeff = term.coeff;
            for (size_t pl = 0; pl < term.places.size(); ++pl)
                t.places.push_back({moebius_apply(fibre[pl][pick[pl]], term.places[pl].x),
                                    moebius_apply(fibre[pl][pick[pl]], term.places[pl].y)});
            out.terms.push_back(std::move(t));
            size_t pl = 0;
            while (pl < pick.size() && ++pick[pl] == fibre[pl].size()) pick[pl++] = 0;
            if (pl == pick.size()) break;
        }
    }
    return out;
}

LatticeMaps lattice_maps(const MumfordMorphism& f, const HLattice& hs, const HLattice& ht) {
    // Per-place restriction and transfer on the flow bases; the product
    // basis matrices are their tensor products along the basis tuples.
    std::vector<std::vector<std::vector<long>>> pulls, pushes;
    for (size_t s = 0; s < f.support.size(); ++s) {
        size_t pl = f.support[s];
        unsigned long p = f.source->prime(pl);
        const SchottkyFactor& S = place_factor(*f.source, pl);
        const SchottkyFactor& T = place_factor(*f.target, pl);
        size_t rs = S.rank(), rt = T.rank();

        std::vector<std::vector<long>> pull(rs, std::vector<long>(rt, 0));
        for (size_t i = 0; i < rs; ++i) {
            BoundaryBall b = ball_action(f.g[pl], S.letter_ball(static_cast<int>(i) + 1), p);
            for (size_t j = 0; j < rt; ++j) pull[i][j] = ht.eval_place(pl, j, b);
        }
        std::vector<std::vector<long>> push(rt, std::vector<long>(rs, 0));
        const PGL2Elem gi = f.g[pl].inverse();
        for (size_t j = 0; j < rt; ++j)
            for (const auto& u : f.coset_reps[s]) {
                PGL2Elem m = gi * T.evaluate(u);
                BoundaryBall b = ball_action(m, T.letter_ball(static_cast<int>(j) + 1), p);
                for (size_t i = 0; i < rs; ++i) push[j][i] += hs.eval_place(pl, i, b);
            }
        pulls.push_back(std::move(pull));
        pushes.push_back(std::move(push));
    }

    LatticeMaps m;
    m.push.assign(ht.rank, std::vector<long>(hs.rank, 0));
    m.pull.assign(hs.rank, std::vector<long>(ht.rank, 0));
    for (size_t I = 0; I < hs.rank; ++I)
        for (size_t J = 0; J < ht.rank; ++J) {
            long push = 1, pull = 1;
            for (size_t s = 0; s < f.support.size(); ++s) {
                push *= pushes[s][ht.basis[J][s]][hs.basis[I][s]];
                pull *= pulls[s][hs.basis[I][s]][ht.basis[J][s]];
            }
            m.push[J][I] = push;
            m.pull[I][J] = pull;
        }
    return m;
}

JacobianElement pushforward_jacobian(const LatticeMaps& m, const JacobianElement& x,
                                     const PeriodLattice& lt, const HLattice& ht) {
    return map_jacobian(m.pull, true, x, lt, ht);
}

JacobianElement pullback_jacobian(const LatticeMaps& m, const JacobianElement& x,
                                  const PeriodLattice& ls, const HLattice& hs) {
    return map_jacobian(m.push, true, x, ls, hs);
}

FunctorialityReport functoriality_check(const MumfordMorphism& f, const HLattice& hs,
                                        const PeriodLattice& ls, const HLattice& ht,
                                        const PeriodLattice& lt,
                                        const std::vector<PlecticCycle>& src_samples,
                                        const std::vector<PlecticCycle>& tgt_samples,
                                        long depth, int digits) {
    LatticeMaps m = lattice_maps(f, hs, ht);
    FunctorialityReport rep;
    rep.push_digits = rep.pull_digits = 1000;
    for (const auto& d : src_samples) {
        auto via_cycles = abel_jacobi(ht, lt, pushforward_cycles(f, d), depth);
        auto via_map = pushforward_jacobian(m, abel_jacobi(hs, ls, d, depth), lt, ht);
        rep.push_digits = std::min(rep.push_digits, jacobian_agreement(via_cycles, via_map));
    }
    for (const auto& d : tgt_samples) {
        auto via_cycles = abel_jacobi(hs, ls, pullback_cycles(f, d), depth);
        auto via_map = pullback_jacobian(m, abel_jacobi(ht, lt, d, depth), ls, hs);
        rep.pull_digits = std::min(rep.pull_digits, jacobian_agreement(via_cycles, via_map));
    }
    rep.ok = rep.push_digits >= digits && rep.pull_digits >= digits;
    return rep;
}

std::vector<CorrespondenceComponent> compose_correspondences(const SchottkyFactor& parent,
                                                             const FiniteIndexSubgroup& g2,
                                                             const FiniteIndexSubgroup& g1,
                                                             size_t word_bound) {
    size_t n2 = g2.index;
    // Orbits of the right Gamma_1 action on the Gamma_2 coset space are
    // exactly the double cosets Gamma_2 \ Gamma / Gamma_1.
    std::vector<long> orbit(n2, -1);
    std::vector<std::vector<size_t>> orbits;
    for (size_t start = 0; start < n2; ++start) {
        if (orbit[start] >= 0) continue;
        long id = static_cast<long>(orbits.size());
        std::vector<size_t> members{start};
        orbit[start] = id;
        std::queue<size_t> bfs;
        bfs.push(start);
        while (!bfs.empty()) {
            size_t b = bfs.front();
            bfs.pop();
            for (const auto& gen : g1.sub_gens)
                for (const FreeWord& w : {gen, gen.inverse()}) {
                    size_t to = act_word(g2.action, w, b);
                    if (orbit[to] < 0) {
                        orbit[to] = id;
                        members.push_back(to);
                        bfs.push(to);
                    }
                }
        }
        orbits.push_back(std::move(members));
    }

    std::vector<CorrespondenceComponent> out;
    for (const auto& members : orbits) {
        size_t b0 = *std::min_element(members.begin(), members.end());
        // Intersection = stabilizer of the pair (Gamma_1 e, Gamma_2 u_b0)
        // under the right parent action on pairs of cosets.
        std::vector<std::pair<size_t, size_t>> pairs{{0, b0}};
        auto find_pair = [&](std::pair<size_t, size_t> q) {
            for (size_t k = 0; k < pairs.size(); ++k)
                if (pairs[k] == q) return k;
            return pairs.size();
        };
        std::vector<std::vector<size_t>> pact(parent.rank());
        std::queue<size_t> bfs;
        bfs.push(0);
        while (!bfs.empty()) {
            size_t k = bfs.front();
            bfs.pop();
            for (size_t j = 0; j < parent.rank(); ++j)
                for (int l : {static_cast<int>(j) + 1, -static_cast<int>(j) - 1}) {
                    std::pair<size_t, size_t> to{act_letter(g1.action, l, pairs[k].first),
                                                 act_letter(g2.action, l, pairs[k].second)};
                    if (find_pair(to) == pairs.size()) {
                        if (pairs.size() >= word_bound)
                            throw BoundExhausted("pair coset enumeration passed the bound");
                        pairs.push_back(to);
                        bfs.push(pairs.size() - 1);
                    }
                }
        }
        for (size_t j = 0; j < parent.rank(); ++j) {
            pact[j].resize(pairs.size());
            for (size_t k = 0; k < pairs.size(); ++k)
                pact[j][k] = find_pair({g1.action[j][pairs[k].first], g2.action[j][pairs[k].second]});
        }
        CorrespondenceComponent comp{g2.coset_reps[b0], members.size(),
                                     schreier_subgroup(parent, pact)};
        out.push_back(std::move(comp));
    }
    return out;
}

} // namespace plectic
