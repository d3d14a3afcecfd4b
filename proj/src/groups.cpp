#include "plectic/groups.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace plectic {

namespace {

BoundaryBall ball_complement(const BoundaryBall& b) {
    return {b.center, b.n, !b.complement};
}

} // namespace

FreeWord FreeWord::appended(int letter) const {
    FreeWord w = *this;
    if (!w.letters.empty() && w.letters.back() == -letter)
        w.letters.pop_back();
    else
        w.letters.push_back(letter);
    return w;
}

FreeWord FreeWord::prepended(int letter) const {
    FreeWord w;
    w.letters.push_back(letter);
    return w.concat(*this);
}

FreeWord FreeWord::inverse() const {
    FreeWord w;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
        w.letters.push_back(-*it);
    return w;
}

FreeWord FreeWord::concat(const FreeWord& other) const {
    FreeWord w = *this;
    for (int l : other.letters) w = w.appended(l);
    return w;
}

std::string FreeWord::str() const {
    if (letters.empty()) return "1";
    std::ostringstream out;
    for (size_t i = 0; i < letters.size(); ++i) {
        if (i) out << "*";
        out << "g" << std::abs(letters[i]);
        if (letters[i] < 0) out << "^-1";
    }
    return out.str();
}

bool operator==(const FreeWord& v, const FreeWord& w) { return v.letters == w.letters; }

Certificate good_position_check(unsigned long p, const std::vector<PGL2Elem>& gens,
                                const std::vector<std::pair<BoundaryBall, BoundaryBall>>& balls) {
    if (gens.empty() || gens.size() != balls.size())
        return {false, "need one ball pair per generator"};
    for (size_t i = 0; i < gens.size(); ++i)
        if (classify_element(gens[i], p) != ElementClass::Hyperbolic)
            return {false, "generator " + std::to_string(i + 1) + " is not hyperbolic"};

    std::vector<BoundaryBall> all;
    for (const auto& [bp, bm] : balls) {
        all.push_back(bp);
        all.push_back(bm);
    }
    for (size_t a = 0; a < all.size(); ++a)
        for (size_t b = a + 1; b < all.size(); ++b)
            if (!ball_disjoint(all[a], all[b], p))
                return {false, "balls " + all[a].str() + " and " + all[b].str() + " meet"};

    for (size_t i = 0; i < gens.size(); ++i) {
        auto outside = ball_complement(balls[i].second);
        auto image = ball_action(gens[i], outside, p);
        if (!ball_subset(image, balls[i].first, p))
            return {false, "image " + image.str() + " of generator " + std::to_string(i + 1) +
                               " is not inside " + balls[i].first.str()};
    }
    return {true, ""};
}

SchottkyFactor::SchottkyFactor(unsigned long p, int prec, std::vector<PGL2Elem> gens,
                               std::vector<std::pair<BoundaryBall, BoundaryBall>> balls)
    : p_(p), prec_(prec), gens_(std::move(gens)), balls_(std::move(balls)) {
    auto cert = good_position_check(p_, gens_, balls_);
    if (!cert.ok) throw CertificateError(cert.witness);
    for (const auto& g : gens_) fixed_.push_back(fixed_points(g, p_, prec_));
}

SchottkyFactor SchottkyFactor::cyclic(unsigned long p, int prec, const PGL2Elem& gen) {
    if (classify_element(gen, p) != ElementClass::Hyperbolic) throw NotHyperbolic();
    auto fp = fixed_points(gen, p, prec);
    // Balls hanging off the axis of the generator; walk the candidate
    // edge positions until the ping-pong inclusion certifies.
    for (long radius = 2; radius <= 5; ++radius) {
        auto axis = geodesic_between_ends(fp.attracting, fp.repelling, radius);
        for (size_t i = 0; i + 1 < axis.size(); ++i) {
            // Keep at least one edge between the balls so their complement
            // is nonempty; word descent needs an outside base point.
            for (size_t j = i + 1; j + 1 < axis.size(); ++j) {
                auto bp = ball_of_edge({axis[i + 1], axis[i]}, p);
                auto bm = ball_of_edge({axis[j], axis[j + 1]}, p);
                auto cert = good_position_check(p, {gen}, {{bp, bm}});
                if (cert.ok) return SchottkyFactor(p, prec, {gen}, {{bp, bm}});
            }
        }
    }
    throw CertificateError("no ping-pong balls found along the axis");
}

PGL2Elem SchottkyFactor::letter_matrix(int letter) const {
    const auto& g = gens_.at(static_cast<size_t>(std::abs(letter)) - 1);
    return letter > 0 ? g : g.inverse();
}

const BoundaryBall& SchottkyFactor::letter_ball(int letter) const {
    const auto& pair = balls_.at(static_cast<size_t>(std::abs(letter)) - 1);
    return letter > 0 ? pair.first : pair.second;
}

PGL2Elem SchottkyFactor::evaluate(const FreeWord& w) const {
    PGL2Elem g;
    for (int l : w.letters) g = g * letter_matrix(l);
    return g;
}

GroupFactor GroupFactor::cyclic(unsigned long p, int prec, const PGL2Elem& gen) {
    return {FactorKind::Cyclic, p, {SchottkyFactor::cyclic(p, prec, gen)}};
}

GroupFactor GroupFactor::schottky(SchottkyFactor f) {
    unsigned long p = f.prime();
    return {FactorKind::Schottky, p, {std::move(f)}};
}

const SchottkyFactor& GroupFactor::factor() const {
    if (is_trivial()) throw ConfigError("trivial factor has no generators");
    return s[0];
}

PlecticGroup::PlecticGroup(std::vector<GroupFactor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw ConfigError("group needs at least one place");
    std::set<unsigned long> primes;
    for (const auto& f : factors_)
        if (!primes.insert(f.prime).second)
            throw ConfigError("places must have distinct primes");
}

std::vector<size_t> PlecticGroup::support() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < factors_.size(); ++i)
        if (!factors_[i].is_trivial()) out.push_back(i);
    return out;
}

std::vector<WordElem> enumerate_words(const SchottkyFactor& f, size_t max_len) {
    std::vector<WordElem> out;
    out.push_back({FreeWord::one(), PGL2Elem::identity()});
    size_t begin = 0;
    for (size_t len = 1; len <= max_len; ++len) {
        size_t end = out.size();
        for (size_t k = begin; k < end; ++k) {
            for (size_t i = 0; i < f.rank(); ++i) {
                for (int sign : {1, -1}) {
                    int l = sign * static_cast<int>(i + 1);
                    if (!out[k].word.letters.empty() && out[k].word.letters.back() == -l)
                        continue;
                    out.push_back({out[k].word.appended(l), out[k].mat * f.letter_matrix(l)});
                }
            }
        }
        begin = end;
    }
    return out;
}

LimitApprox limit_set_approx(const PlecticGroup& g, size_t place, size_t depth) {
    const auto& f = g.factor(place).factor();
    unsigned long p = f.prime();
    LimitApprox out;

    auto words = enumerate_words(f, std::max<size_t>(depth, 1));
    for (const auto& [w, m] : words) {
        if (w.length() == std::max<size_t>(depth, 1)) {
            // prefix(w) applied to the certificate ball of the last letter
            PGL2Elem prefix;
            for (size_t i = 0; i + 1 < w.letters.size(); ++i)
                prefix = prefix * f.letter_matrix(w.letters[i]);
            out.cover.push_back(ball_action(prefix, f.letter_ball(w.letters.back()), p));
            out.cover_words.push_back(w);
        }
        if (w.empty() || w.length() > depth) continue;
        auto fp = fixed_points(m, p, f.precision());
        for (const auto& pt : {fp.attracting, fp.repelling}) {
            bool seen = false;
            for (const auto& q : out.points)
                if (eq_to(pt, q, f.precision())) { seen = true; break; }
            if (!seen) out.points.push_back(pt);
        }
    }
    return out;
}

LimitSetClass classify_limit_set(const GroupFactor& f) {
    if (f.is_trivial()) return LimitSetClass::Empty;
    return f.rank() >= 2 ? LimitSetClass::Perfect : LimitSetClass::TwoPoints;
}

PlecticGroup conjugate_group(const PlecticGroup& g, const std::vector<PGL2Elem>& h) {
    if (h.size() != g.places()) throw ConfigError("need one conjugator per place");
    std::vector<GroupFactor> out;
    for (size_t i = 0; i < g.places(); ++i) {
        const auto& f = g.factor(i);
        if (f.is_trivial()) {
            out.push_back(f);
            continue;
        }
        const auto& sf = f.factor();
        std::vector<PGL2Elem> gens;
        std::vector<std::pair<BoundaryBall, BoundaryBall>> balls;
        for (size_t k = 0; k < sf.rank(); ++k) {
            gens.push_back(h[i] * sf.gen(k) * h[i].inverse());
            balls.push_back({ball_action(h[i], sf.letter_ball(static_cast<int>(k + 1)), sf.prime()),
                             ball_action(h[i], sf.letter_ball(-static_cast<int>(k + 1)), sf.prime())});
        }
        out.push_back({f.kind, f.prime,
                       {SchottkyFactor(sf.prime(), sf.precision(), gens, balls)}});
    }
    return PlecticGroup(out);
}

PlecticGroup partial_intersection(const PlecticGroup& g, const std::vector<size_t>& keep) {
    std::vector<GroupFactor> out;
    for (size_t i = 0; i < g.places(); ++i) {
        bool kept = std::find(keep.begin(), keep.end(), i) != keep.end();
        out.push_back(kept ? g.factor(i) : GroupFactor::trivial(g.prime(i)));
    }
    return PlecticGroup(out);
}

FreeWord FiniteIndexSubgroup::rewrite(const FreeWord& w) const {
    // Schreier generator ids per (coset, parent generator), 0 for tree edges.
    std::map<std::pair<size_t, size_t>, int> id;
    {
        int next = 1;
        for (size_t c = 0; c < index; ++c)
            for (size_t i = 0; i < parent->rank(); ++i) {
                FreeWord u = coset_reps[c]
                                 .appended(static_cast<int>(i + 1))
                                 .concat(coset_reps[action[i][c]].inverse());
                id[{c, i}] = u.empty() ? 0 : next++;
            }
    }
    FreeWord out;
    size_t c = 0;
    for (int l : w.letters) {
        size_t i = static_cast<size_t>(std::abs(l)) - 1;
        if (l > 0) {
            if (id[{c, i}] != 0) out = out.appended(id[{c, i}]);
            c = action[i][c];
        } else {
            size_t prev = 0;
            while (action[i][prev] != c) ++prev;
            if (id[{prev, i}] != 0) out = out.appended(-id[{prev, i}]);
            c = prev;
        }
    }
    if (c != 0) throw NotASubgroup();
    return out;
}

FiniteIndexSubgroup schreier_subgroup(const SchottkyFactor& f,
                                      const std::vector<std::vector<size_t>>& action) {
    if (action.size() != f.rank()) throw ConfigError("need one permutation per generator");
    size_t n = action[0].size();
    for (const auto& perm : action) {
        if (perm.size() != n) throw ConfigError("permutation sizes differ");
        std::vector<bool> hit(n, false);
        for (size_t v : perm) {
            if (v >= n || hit[v]) throw ConfigError("coset action is not a permutation");
            hit[v] = true;
        }
    }

    // Spanning tree of the coset graph by BFS from coset 0.
    std::vector<FreeWord> reps(n);
    std::vector<bool> seen(n, false);
    seen[0] = true;
    std::queue<size_t> q;
    q.push(0);
    while (!q.empty()) {
        size_t c = q.front();
        q.pop();
        for (size_t i = 0; i < f.rank(); ++i) {
            size_t fwd = action[i][c];
            if (!seen[fwd]) {
                seen[fwd] = true;
                reps[fwd] = reps[c].appended(static_cast<int>(i + 1));
                q.push(fwd);
            }
            size_t bwd = 0;
            while (action[i][bwd] != c) ++bwd;
            if (!seen[bwd]) {
                seen[bwd] = true;
                reps[bwd] = reps[c].appended(-static_cast<int>(i + 1));
                q.push(bwd);
            }
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw NotTransitive();

    FiniteIndexSubgroup sub{&f, n, action, reps, {}, {}};
    for (size_t c = 0; c < n; ++c)
        for (size_t i = 0; i < f.rank(); ++i) {
            FreeWord u = reps[c]
                             .appended(static_cast<int>(i + 1))
                             .concat(reps[action[i][c]].inverse());
            if (u.empty()) continue;   // tree edge
            sub.sub_gens.push_back(u);
            sub.sub_mats.push_back(f.evaluate(u));
        }
    if (sub.sub_gens.size() != 1 + n * (f.rank() - 1))
        throw CertificateError("Schreier rank mismatch");
    return sub;
}

std::optional<FreeWord> membership_word(const SchottkyFactor& f, const PGL2Elem& g,
                                        size_t max_len) {
    // Base point outside every certificate ball; scan small rationals at
    // several scales in case the balls leave only a thin annulus free.
    std::optional<mpq_class> t0;
    for (long e : {0, -1, 1, -2, 2, -3, 3}) {
        mpz_class pe;
        mpz_ui_pow_ui(pe.get_mpz_t(), f.prime(), static_cast<unsigned long>(std::abs(e)));
        mpq_class scale = e >= 0 ? mpq_class(pe) : mpq_class(1) / mpq_class(pe);
        for (long t = 0; t < 64 && !t0; ++t) {
            mpq_class cand = mpq_class(t) * scale;
            bool inside = false;
            for (size_t i = 1; i <= f.rank() && !inside; ++i)
                for (int sign : {1, -1})
                    if (ball_contains(f.letter_ball(sign * static_cast<int>(i)), cand, f.prime()))
                        inside = true;
            if (!inside) t0 = cand;
        }
        if (t0) break;
    }
    if (!t0) throw CertificateError("no base point outside the certificate balls");

    PGL2Elem cur = g;
    FreeWord word;
    while (!proj_equal(cur, PGL2Elem::identity())) {
        if (word.length() >= max_len) return std::nullopt;
        auto z = cur.apply(t0);
        int found = 0;
        for (size_t i = 1; i <= f.rank() && !found; ++i)
            for (int sign : {1, -1}) {
                int l = sign * static_cast<int>(i);
                if (ball_contains(f.letter_ball(l), z, f.prime())) { found = l; break; }
            }
        if (!found) return std::nullopt;
        word.letters.push_back(found);
        cur = f.letter_matrix(found).inverse() * cur;
    }
    return word;
}

} // namespace plectic
