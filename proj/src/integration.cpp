#include "plectic/integration.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <numeric>
#include <unordered_map>

#include "json.hpp"

namespace plectic {

namespace {

bool exact_one(const QuadExtScalar& q) {
    return !q.is_zero() && q.is_base() && q.re().valuation() == 0 && q.re().unit() == 1;
}

// Product accumulation over thousands of cross-ratio factors can hit
// partial products that are purely real or purely imaginary to working
// precision (sibling balls telescope). Represent the dead component as
// zero at that precision instead of aborting; the discarded tail is
// below every digit we report.
QuadExtScalar lenient_mul(const QuadExtScalar& x, const QuadExtScalar& y) {
    unsigned long p = x.prime();
    int prec = std::min(x.precision(), y.precision());
    PadicScalar d = PadicScalar::from_rational(
        x.is_ramified() ? mpq_class(static_cast<long>(p)) : mpq_class(x.defining()), p, prec);
    auto guarded = [&](const PadicScalar& u, const PadicScalar& v) {
        try {
            return add(u, v);
        } catch (const CancellationError&) {
            return PadicScalar::zero(p, prec);
        }
    };
    PadicScalar re = guarded(mul(x.re(), y.re()), mul(d, mul(x.im(), y.im())));
    PadicScalar im = guarded(mul(x.re(), y.im()), mul(x.im(), y.re()));
    return QuadExtScalar(std::move(re), std::move(im), x.defining(), x.is_ramified());
}

QuadExtScalar qpow(const QuadExtScalar& q, long e) {
    int prec = q.precision();
    auto r = QuadExtScalar::from_base(PadicScalar::from_integer(1, q.prime(), prec));
    if (e == 0) return r;
    QuadExtScalar base = e > 0 ? q : q.inv();
    for (long k = std::labs(e); k > 0; --k) r = lenient_mul(r, base);
    return r;
}

struct PlaceCover {
    std::vector<BoundaryBall> balls;
    std::vector<ProjPoint> samples;
    std::vector<int> last_letter;
};

PlaceCover build_cover(const SchottkyFactor& f, long depth) {
    PlaceCover c;
    unsigned long p = f.prime();
    auto words = enumerate_words(f, static_cast<size_t>(std::max<long>(depth, 1)));
    for (const auto& [w, m] : words) {
        if (w.length() != static_cast<size_t>(std::max<long>(depth, 1))) continue;
        PGL2Elem prefix;
        for (size_t i = 0; i + 1 < w.letters.size(); ++i)
            prefix = prefix * f.letter_matrix(w.letters[i]);
        int last = w.letters.back();
        c.balls.push_back(ball_action(prefix, f.letter_ball(last), p));
        const auto& fp = f.gen_fixed(static_cast<size_t>(std::abs(last)) - 1);
        c.samples.push_back(moebius_apply(prefix, last > 0 ? fp.attracting : fp.repelling));
        c.last_letter.push_back(last);
    }
    return c;
}

// Measure of a cover ball: by invariance it is the value on the
// certificate ball of the final letter.
std::vector<long> letter_values(const HLattice& h, size_t place, size_t i) {
    const auto& f = *h.qc.factors[place]->factor;
    std::vector<long> v(2 * f.rank() + 1, 0);
    for (size_t r = 1; r <= f.rank(); ++r) {
        v[2 * r - 1] = h.eval_place(place, i, f.letter_ball(static_cast<int>(r)));
        v[2 * r] = h.eval_place(place, i, f.letter_ball(-static_cast<int>(r)));
    }
    return v;
}

long letter_value(const std::vector<long>& v, int letter) {
    return letter > 0 ? v[2 * letter - 1] : v[-2 * letter];
}

} // namespace

PlecticCycle translate_cycle(const PlecticCycle& d, const std::vector<PGL2Elem>& g) {
    PlecticCycle out = d;
    for (auto& term : out.terms) {
        if (term.places.size() != g.size()) throw ConfigError("translator arity mismatch");
        for (size_t k = 0; k < g.size(); ++k) {
            term.places[k].x = moebius_apply(g[k], term.places[k].x);
            term.places[k].y = moebius_apply(g[k], term.places[k].y);
        }
    }
    return out;
}

PlecticCycle frobenius_cycle(const PlecticCycle& d) {
    PlecticCycle out = d;
    for (auto& term : out.terms)
        for (auto& pr : term.places) {
            pr.x = frobenius_point(pr.x);
            pr.y = frobenius_point(pr.y);
        }
    return out;
}

MultiplicativeTensor::MultiplicativeTensor(std::vector<unsigned long> primes,
                                           std::vector<int> precs)
    : primes_(std::move(primes)), precs_(std::move(precs)) {}

void MultiplicativeTensor::push(std::vector<QuadExtScalar> comps) {
    if (comps.size() != places()) throw ConfigError("tensor arity mismatch");
    for (const auto& c : comps)
        if (exact_one(c)) return;   // a (x) 1 is the identity
    factors_.push_back(std::move(comps));
}

void MultiplicativeTensor::reduce() {
    if (factors_.size() <= 1) return;
    // One merging pass per slot: group by the serialized other components
    // and multiply within the slot. A merge in one slot can concentrate an
    // exponent there and spoil key equality for the later slots, so the
    // pass order matters; try every order from the pristine list and keep
    // the shortest outcome.
    auto sweep = [](std::vector<std::vector<QuadExtScalar>>& fac, size_t k) {
        bool changed = false;
        std::unordered_map<std::string, size_t> seen;
        std::vector<std::vector<QuadExtScalar>> merged;
        for (auto& f : fac) {
            std::string key;
            for (size_t j = 0; j < f.size(); ++j)
                if (j != k) key += serialize_quadext(f[j]) + "|";
            auto it = seen.find(key);
            if (it == seen.end()) {
                seen[key] = merged.size();
                merged.push_back(std::move(f));
            } else {
                merged[it->second][k] = lenient_mul(merged[it->second][k], f[k]);
                changed = true;
            }
        }
        fac.clear();
        for (auto& f : merged) {
            bool one = false;
            for (const auto& c : f) one = one || exact_one(c);
            if (!one) fac.push_back(std::move(f));
        }
        return changed;
    };
    auto run = [&](const std::vector<size_t>& order) {
        auto fac = factors_;
        bool changed = true;
        while (changed && fac.size() > 1) {
            changed = false;
            for (size_t k : order) changed = sweep(fac, k) || changed;
        }
        return fac;
    };
    std::vector<size_t> order(places());
    std::iota(order.begin(), order.end(), 0);
    auto best = run(order);
    if (places() <= 4) {
        while (best.size() > 1 && std::next_permutation(order.begin(), order.end())) {
            auto cand = run(order);
            if (cand.size() < best.size()) best = std::move(cand);
        }
    }
    factors_ = std::move(best);
}

std::vector<QuadExtScalar> MultiplicativeTensor::elementary() const {
    MultiplicativeTensor t = *this;
    t.reduce();
    if (t.factors_.size() > 1) throw NonElementary("tensor does not reduce to elementary form");
    if (t.factors_.empty()) {
        std::vector<QuadExtScalar> ones;
        for (size_t k = 0; k < places(); ++k)
            ones.push_back(QuadExtScalar::from_base(
                PadicScalar::from_integer(1, primes_[k], precs_[k])));
        return ones;
    }
    return t.factors_[0];
}

int tensor_agreement(const MultiplicativeTensor& a, const MultiplicativeTensor& b) {
    std::vector<QuadExtScalar> ea, eb;
    try {
        ea = a.elementary();
        eb = b.elementary();
    } catch (const NonElementary&) {
        return 0;
    }
    int agree = std::numeric_limits<int>::max();
    for (size_t k = 0; k < ea.size(); ++k)
        agree = std::min(agree, agreement_digits(ea[k], eb[k]));
    return agree;
}

MultiplicativeTensor frobenius_tensor(const MultiplicativeTensor& t) {
    MultiplicativeTensor out = t;
    for (auto& f : const_cast<std::vector<std::vector<QuadExtScalar>>&>(out.factors()))
        for (auto& c : f) c = ext_frobenius(c);
    return out;
}

std::string serialize_tensor(const MultiplicativeTensor& t) {
    MultiplicativeTensor r = t;
    r.reduce();
    nlohmann::json j = nlohmann::json::array();
    for (const auto& f : r.factors()) {
        nlohmann::json comps = nlohmann::json::array();
        for (const auto& c : f) comps.push_back(nlohmann::json::parse(serialize_quadext(c)));
        j.push_back(comps);
    }
    return j.dump();
}

std::vector<QuadExtScalar> phi_eval(const CycleTerm& term, const std::vector<ProjPoint>& t) {
    if (t.size() != term.places.size()) throw ConfigError("need one evaluation point per place");
    std::vector<QuadExtScalar> out;
    for (size_t k = 0; k < t.size(); ++k)
        out.push_back(cross_ratio_factor(t[k], term.places[k].x, term.places[k].y));
    return out;
}

namespace {

struct RiemannData {
    std::vector<size_t> support;
    std::vector<PlaceCover> covers;                       // per support place
    std::vector<std::vector<std::vector<long>>> letters;  // [support][basis i][letter]
    std::vector<unsigned long> primes;
    std::vector<int> precs;
};

RiemannData riemann_data(const HLattice& h, long depth) {
    const auto& g = *h.qc.group;
    RiemannData rd;
    rd.support = g.support();
    for (size_t k = 0; k < rd.support.size(); ++k) {
        size_t place = rd.support[k];
        const auto& f = *h.qc.factors[place]->factor;
        rd.covers.push_back(build_cover(f, depth));
        std::vector<std::vector<long>> lv;
        for (size_t i = 0; i < f.rank(); ++i) lv.push_back(letter_values(h, place, i));
        rd.letters.push_back(lv);
        rd.primes.push_back(f.prime());
        rd.precs.push_back(f.precision());
    }
    return rd;
}

void check_outside_cover(const RiemannData& rd, const PlecticCycle& d) {
    for (const auto& term : d.terms)
        for (size_t k = 0; k < rd.support.size(); ++k) {
            const auto& pr = term.places.at(rd.support[k]);
            for (const auto& b : rd.covers[k].balls)
                for (const auto* pt : {&pr.x, &pr.y})
                    if (ball_contains(b, *pt))
                        throw PointCollision("cycle point " + pt->str() +
                                             " lies inside the limit cover");
        }
}

std::vector<MultiplicativeTensor> riemann_at_depth(const HLattice& h, const PlecticCycle& d,
                                                   const RiemannData& rd) {
    // The integrand factor of a cover ball does not depend on the basis
    // tuple, so evaluate it once per term and ball.
    std::vector<std::vector<std::vector<QuadExtScalar>>> factors(d.terms.size());
    for (size_t ti = 0; ti < d.terms.size(); ++ti) {
        factors[ti].resize(rd.support.size());
        for (size_t k = 0; k < rd.support.size(); ++k) {
            const auto& pr = d.terms[ti].places.at(rd.support[k]);
            const auto& cov = rd.covers[k];
            factors[ti][k].reserve(cov.balls.size());
            for (size_t b = 0; b < cov.balls.size(); ++b)
                factors[ti][k].push_back(cross_ratio_factor(cov.samples[b], pr.x, pr.y));
        }
    }

    std::vector<MultiplicativeTensor> coords;
    for (const auto& tuple : h.basis) {
        MultiplicativeTensor t(rd.primes, rd.precs);
        for (size_t ti = 0; ti < d.terms.size(); ++ti) {
            const auto& term = d.terms[ti];
            std::vector<std::vector<const QuadExtScalar*>> fv(rd.support.size());
            std::vector<std::vector<long>> ev(rd.support.size());
            for (size_t k = 0; k < rd.support.size(); ++k) {
                const auto& cov = rd.covers[k];
                for (size_t b = 0; b < cov.balls.size(); ++b) {
                    long mu = letter_value(rd.letters[k][tuple[k]], cov.last_letter[b]);
                    if (mu == 0) continue;
                    ev[k].push_back(k == 0 ? term.coeff * mu : mu);
                    fv[k].push_back(&factors[ti][k][b]);
                }
            }
            if (rd.support.size() == 1) {
                // single place: plain product, no tuple expansion
                QuadExtScalar acc =
                    QuadExtScalar::from_base(PadicScalar::from_integer(1, rd.primes[0], rd.precs[0]));
                for (size_t b = 0; b < fv[0].size(); ++b)
                    acc = lenient_mul(acc, qpow(*fv[0][b], ev[0][b]));
                t.push({std::move(acc)});
                continue;
            }
            // product over ball tuples, exponents distributed one per slot
            std::vector<size_t> idx(rd.support.size(), 0);
            for (;;) {
                std::vector<QuadExtScalar> comps;
                for (size_t k = 0; k < rd.support.size(); ++k)
                    comps.push_back(qpow(*fv[k][idx[k]], ev[k][idx[k]]));
                t.push(std::move(comps));
                size_t k = rd.support.size();
                while (k-- > 0) {
                    if (++idx[k] < fv[k].size()) break;
                    idx[k] = 0;
                    if (k == 0) goto done_term;
                }
            }
        done_term:;
        }
        t.reduce();
        coords.push_back(std::move(t));
    }
    return coords;
}

} // namespace

IntegralResult integrate_riemann(const HLattice& h, const PlecticCycle& d, long depth,
                                 int want_digits) {
    if (h.rank == 0) throw ConfigError("measure lattice is trivial");
    if (depth < 1) throw ConfigError("depth must be positive");
    for (const auto& term : d.terms)
        if (term.places.size() != h.qc.group->places())
            throw ConfigError("cycle arity does not match the group");

    IntegralResult res;
    res.depth = depth;
    std::vector<std::vector<MultiplicativeTensor>> runs;
    for (long dd = std::max<long>(1, depth - 2); dd <= depth; ++dd) {
        auto rd = riemann_data(h, dd);
        check_outside_cover(rd, d);
        runs.push_back(riemann_at_depth(h, d, rd));
    }
    int stable = std::numeric_limits<int>::max();
    for (size_t r = 1; r < runs.size(); ++r)
        for (size_t c = 0; c < runs[r].size(); ++c)
            stable = std::min(stable, tensor_agreement(runs[r - 1][c], runs[r][c]));
    if (runs.size() == 1) stable = 0;
    res.coords = std::move(runs.back());
    res.stable_digits = stable;
    res.stabilized = want_digits > 0 ? stable >= want_digits : true;
    if (want_digits > 0 && !res.stabilized)
        throw NonStabilized("only " + std::to_string(stable) + " digits stable at depth " +
                            std::to_string(depth));
    return res;
}

SeriesResult integrate_series(const SchottkyFactor& f, size_t i, const ProjPoint& x,
                              const ProjPoint& y, size_t word_len) {
    const auto& fp = f.gen_fixed(i);
    auto one = QuadExtScalar::from_base(PadicScalar::from_integer(1, f.prime(), f.precision()));
    QuadExtScalar partial = one, prev = one;
    auto words = enumerate_words(f, word_len);
    for (size_t len = 0; len <= word_len; ++len) {
        prev = partial;
        for (const auto& [w, m] : words) {
            if (w.length() != len) continue;
            if (!w.empty() &&
                static_cast<size_t>(std::abs(w.letters.back())) == i + 1)
                continue;   // coset representatives of <gen_i>
            auto zp = moebius_apply(m, fp.attracting);
            auto zm = moebius_apply(m, fp.repelling);
            partial = lenient_mul(partial, lenient_mul(cross_ratio_factor(zp, x, y),
                                                       cross_ratio_factor(zm, y, x)));
        }
    }
    SeriesResult r{partial, agreement_digits(prev, partial)};
    return r;
}

QuadExtScalar period(const HLattice& h, size_t place, size_t j, size_t i, long depth,
                     const std::optional<ProjPoint>& base) {
    const auto& f = *h.qc.factors.at(place)->factor;
    auto cover = build_cover(f, depth);
    ProjPoint t0 = base.value_or(ProjPoint::from_rational(0, f.prime(), f.precision()));
    if (!base) {
        for (long t = 0; t < 64; ++t) {
            bool inside = false;
            for (const auto& b : cover.balls)
                inside = inside || ball_contains(b, mpq_class(t), f.prime());
            if (!inside) { t0 = ProjPoint::from_rational(t, f.prime(), f.precision()); break; }
        }
    }
    auto gx = moebius_apply(f.gen(j), t0);
    auto lv = letter_values(h, place, i);
    auto value = QuadExtScalar::from_base(PadicScalar::from_integer(1, f.prime(), f.precision()));
    for (size_t b = 0; b < cover.balls.size(); ++b) {
        long mu = letter_value(lv, cover.last_letter[b]);
        if (mu == 0) continue;
        value = lenient_mul(value, qpow(cross_ratio_factor(cover.samples[b], gx, t0), mu));
    }
    return value;
}

std::vector<std::vector<QuadExtScalar>> period_matrix(const HLattice& h, size_t place,
                                                      long depth) {
    const auto& f = *h.qc.factors.at(place)->factor;
    auto cover = build_cover(f, depth);
    ProjPoint t0 = ProjPoint::from_rational(0, f.prime(), f.precision());
    for (long t = 0; t < 64; ++t) {
        bool inside = false;
        for (const auto& b : cover.balls)
            inside = inside || ball_contains(b, mpq_class(t), f.prime());
        if (!inside) { t0 = ProjPoint::from_rational(t, f.prime(), f.precision()); break; }
    }
    std::vector<std::vector<long>> lv;
    for (size_t i = 0; i < f.rank(); ++i) lv.push_back(letter_values(h, place, i));
    auto one = QuadExtScalar::from_base(PadicScalar::from_integer(1, f.prime(), f.precision()));
    std::vector<std::vector<QuadExtScalar>> pm(f.rank());
    for (size_t j = 0; j < f.rank(); ++j) {
        auto gx = moebius_apply(f.gen(j), t0);
        // one integrand evaluation per ball, shared by all measures
        std::vector<QuadExtScalar> crf;
        crf.reserve(cover.balls.size());
        for (size_t b = 0; b < cover.balls.size(); ++b)
            crf.push_back(cross_ratio_factor(cover.samples[b], gx, t0));
        for (size_t i = 0; i < f.rank(); ++i) {
            auto value = one;
            for (size_t b = 0; b < cover.balls.size(); ++b) {
                long mu = letter_value(lv[i], cover.last_letter[b]);
                if (mu == 0) continue;
                value = lenient_mul(value, qpow(crf[b], mu));
            }
            pm[i].push_back(value);
        }
    }
    return pm;
}

FubiniReport fubini_check(const HLattice& h, const PlecticCycle& d, long depth, int digits) {
    const auto& g = *h.qc.group;
    auto support = g.support();
    if (support.size() < 2) throw ConfigError("fubini needs at least two non-trivial places");
    if (d.terms.size() != 1) throw ConfigError("fubini applies to elementary cycles");
    const auto& term = d.terms[0];

    FubiniReport rep;
    rep.joint = integrate_riemann(h, d, depth, 0).coords;

    auto rd = riemann_data(h, depth);
    for (const auto& tuple : h.basis) {
        MultiplicativeTensor t(rd.primes, rd.precs);
        std::vector<QuadExtScalar> comps;
        for (size_t k = 0; k < support.size(); ++k) {
            const auto& pr = term.places.at(support[k]);
            const auto& cov = rd.covers[k];
            auto value = QuadExtScalar::from_base(
                PadicScalar::from_integer(1, rd.primes[k], rd.precs[k]));
            for (size_t b = 0; b < cov.balls.size(); ++b) {
                long mu = letter_value(rd.letters[k][tuple[k]], cov.last_letter[b]);
                if (mu == 0) continue;
                if (k == 0) mu *= term.coeff;
                value = lenient_mul(value, qpow(cross_ratio_factor(cov.samples[b], pr.x, pr.y), mu));
            }
            comps.push_back(value);
        }
        t.push(comps);
        rep.factored.push_back(std::move(t));
    }

    rep.agree_digits = std::numeric_limits<int>::max();
    for (size_t c = 0; c < rep.joint.size(); ++c)
        rep.agree_digits = std::min(rep.agree_digits,
                                    tensor_agreement(rep.joint[c], rep.factored[c]));
    rep.ok = rep.agree_digits >= digits;
    return rep;
}

} // namespace plectic
