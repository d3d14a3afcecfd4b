#include "plectic/jacobian.hpp"

#include <algorithm>
#include <numeric>

namespace plectic {

namespace {

long half_val(const QuadExtScalar& q) {
    if (q.is_zero()) throw DivisionByZero("valuation of zero");
    long tv = q.twice_valuation();
    if (tv % 2 != 0) throw RamifiedUnsupported("half-integral valuation in lattice reduction");
    return tv / 2;
}

long floordiv(long a, long b) {
    long q = a / b, r = a % b;
    return (r != 0 && (r < 0) != (b < 0)) ? q - 1 : q;
}

// A period-lattice generator at one place: its valuation column over the
// factor basis rows, and its value at every product basis coordinate.
struct GenVec {
    std::vector<long> v;
    std::vector<QuadExtScalar> t;
};

void col_sub(GenVec& a, const GenVec& b, long m) {
    for (size_t r = 0; r < a.v.size(); ++r) a.v[r] -= m * b.v[r];
    for (size_t i = 0; i < a.t.size(); ++i) a.t[i] = mul(a.t[i], b.t[i].pow(-m));
}

void col_neg(GenVec& a) {
    for (auto& x : a.v) x = -x;
    for (auto& t : a.t) t = t.inv();
}

// Column echelon form (pivot rows strictly increasing, positive pivots);
// the accompanying tensors track the same unimodular column operations.
std::vector<GenVec> echelon(std::vector<GenVec> cols) {
    size_t lead = 0;
    size_t rows = cols.empty() ? 0 : cols[0].v.size();
    for (size_t row = 0; row < rows && lead < cols.size(); ++row) {
        for (;;) {
            size_t best = cols.size();
            for (size_t c = lead; c < cols.size(); ++c)
                if (cols[c].v[row] != 0 &&
                    (best == cols.size() ||
                     std::labs(cols[c].v[row]) < std::labs(cols[best].v[row])))
                    best = c;
            if (best == cols.size()) break;
            std::swap(cols[lead], cols[best]);
            bool clean = true;
            for (size_t c = lead + 1; c < cols.size(); ++c) {
                if (cols[c].v[row] == 0) continue;
                col_sub(cols[c], cols[lead], cols[c].v[row] / cols[lead].v[row]);
                if (cols[c].v[row] != 0) clean = false;
            }
            if (clean) break;
        }
        if (lead < cols.size() && cols[lead].v[row] != 0) {
            if (cols[lead].v[row] < 0) col_neg(cols[lead]);
            ++lead;
        }
    }
    cols.resize(lead);
    return cols;
}

std::vector<GenVec> place_generators(const PeriodLattice& lat, const HLattice& h, size_t k) {
    const auto& pm = lat.periods[k];
    size_t grank = pm.size();
    size_t ngens = grank == 0 ? 0 : pm[0].size();
    std::vector<GenVec> gens;
    for (size_t j = 0; j < ngens; ++j) {
        GenVec g;
        for (size_t b = 0; b < grank; ++b) g.v.push_back(half_val(pm[b][j]));
        for (const auto& tuple : h.basis) g.t.push_back(pm[tuple[k]][j]);
        gens.push_back(std::move(g));
    }
    return gens;
}

// u1 (x) ... (x) 1 (x) ... is the identity tensor: collapse the whole
// coordinate once any reduced component is 1 at working precision.
void collapse_degenerate(JacobianElement& v) {
    for (auto& row : v.comps) {
        if (row.size() < 2) continue;
        bool degenerate = false;
        for (const auto& c : row) degenerate = degenerate || c.is_one_to(c.precision());
        if (degenerate)
            for (auto& c : row)
                c = QuadExtScalar::from_base(PadicScalar::from_integer(1, c.prime(), c.precision()));
    }
}

} // namespace

PeriodLattice period_lattice(const HLattice& h, long depth) {
    PeriodLattice lat;
    lat.support = h.qc.group->support();
    for (size_t k = 0; k < lat.support.size(); ++k) {
        size_t place = lat.support[k];
        const auto& f = *h.qc.factors[place]->factor;
        lat.primes.push_back(f.prime());
        lat.precs.push_back(f.precision());
        lat.periods.push_back(period_matrix(h, place, depth));
    }
    return lat;
}

bool JacobianElement::is_identity(int digits) const {
    for (const auto& row : comps)
        for (const auto& c : row)
            if (!c.is_one_to(digits)) return false;
    return true;
}

bool jacobian_eq(const JacobianElement& a, const JacobianElement& b, int digits) {
    if (a.comps.size() != b.comps.size()) return false;
    for (size_t i = 0; i < a.comps.size(); ++i) {
        if (a.comps[i].size() != b.comps[i].size()) return false;
        for (size_t k = 0; k < a.comps[i].size(); ++k)
            if (!eq_to(a.comps[i][k], b.comps[i][k], digits)) return false;
    }
    return true;
}

JacobianElement reduce_mod_lattice(const JacobianElement& v, const PeriodLattice& lat,
                                   const HLattice& h) {
    JacobianElement out = v;
    for (size_t k = 0; k < lat.support.size(); ++k) {
        auto cols = echelon(place_generators(lat, h, k));
        size_t grank = lat.periods[k].size();
        // distinguished coordinate per factor basis row: first tuple hitting it
        std::vector<size_t> dist(grank, h.basis.size());
        for (size_t i = 0; i < h.basis.size(); ++i)
            if (dist[h.basis[i][k]] == h.basis.size()) dist[h.basis[i][k]] = i;
        std::vector<long> w(grank);
        for (size_t b = 0; b < grank; ++b) w[b] = half_val(out.comps[dist[b]][k]);
        for (const auto& col : cols) {
            size_t pivot = 0;
            while (col.v[pivot] == 0) ++pivot;
            long m = floordiv(w[pivot], col.v[pivot]);
            if (m == 0) continue;
            for (size_t b = 0; b < grank; ++b) w[b] -= m * col.v[b];
            for (size_t i = 0; i < h.basis.size(); ++i)
                out.comps[i][k] = mul(out.comps[i][k], col.t[i].pow(-m));
        }
    }
    collapse_degenerate(out);
    return out;
}

JacobianElement reduce_mod_lattice(const std::vector<MultiplicativeTensor>& coords,
                                   const PeriodLattice& lat, const HLattice& h) {
    if (coords.size() != h.rank) throw RankMismatch("coordinate count does not match the lattice");
    JacobianElement v;
    for (const auto& t : coords) v.comps.push_back(t.elementary());
    return reduce_mod_lattice(v, lat, h);
}

JacobianElement abel_jacobi(const HLattice& h, const PeriodLattice& lat, const PlecticCycle& d,
                            long depth) {
    auto res = integrate_riemann(h, d, depth, 0);
    return reduce_mod_lattice(res.coords, lat, h);
}

JacobianElement jacobian_mul(const JacobianElement& a, const JacobianElement& b,
                             const PeriodLattice& lat, const HLattice& h) {
    if (a.comps.size() != b.comps.size()) throw RankMismatch("mismatched Jacobian elements");
    JacobianElement v;
    for (size_t i = 0; i < a.comps.size(); ++i) {
        std::vector<QuadExtScalar> row;
        for (size_t k = 0; k < a.comps[i].size(); ++k)
            row.push_back(mul(a.comps[i][k], b.comps[i][k]));
        v.comps.push_back(std::move(row));
    }
    return reduce_mod_lattice(v, lat, h);
}

std::vector<JacobianElement> kunneth_decompose(const JacobianElement& x, const HLattice& h,
                                               int digits) {
    auto support = h.qc.group->support();
    std::vector<JacobianElement> parts;
    for (size_t k = 0; k < support.size(); ++k) {
        size_t grank = h.qc.factors[support[k]]->factor->rank();
        JacobianElement part;
        part.comps.assign(grank, {});
        std::vector<bool> seen(grank, false);
        for (size_t i = 0; i < h.basis.size(); ++i) {
            size_t b = h.basis[i][k];
            if (!seen[b]) {
                part.comps[b] = {x.comps[i][k]};
                seen[b] = true;
            } else if (!eq_to(part.comps[b][0], x.comps[i][k], digits)) {
                throw NonElementary("class is not an elementary Kunneth tensor");
            }
        }
        parts.push_back(std::move(part));
    }
    return parts;
}

JacobianElement kunneth_compose(const std::vector<JacobianElement>& parts, const HLattice& h) {
    auto support = h.qc.group->support();
    if (parts.size() != support.size()) throw RankMismatch("one part per support place required");
    JacobianElement x;
    for (const auto& tuple : h.basis) {
        std::vector<QuadExtScalar> row;
        for (size_t k = 0; k < support.size(); ++k) {
            if (parts[k].comps.at(tuple[k]).size() != 1)
                throw NonElementary("parts must be single-place classes");
            row.push_back(parts[k].comps[tuple[k]][0]);
        }
        x.comps.push_back(std::move(row));
    }
    collapse_degenerate(x);
    return x;
}

TateCurve::TateCurve(PadicScalar period) : q(std::move(period)) {
    if (q.is_zero() || q.valuation() < 1)
        throw ConfigError("Tate period must have positive valuation");
}

QuadExtScalar TateCurve::normalize(const QuadExtScalar& u) const {
    long m = floordiv(half_val(u), q.valuation());
    if (m == 0) return u;
    return mul(u, QuadExtScalar::from_base(q.pow(-m)));
}

QuadExtScalar TateCurve::identity() const {
    return QuadExtScalar::from_base(PadicScalar::from_integer(1, q.prime(), q.precision()));
}

QuadExtScalar TateCurve::add(const QuadExtScalar& u, const QuadExtScalar& w) const {
    return normalize(mul(u, w));
}

QuadExtScalar TateCurve::neg(const QuadExtScalar& u) const { return normalize(u.inv()); }

CommensurabilityResult commensurability_check(const PadicScalar& q, const PadicScalar& qt) {
    if (q.prime() != qt.prime()) throw PrimeMismatch();
    if (q.is_zero() || qt.is_zero() || q.valuation() < 1 || qt.valuation() < 1)
        throw ConfigError("periods must have positive valuation");
    long g = std::gcd(q.valuation(), qt.valuation());
    long a = qt.valuation() / g, b = q.valuation() / g;
    int prec = std::min(q.precision(), qt.precision());
    PadicScalar u = mul(q.pow(a), qt.pow(-b));
    // allow a Teichmuller root-of-unity discrepancy: q^(am) = qt^(bm)
    unsigned long p = q.prime();
    for (long m = 1; m <= static_cast<long>(p) - 1; ++m) {
        if ((static_cast<long>(p) - 1) % m != 0) continue;
        PadicScalar w = u.pow(m);
        if (w.is_one_to(prec)) {
            CommensurabilityResult r;
            r.yes = true;
            r.a = a * m;
            r.b = b * m;
            r.at_precision = w.precision() < prec || !(w.valuation() == 0 && w.unit() == 1);
            return r;
        }
    }
    return {};
}

std::vector<QuadExtScalar> ModularProjection::apply(const JacobianElement& x) const {
    std::vector<QuadExtScalar> out;
    for (size_t k = 0; k < curves.size(); ++k) {
        QuadExtScalar t = curves[k].identity();
        for (size_t i = 0; i < lambda.size(); ++i)
            t = mul(t, x.comps.at(i).at(k).pow(lambda[i]));
        out.push_back(curves[k].normalize(t));
    }
    return out;
}

ModularProjection modular_projection(const HLattice& h, std::vector<long> lambda,
                                     std::vector<PadicScalar> qtilde) {
    if (lambda.size() != h.rank) throw RankMismatch("character length must match the basis");
    if (qtilde.size() != h.qc.group->support().size())
        throw RankMismatch("one Tate period per support place required");
    long g = 0;
    for (long l : lambda) g = std::gcd(g, std::labs(l));
    if (g != 1) throw NonPrimitiveCharacter("character must be primitive");
    ModularProjection mp;
    mp.lambda = std::move(lambda);
    for (auto& qt : qtilde) mp.curves.emplace_back(std::move(qt));
    return mp;
}

} // namespace plectic
