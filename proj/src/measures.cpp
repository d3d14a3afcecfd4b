#include "plectic/measures.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace plectic {

namespace {

struct DSU {
    std::vector<int> up;
    explicit DSU(size_t n) : up(n) { std::iota(up.begin(), up.end(), 0); }
    int find(int a) {
        while (up[a] != a) a = up[a] = up[up[a]];
        return a;
    }
    void join(int a, int b) { up[find(a)] = find(b); }
};

BoundaryBall ball_complement(const BoundaryBall& b) {
    return {b.center, b.n, !b.complement};
}

// Exact inverse of a small integer matrix; nullopt unless det = +-1.
std::optional<std::vector<std::vector<long>>> unimodular_inverse(
    const std::vector<std::vector<long>>& m) {
    size_t n = m.size();
    std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(2 * n, 0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
        a[i][n + i] = 1;
    }
    mpq_class det = 1;
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[col], a[piv]);
        if (piv != col) det = -det;
        det *= a[col][col];
        mpq_class inv = 1 / a[col][col];
        for (auto& x : a[col]) x *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            mpq_class f = a[r][col];
            for (size_t j = 0; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
        }
    }
    if (det != 1 && det != -1) return std::nullopt;
    std::vector<std::vector<long>> out(n, std::vector<long>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            mpq_class v = a[i][n + j];
            out[i][j] = static_cast<long>(mpz_class(v.get_num() / v.get_den()).get_si());
        }
    return out;
}

} // namespace

bool LimitTree::meets_limit(const BoundaryBall& b) const {
    for (const auto& s : samples)
        if (ball_contains(b, s)) return true;
    return false;
}

LimitTree limit_tree(const SchottkyFactor& f, long depth) {
    LimitTree t;
    t.p = f.prime();
    size_t axis_len = f.rank() == 1 ? 1 : 3;
    auto words = enumerate_words(f, axis_len);
    std::vector<FixedPoints> fps;
    for (const auto& [w, m] : words) {
        if (w.empty()) continue;
        fps.push_back(fixed_points(m, t.p, f.precision()));
    }
    for (const auto& fp : fps) {
        t.samples.push_back(fp.attracting);
        t.samples.push_back(fp.repelling);
    }
    t.base = geodesic_between_ends(fps[0].attracting, fps[0].repelling, 0)[0];
    for (const auto& fp : fps) {
        auto path = geodesic_between_ends(fp.attracting, fp.repelling, depth);
        for (const auto& v : path) t.verts.insert(v);
        for (size_t i = 0; i + 1 < path.size(); ++i) {
            t.edges.insert({path[i], path[i + 1]});
            t.edges.insert({path[i + 1], path[i]});
        }
    }
    return t;
}

namespace {

FactorQuotient build_factor_quotient(const SchottkyFactor& f, long depth) {
    FactorQuotient q;
    q.tree = limit_tree(f, depth);
    q.factor = std::make_shared<SchottkyFactor>(f);
    unsigned long p = f.prime();

    std::vector<TreeVertex> vlist(q.tree.verts.begin(), q.tree.verts.end());
    std::unordered_map<TreeVertex, int, TreeVertexHash> vidx;
    for (size_t i = 0; i < vlist.size(); ++i) vidx[vlist[i]] = static_cast<int>(i);
    std::vector<DirectedEdge> elist(q.tree.edges.begin(), q.tree.edges.end());
    std::unordered_map<DirectedEdge, int, DirectedEdgeHash> eidx;
    for (size_t i = 0; i < elist.size(); ++i) eidx[elist[i]] = static_cast<int>(i);

    DSU vd(vlist.size()), ed(elist.size());
    for (size_t r = 1; r <= f.rank(); ++r) {
        for (int sign : {1, -1}) {
            auto m = f.letter_matrix(sign * static_cast<int>(r));
            for (size_t i = 0; i < vlist.size(); ++i) {
                auto it = vidx.find(vertex_action(m, vlist[i], p));
                if (it != vidx.end()) vd.join(static_cast<int>(i), it->second);
            }
            for (size_t i = 0; i < elist.size(); ++i) {
                auto it = eidx.find(edge_action(m, elist[i], p));
                if (it != eidx.end()) ed.join(static_cast<int>(i), it->second);
            }
        }
    }

    std::unordered_map<int, int> vmap, emap;
    for (size_t i = 0; i < vlist.size(); ++i) {
        int root = vd.find(static_cast<int>(i));
        if (!vmap.count(root)) {
            vmap[root] = q.nv++;
            q.vertex_rep.push_back(vlist[root]);
        }
        q.vclass[vlist[i]] = vmap[root];
    }
    for (size_t i = 0; i < elist.size(); ++i) {
        int root = ed.find(static_cast<int>(i));
        if (!emap.count(root)) {
            emap[root] = q.ne++;
            q.edge_rep.push_back(elist[root]);
        }
        q.eclass[elist[i]] = emap[root];
    }
    q.reverse_of.resize(q.ne);
    q.esource.resize(q.ne);
    q.etarget.resize(q.ne);
    for (int e = 0; e < q.ne; ++e) {
        q.reverse_of[e] = q.eclass.at(q.edge_rep[e].reversed());
        q.esource[e] = q.vclass.at(q.edge_rep[e].source);
        q.etarget[e] = q.vclass.at(q.edge_rep[e].target);
    }

    // Complete representative per vertex class: every limit-set direction
    // at the representative must be a window edge.
    std::vector<std::vector<TreeVertex>> members(q.nv);
    for (const auto& v : q.tree.verts) members[q.vclass.at(v)].push_back(v);
    q.out_edges.resize(q.nv);
    for (int c = 0; c < q.nv; ++c) {
        std::sort(members[c].begin(), members[c].end(),
                  [&](const TreeVertex& a, const TreeVertex& b) {
                      return tree_distance(a, q.tree.base, p) < tree_distance(b, q.tree.base, p);
                  });
        bool done = false;
        for (const auto& v : members[c]) {
            std::vector<int> out;
            bool complete = true;
            for (const auto& w : neighbors(v, p)) {
                if (!q.tree.meets_limit(ball_of_edge({v, w}, p))) continue;
                auto it = q.eclass.find({v, w});
                if (it == q.eclass.end()) {
                    complete = false;
                    break;
                }
                out.push_back(it->second);
            }
            if (complete && out.size() >= 2) {
                q.vertex_rep[c] = v;
                q.out_edges[c] = out;
                done = true;
                break;
            }
        }
        if (!done) throw DepthInsufficient("no complete representative for a vertex class");
    }

    // Betti number; the quotient graph must be connected.
    DSU comp(q.nv);
    for (int e = 0; e < q.ne; ++e) comp.join(q.esource[e], q.etarget[e]);
    int ncomp = 0;
    for (int c = 0; c < q.nv; ++c) ncomp += comp.find(c) == c ? 1 : 0;
    if (ncomp != 1) throw DepthInsufficient("quotient graph is disconnected at this depth");
    q.betti = q.ne / 2 - q.nv + 1;
    return q;
}

} // namespace

int FactorQuotient::locate(DirectedEdge e) const {
    unsigned long p = factor->prime();
    for (int iter = 0; iter < 400; ++iter) {
        auto it = eclass.find(e);
        if (it != eclass.end()) return it->second;
        long cur = tree_distance(e.source, tree.base, p) + tree_distance(e.target, tree.base, p);
        DirectedEdge best = e;
        long best_d = cur;
        for (size_t r = 1; r <= factor->rank(); ++r)
            for (int sign : {1, -1}) {
                auto cand = edge_action(factor->letter_matrix(sign * static_cast<int>(r)), e, p);
                long d = tree_distance(cand.source, tree.base, p) +
                         tree_distance(cand.target, tree.base, p);
                if (d < best_d) {
                    best_d = d;
                    best = cand;
                }
            }
        if (best_d >= cur) throw BallTooDeep();
        e = best;
    }
    throw BallTooDeep();
}

size_t QuotientComplex::dim() const {
    size_t d = 0;
    for (const auto& f : factors) d += f.has_value() ? 1 : 0;
    return d;
}

QuotientComplex quotient_complex(const PlecticGroup& g, long depth) {
    QuotientComplex qc;
    qc.group = std::make_shared<PlecticGroup>(g);
    for (size_t i = 0; i < g.places(); ++i) {
        if (g.factor(i).is_trivial())
            qc.factors.push_back(std::nullopt);
        else
            qc.factors.push_back(build_factor_quotient(g.factor(i).factor(), depth));
    }
    return qc;
}

namespace {

// Harmonic antisymmetric flows: the fundamental cycles of a spanning tree.
std::vector<std::vector<long>> cycle_flows(const FactorQuotient& q) {
    int root = q.vclass.at(q.tree.base);
    std::vector<int> parent_edge(q.nv, -1), depth(q.nv, -1);
    depth[root] = 0;
    std::vector<int> order{root};
    std::vector<bool> in_tree(q.ne, false);
    for (size_t head = 0; head < order.size(); ++head) {
        int v = order[head];
        for (int e : q.out_edges[v]) {
            int w = q.etarget[e];
            if (depth[w] != -1) continue;
            depth[w] = depth[v] + 1;
            parent_edge[w] = e;   // directed from parent into w
            in_tree[e] = in_tree[q.reverse_of[e]] = true;
            order.push_back(w);
        }
    }

    auto ascend = [&](int v, std::vector<long>& flow, long toward_root) {
        // toward_root +1 walks v -> parent as part of the cycle
        int e = parent_edge[v];
        flow[q.reverse_of[e]] += toward_root;
        flow[e] -= toward_root;
        return q.esource[e];
    };

    std::vector<std::vector<long>> flows;
    for (int e0 = 0; e0 < q.ne; ++e0) {
        if (in_tree[e0] || e0 > q.reverse_of[e0]) continue;
        std::vector<long> flow(q.ne, 0);
        flow[e0] += 1;
        flow[q.reverse_of[e0]] -= 1;
        int a = q.etarget[e0], b = q.esource[e0];
        // close the cycle: path a -> lca -> b through the tree
        while (depth[a] > depth[b]) a = ascend(a, flow, +1);
        while (depth[b] > depth[a]) b = ascend(b, flow, -1);
        while (a != b) {
            a = ascend(a, flow, +1);
            b = ascend(b, flow, -1);
        }
        flows.push_back(flow);
    }
    return flows;
}

} // namespace

HLattice invariant_measure_lattice(const PlecticGroup& g, long depth) {
    HLattice h;
    h.qc = quotient_complex(g, depth);
    h.flows.resize(g.places());
    std::vector<size_t> support = g.support();
    h.vanishing_support = support.size() != g.places();

    for (size_t place : support) {
        const auto& q = *h.qc.factors[place];
        const auto& f = *q.factor;
        auto flows = cycle_flows(q);
        size_t rank = f.rank();
        if (flows.size() != rank || static_cast<size_t>(q.betti) != rank)
            throw RankMismatch("factor Betti number " + std::to_string(q.betti) +
                               " does not match rank " + std::to_string(rank));

        // Normalize against the attracting certificate balls.
        std::vector<std::vector<long>> m(rank, std::vector<long>(rank));
        for (size_t k = 0; k < rank; ++k)
            for (size_t j = 0; j < rank; ++j) {
                auto e = edge_of_ball(f.letter_ball(static_cast<int>(j + 1)), f.prime());
                m[k][j] = flows[k][q.locate(e)];
            }
        auto inv = unimodular_inverse(m);
        if (!inv) throw RankMismatch("ball evaluation matrix is not unimodular");
        std::vector<std::vector<long>> normalized(rank, std::vector<long>(q.ne, 0));
        for (size_t i = 0; i < rank; ++i)
            for (size_t k = 0; k < rank; ++k)
                for (int e = 0; e < q.ne; ++e)
                    normalized[i][e] += (*inv)[i][k] * flows[k][e];
        h.flows[place] = std::move(normalized);
    }

    if (h.vanishing_support) {
        h.rank = 0;   // St vanishes unless the support is all of S
        return h;
    }
    h.rank = 1;
    for (size_t place : support) h.rank *= g.factor(place).rank();
    std::vector<size_t> tuple(support.size(), 0);
    for (size_t n = 0; n < h.rank; ++n) {
        h.basis.push_back(tuple);
        for (size_t k = support.size(); k-- > 0;) {
            if (++tuple[k] < g.factor(support[k]).rank()) break;
            tuple[k] = 0;
        }
    }
    return h;
}

long HLattice::eval_place(size_t place, size_t i, const BoundaryBall& b) const {
    const auto& q = *qc.factors[place];
    try {
        return flows[place][i][q.locate(edge_of_ball(b, q.factor->prime()))];
    } catch (const BallTooDeep&) {
        // off the limit tree: zero measure on either empty side
        if (!q.tree.meets_limit(b) || !q.tree.meets_limit(ball_complement(b))) return 0;
        throw;
    }
}

std::vector<long> measure_of_ball(const HLattice& h, const std::vector<BoundaryBall>& balls) {
    const auto& g = *h.qc.group;
    if (balls.size() != g.places()) throw ConfigError("need one ball per place");
    std::vector<size_t> support = g.support();
    std::vector<long> out;
    for (const auto& tuple : h.basis) {
        long v = 1;
        for (size_t k = 0; k < support.size() && v != 0; ++k)
            v *= h.eval_place(support[k], tuple[k], balls[support[k]]);
        out.push_back(v);
    }
    return out;
}

OrientationReport orientation_and_duality_report(const PlecticGroup& g, long depth) {
    OrientationReport r;
    std::vector<size_t> support = g.support();
    r.dim = support.size();
    if (support.empty()) {
        r.rank = 0;
    } else {
        auto h = invariant_measure_lattice(g, depth);
        r.rank = h.rank;
    }
    for (size_t i = 0; i < g.places(); ++i) {
        std::vector<int> chi;
        if (!g.factor(i).is_trivial())
            for (const auto& gen : g.factor(i).factor().gens())
                chi.push_back(orientation_character({gen}, {g.prime(i)}));
        r.chi.push_back(chi);
    }
    return r;
}

std::string OrientationReport::str() const {
    std::ostringstream out;
    out << "dim(T) = " << dim << ", rank(H) = " << rank << "\n";
    for (size_t i = 0; i < chi.size(); ++i) {
        out << "place " << i << " chi:";
        if (chi[i].empty()) out << " (trivial)";
        for (int c : chi[i]) out << " " << c;
        out << "\n";
    }
    return out.str();
}

std::string quotient_dot(const QuotientComplex& qc) {
    std::ostringstream out;
    out << "graph quotient {\n";
    for (size_t place = 0; place < qc.factors.size(); ++place) {
        if (!qc.factors[place]) continue;
        const auto& q = *qc.factors[place];
        out << "  subgraph cluster_p" << place << " {\n";
        out << "    label=\"place " << place << " (p=" << q.factor->prime() << ")\";\n";
        for (int v = 0; v < q.nv; ++v)
            out << "    p" << place << "v" << v << " [label=\"" << q.vertex_rep[v].str()
                << "\"];\n";
        for (int e = 0; e < q.ne; ++e) {
            if (e > q.reverse_of[e]) continue;
            out << "    p" << place << "v" << q.esource[e] << " -- p" << place << "v"
                << q.etarget[e] << " [label=\"e" << e << "\"];\n";
        }
        out << "  }\n";
    }
    out << "}\n";
    return out.str();
}

std::string basis_json(const HLattice& h) {
    nlohmann::json j = nlohmann::json::array();
    for (size_t place = 0; place < h.flows.size(); ++place) {
        if (!h.qc.factors[place]) continue;
        const auto& q = *h.qc.factors[place];
        for (size_t i = 0; i < h.flows[place].size(); ++i) {
            nlohmann::json rec;
            rec["place"] = place;
            rec["basis"] = i;
            nlohmann::json edges = nlohmann::json::array();
            for (int e = 0; e < q.ne; ++e) {
                if (h.flows[place][i][e] == 0 || e > q.reverse_of[e]) continue;
                edges.push_back({{"source", q.edge_rep[e].source.str()},
                                 {"target", q.edge_rep[e].target.str()},
                                 {"value", h.flows[place][i][e]}});
            }
            rec["edges"] = edges;
            j.push_back(rec);
        }
    }
    return j.dump(2);
}

} // namespace plectic
