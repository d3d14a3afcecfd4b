#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "plectic/config.hpp"

using namespace plectic;
using nlohmann::json;

namespace {

struct InvariantFailure : Error {
    explicit InvariantFailure(const std::string& what) : Error(what) {}
};

void emit(const std::string& text, const std::string& out) {
    std::string body = text;
    if (body.empty() || body.back() != '\n') body += '\n';
    if (out.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw ConfigError("cannot write " + out);
        f << body;
    }
}

json ball_json(const BoundaryBall& b) {
    return {{"center", rational_str(b.center)}, {"n", b.n}, {"complement", b.complement}};
}

json quadext_json(const QuadExtScalar& z) { return json::parse(serialize_quadext(z)); }

const char* class_name(LimitSetClass c) {
    switch (c) {
        case LimitSetClass::Empty: return "empty";
        case LimitSetClass::TwoPoints: return "two-points";
        default: return "perfect";
    }
}

// [2] - [3] at every place; the points are units away from every shipped
// certificate ball.
PlecticCycle default_cycle(const PlecticGroup& g) {
    CycleTerm t;
    for (size_t pl = 0; pl < g.places(); ++pl) {
        int prec = g.factor(pl).is_trivial() ? 32 : g.factor(pl).factor().precision();
        t.places.push_back({ProjPoint::from_rational(2, g.prime(pl), prec),
                            ProjPoint::from_rational(3, g.prime(pl), prec)});
    }
    return {{t}};
}

PlecticCycle inverse_cycle(const PlecticCycle& d) {
    PlecticCycle r = d;
    for (auto& t : r.terms)
        for (auto& pr : t.places) std::swap(pr.x, pr.y);
    return r;
}

int cmd_limitset(const PlecticGroup& g, long depth, const std::string& out) {
    json places = json::array();
    for (size_t pl = 0; pl < g.places(); ++pl) {
        json e{{"prime", g.prime(pl)},
               {"class", class_name(classify_limit_set(g.factor(pl)))}};
        if (!g.factor(pl).is_trivial()) {
            auto la = limit_set_approx(g, pl, static_cast<size_t>(depth));
            json pts = json::array(), cover = json::array();
            for (const auto& x : la.points) pts.push_back(x.str());
            for (size_t k = 0; k < la.cover.size(); ++k) {
                json b = ball_json(la.cover[k]);
                b["word"] = la.cover_words[k].str();
                cover.push_back(b);
            }
            e["points"] = pts;
            e["cover"] = cover;
        }
        places.push_back(e);
    }
    emit(json{{"places", places}}.dump(2), out);
    return 0;
}

int cmd_tree(const PlecticGroup& g, long radius, const std::string& format,
             const std::string& out) {
    auto qc = quotient_complex(g, radius);
    if (format == "dot") {
        emit(quotient_dot(qc), out);
        return 0;
    }
    json places = json::array();
    for (size_t pl = 0; pl < qc.factors.size(); ++pl) {
        json e{{"prime", g.prime(pl)}};
        if (qc.factors[pl]) {
            const auto& q = *qc.factors[pl];
            e["vertices"] = q.nv;
            e["edges"] = q.ne / 2;
            e["betti"] = q.betti;
        }
        places.push_back(e);
    }
    emit(json{{"places", places}}.dump(2), out);
    return 0;
}

int cmd_measures(const PlecticGroup& g, long depth, const std::string& out) {
    emit(basis_json(invariant_measure_lattice(g, depth)), out);
    return 0;
}

int cmd_periods(const PlecticGroup& g, long depth, int digits, const std::string& out) {
    auto h = invariant_measure_lattice(g, depth);
    auto lat = period_lattice(h, depth);
    json places = json::array();
    int symmetry = std::numeric_limits<int>::max();
    for (size_t k = 0; k < lat.support.size(); ++k) {
        const auto& q = lat.periods[k];
        json mat = json::array();
        for (const auto& row : q) {
            json r = json::array();
            for (const auto& z : row) r.push_back(quadext_json(z));
            mat.push_back(r);
        }
        for (size_t i = 0; i < q.size(); ++i)
            for (size_t j = i + 1; j < q.size(); ++j)
                symmetry = std::min(symmetry, agreement_digits(q[i][j], q[j][i]));
        places.push_back(json{{"place", lat.support[k]},
                              {"prime", lat.primes[k]},
                              {"periods", mat}});
    }
    json j{{"depth", depth}, {"places", places}};
    if (symmetry != std::numeric_limits<int>::max()) {
        j["symmetry_digits"] = symmetry;
        if (digits > 0 && symmetry < digits)
            throw NonStabilized("period symmetry below requested digits");
    }
    emit(j.dump(2), out);
    return 0;
}

int cmd_integrate(const PlecticGroup& g, const std::string& cycle_path, long depth,
                  int digits, const std::string& out) {
    auto h = invariant_measure_lattice(g, depth);
    auto d = cycle_path.empty() ? default_cycle(g) : load_cycle(cycle_path, g);
    auto r = integrate_riemann(h, d, depth, digits);
    json coords = json::array();
    for (const auto& c : r.coords) coords.push_back(json::parse(serialize_tensor(c)));
    emit(json{{"depth", r.depth},
              {"stable_digits", r.stable_digits},
              {"stabilized", r.stabilized},
              {"coords", coords}}
             .dump(2),
         out);
    return 0;
}

int cmd_aj(const PlecticGroup& g, const std::string& cycle_path, long depth,
           const std::string& out) {
    auto h = invariant_measure_lattice(g, depth);
    auto lat = period_lattice(h, depth);
    auto d = cycle_path.empty() ? default_cycle(g) : load_cycle(cycle_path, g);
    auto x = abel_jacobi(h, lat, d, depth);
    json comps = json::array();
    for (const auto& row : x.comps) {
        json r = json::array();
        for (const auto& z : row) r.push_back(quadext_json(z));
        comps.push_back(r);
    }
    emit(json{{"rank", h.rank}, {"support", lat.support}, {"comps", comps}}.dump(2), out);
    return 0;
}

int cmd_hecke(const PlecticGroup& src, const std::string& morphism_path, long depth,
              const std::string& out) {
    auto spec = load_morphism(morphism_path);
    auto tgt = load_group(spec.target);
    auto f = validate_morphism(spec.g, src, tgt, spec.word_bound);
    auto hs = invariant_measure_lattice(src, depth);
    auto ht = invariant_measure_lattice(tgt, depth);
    auto m = lattice_maps(f, hs, ht);
    // transfer after restriction must be multiplication by the index
    bool comp_ok = true;
    for (size_t i = 0; i < ht.rank; ++i)
        for (size_t j = 0; j < ht.rank; ++j) {
            long s = 0;
            for (size_t k = 0; k < hs.rank; ++k) s += m.push[i][k] * m.pull[k][j];
            if (s != (i == j ? static_cast<long>(f.index) : 0)) comp_ok = false;
        }
    if (!comp_ok) throw InvariantFailure("transfer o restriction is not x index");
    json cosets = json::array(), conj = json::array();
    for (size_t k = 0; k < f.support.size(); ++k) {
        json reps = json::array(), words = json::array();
        for (const auto& w : f.coset_reps[k]) reps.push_back(w.str());
        for (const auto& w : f.conj_words[k]) words.push_back(w.str());
        cosets.push_back(reps);
        conj.push_back(words);
    }
    emit(json{{"index", f.index},
              {"coset_reps", cosets},
              {"conjugated_generators", conj},
              {"push", m.push},
              {"pull", m.pull},
              {"push_pull_is_index", comp_ok}}
             .dump(2),
         out);
    return 0;
}

// ---- verify ----

struct Verifier {
    int failures = 0;
    void check(bool ok, const std::string& name) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    }
};

mpq_class random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-50, 50), den(1, 50);
    long n = num(rng);
    if (n == 0) n = 1;
    mpq_class q(n, den(rng));
    q.canonicalize();
    return q;
}

void verify_padic(Verifier& v, const PlecticGroup& g, std::mt19937_64& rng) {
    bool ring = true, inverse = true, roundtrip = true;
    for (size_t pl = 0; pl < g.places(); ++pl) {
        unsigned long p = g.prime(pl);
        for (int k = 0; k < 10; ++k) {
            auto a = PadicScalar::from_rational(random_rational(rng), p, 32);
            auto b = PadicScalar::from_rational(random_rational(rng), p, 32);
            auto c = PadicScalar::from_rational(random_rational(rng), p, 32);
            ring = ring && eq_to((a + b) * c, a * c + b * c, 30);
            inverse = inverse && (a * a.inv()).is_one_to(30);
            roundtrip = roundtrip && eq_to(deserialize_padic(serialize_padic(a), p), a, 32);
        }
    }
    v.check(ring, "padic-arith: distributivity");
    v.check(inverse, "padic-arith: multiplicative inverse");
    v.check(roundtrip, "padic-arith: serialization round trip");
}

void verify_proj(Verifier& v, const PlecticGroup& g, std::mt19937_64& rng) {
    bool inv_pt = true, inv_ball = true;
    for (size_t pl = 0; pl < g.places(); ++pl) {
        if (g.factor(pl).is_trivial()) continue;
        const auto& f = g.factor(pl).factor();
        for (size_t i = 0; i < f.rank(); ++i) {
            const auto& m = f.gen(i);
            for (int k = 0; k < 5; ++k) {
                std::optional<mpq_class> z = random_rational(rng);
                inv_pt = inv_pt && m.inverse().apply(m.apply(z)) == z;
            }
            for (int letter : {1, -1}) {
                auto b = f.letter_ball(letter * static_cast<int>(i + 1));
                auto back = ball_action(m.inverse(), ball_action(m, b, f.prime()), f.prime());
                inv_ball = inv_ball && ball_equal(b, back, f.prime());
            }
        }
    }
    v.check(inv_pt, "proj-geom: Moebius inverse on points");
    v.check(inv_ball, "proj-geom: ball action inverse");
}

void verify_tree(Verifier& v, const PlecticGroup& g, std::mt19937_64& rng) {
    bool equiv = true, partition = true;
    for (size_t pl = 0; pl < g.places(); ++pl) {
        if (g.factor(pl).is_trivial()) continue;
        const auto& f = g.factor(pl).factor();
        unsigned long p = f.prime();
        for (int k = 0; k < 10; ++k) {
            // a + b*w with b != 0: a point of Omega, never in P1(Qp)
            auto z = ProjPoint::from_quadext(QuadExtScalar::unramified(
                PadicScalar::from_rational(random_rational(rng), p, f.precision()),
                PadicScalar::from_rational(random_rational(rng), p, f.precision())));
            auto u = reduction_map(z.z);
            for (size_t i = 0; i < f.rank(); ++i) {
                auto gz = moebius_apply(f.gen(i), z);
                if (gz.infinite) continue;
                equiv = equiv && reduction_map(gz.z) == vertex_action(f.gen(i), u, p);
            }
            // the p+1 edges out of any vertex partition P1(Qp)
            std::optional<mpq_class> x = random_rational(rng);
            for (const auto& vert : {TreeVertex::standard(), u}) {
                int hits = 0;
                for (const auto& w : neighbors(vert, p))
                    if (ball_contains(ball_of_edge({vert, w}, p), x, p)) ++hits;
                partition = partition && hits == 1;
            }
        }
    }
    v.check(equiv, "bt-tree: reduction map equivariance");
    v.check(partition, "bt-tree: vertex ball partition");
}

void verify_groups(Verifier& v, const PlecticGroup& g, long depth) {
    bool classes = true, contain = true;
    for (size_t pl = 0; pl < g.places(); ++pl) {
        auto cls = classify_limit_set(g.factor(pl));
        size_t r = g.factor(pl).rank();
        classes = classes && cls == (r == 0 ? LimitSetClass::Empty
                                    : r == 1 ? LimitSetClass::TwoPoints
                                             : LimitSetClass::Perfect);
        if (r == 0) continue;
        auto la = limit_set_approx(g, pl, static_cast<size_t>(depth));
        for (const auto& x : la.points) {
            bool inside = false;
            for (const auto& b : la.cover) inside = inside || ball_contains(b, x);
            contain = contain && inside;
        }
    }
    v.check(classes, "plectic-groups: limit set classification");
    v.check(contain, "plectic-groups: cover contains the word fixed points");
}

void verify_measures(Verifier& v, const PlecticGroup& g, long depth) {
    auto h = invariant_measure_lattice(g, depth);
    size_t expect = 1;
    for (size_t pl = 0; pl < g.places(); ++pl) expect *= g.factor(pl).rank();
    v.check(h.rank == expect, "steinberg-measures: rank equals the product of ranks");
    bool antisym = true, harmonic = true, mass = true, normal = true;
    for (size_t k = 0; k < h.flows.size(); ++k) {
        size_t pl = h.qc.group->support()[k];
        const auto& q = *h.qc.factors[pl];
        const auto& f = g.factor(pl).factor();
        for (size_t i = 0; i < h.flows[k].size(); ++i) {
            const auto& flow = h.flows[k][i];
            for (int e = 0; e < q.ne; ++e) antisym = antisym && flow[e] == -flow[q.reverse_of[e]];
            for (int c = 0; c < q.nv; ++c) {
                long sum = 0;
                for (int e : q.out_edges[c]) sum += flow[e];
                harmonic = harmonic && sum == 0;
            }
            long total = 0;
            for (const auto& w : neighbors(TreeVertex::standard(), f.prime()))
                total += h.eval_place(pl, i, ball_of_edge({TreeVertex::standard(), w}, f.prime()));
            mass = mass && total == 0;
            for (size_t j = 0; j < f.rank(); ++j)
                normal = normal &&
                         h.eval_place(pl, i, f.letter_ball(static_cast<int>(j + 1))) ==
                             (i == j ? 1 : 0);
        }
    }
    v.check(antisym, "steinberg-measures: antisymmetry");
    v.check(harmonic, "steinberg-measures: harmonicity");
    v.check(mass, "steinberg-measures: total mass zero");
    v.check(normal, "steinberg-measures: certificate-ball normalization");
}

void verify_integration(Verifier& v, const PlecticGroup& g, long depth, int digits) {
    if (g.support().size() != g.places()) {
        v.check(true, "integration: skipped (trivial place, St = 0)");
        return;
    }
    auto h = invariant_measure_lattice(g, depth);
    auto d = default_cycle(g);
    auto r = integrate_riemann(h, d, depth, 0);
    std::vector<PGL2Elem> gam;
    for (size_t pl = 0; pl < g.places(); ++pl) gam.push_back(g.factor(pl).factor().gen(0));
    auto r2 = integrate_riemann(h, translate_cycle(d, gam), depth, 0);
    bool inv = true;
    for (size_t i = 0; i < r.coords.size(); ++i)
        inv = inv && tensor_agreement(r.coords[i], r2.coords[i]) >= digits;
    v.check(inv, "integration: Gamma-invariance of the integral");
    if (g.places() >= 2) {
        auto fr = fubini_check(h, d, depth, digits);
        v.check(fr.ok, "integration: Fubini factorization");
    }
}

void verify_jacobian(Verifier& v, const PlecticGroup& g, long depth, int digits) {
    if (g.support().size() != g.places()) {
        v.check(true, "jacobian: skipped (trivial place, St = 0)");
        return;
    }
    auto h = invariant_measure_lattice(g, depth);
    auto lat = period_lattice(h, depth);
    auto d = default_cycle(g);
    auto x = abel_jacobi(h, lat, d, depth);
    auto y = abel_jacobi(h, lat, inverse_cycle(d), depth);
    v.check(jacobian_mul(x, y, lat, h).is_identity(digits),
            "jacobian: AJ(D) + AJ(-D) = 0");
    bool sym = true;
    for (const auto& q : lat.periods)
        for (size_t i = 0; i < q.size(); ++i)
            for (size_t j = i + 1; j < q.size(); ++j)
                sym = sym && agreement_digits(q[i][j], q[j][i]) >= digits;
    v.check(sym, "jacobian: period matrix symmetry");
}

void verify_hecke(Verifier& v, const PlecticGroup& g, const std::string& morphism_path,
                  long depth) {
    if (morphism_path.empty()) {
        v.check(true, "hecke: skipped (no --morphism)");
        return;
    }
    auto spec = load_morphism(morphism_path);
    auto tgt = load_group(spec.target);
    auto f = validate_morphism(spec.g, g, tgt, spec.word_bound);
    auto hs = invariant_measure_lattice(g, depth);
    auto ht = invariant_measure_lattice(tgt, depth);
    auto m = lattice_maps(f, hs, ht);
    bool comp = true;
    for (size_t i = 0; i < ht.rank; ++i)
        for (size_t j = 0; j < ht.rank; ++j) {
            long s = 0;
            for (size_t k = 0; k < hs.rank; ++k) s += m.push[i][k] * m.pull[k][j];
            comp = comp && s == (i == j ? static_cast<long>(f.index) : 0);
        }
    v.check(comp, "hecke: transfer o restriction = x index");
}

int cmd_verify(const PlecticGroup& g, const std::string& suite, long depth, int digits,
               unsigned long seed, const std::string& morphism_path) {
    Verifier v;
    std::mt19937_64 rng(seed);
    auto want = [&](const char* name) { return suite == "all" || suite == name; };
    if (want("padic-arith")) verify_padic(v, g, rng);
    if (want("proj-geom")) verify_proj(v, g, rng);
    if (want("bt-tree")) verify_tree(v, g, rng);
    if (want("plectic-groups")) verify_groups(v, g, depth);
    if (want("steinberg-measures")) verify_measures(v, g, depth);
    if (want("integration")) verify_integration(v, g, depth, digits);
    if (want("jacobian")) verify_jacobian(v, g, depth, digits);
    if (want("hecke")) verify_hecke(v, g, morphism_path, depth);
    if (v.failures > 0) {
        std::cout << v.failures << " invariant check(s) failed\n";
        return 4;
    }
    std::cout << "all checks passed\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"plectic uniformization toolkit"};
    app.require_subcommand(1);

    std::string config, cycle, morphism, format = "json", suite = "all", out;
    long depth = 6, wordlen = 8, radius = 3;
    int digits = 0;
    unsigned long seed = 1;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--config", config, "group config path")->required();
        c->add_option("--out", out, "write the artifact to a file");
    };
    auto* ls = app.add_subcommand("limitset", "limit set approximation");
    add_common(ls);
    ls->add_option("--depth", depth);
    auto* tr = app.add_subcommand("tree", "quotient graph of the limit tree");
    add_common(tr);
    tr->add_option("--radius", radius);
    tr->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}));
    auto* me = app.add_subcommand("measures", "invariant measure lattice");
    add_common(me);
    me->add_option("--depth", depth);
    auto* pe = app.add_subcommand("periods", "period matrices");
    add_common(pe);
    pe->add_option("--depth", depth);
    pe->add_option("--digits", digits);
    auto* in = app.add_subcommand("integrate", "multiplicative integral of a cycle");
    add_common(in);
    in->add_option("--depth", depth);
    in->add_option("--digits", digits);
    in->add_option("--cycle", cycle, "cycle file");
    auto* aj = app.add_subcommand("aj", "Abel-Jacobi class of a cycle");
    add_common(aj);
    aj->add_option("--depth", depth);
    aj->add_option("--cycle", cycle, "cycle file");
    auto* he = app.add_subcommand("hecke", "validate a morphism and its lattice maps");
    add_common(he);
    he->add_option("--depth", depth);
    he->add_option("--morphism", morphism, "morphism spec file")->required();
    auto* ve = app.add_subcommand("verify", "run the invariant suites");
    add_common(ve);
    ve->add_option("--depth", depth);
    ve->add_option("--digits", digits);
    ve->add_option("--wordlen", wordlen);
    ve->add_option("--seed", seed);
    ve->add_option("--morphism", morphism, "morphism spec file");
    ve->add_option("--suite", suite)
        ->check(CLI::IsMember({"all", "padic-arith", "proj-geom", "bt-tree", "plectic-groups",
                               "steinberg-measures", "integration", "jacobian", "hecke"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        auto g = load_group(config);
        if (ls->parsed()) return cmd_limitset(g, depth, out);
        if (tr->parsed()) return cmd_tree(g, radius, format, out);
        if (me->parsed()) return cmd_measures(g, depth, out);
        if (pe->parsed()) return cmd_periods(g, depth, digits, out);
        if (in->parsed()) return cmd_integrate(g, cycle, depth, digits, out);
        if (aj->parsed()) return cmd_aj(g, cycle, depth, out);
        if (he->parsed()) return cmd_hecke(g, morphism, depth, out);
        if (ve->parsed())
            return cmd_verify(g, suite, depth, digits == 0 ? 10 : digits, seed, morphism);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const CertificateError& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return 2;
    } catch (const NotASubgroup& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return 2;
    } catch (const BoundExhausted& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return 2;
    } catch (const NonStabilized& e) {
        std::cerr << "not stabilized: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
