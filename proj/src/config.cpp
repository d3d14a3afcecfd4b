#include "plectic/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace plectic {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("bad json: ") + e.what());
    }
}

mpq_class rational_field(const json& j) {
    if (j.is_number_integer()) return mpq_class(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw ConfigError("expected integer or \"num/den\" string, got " + j.dump());
}

PGL2Elem matrix_field(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
        !j[1].is_array() || j[1].size() != 2)
        throw ConfigError("matrix must be a 2x2 array");
    return PGL2Elem(rational_field(j[0][0]), rational_field(j[0][1]),
                    rational_field(j[1][0]), rational_field(j[1][1]));
}

BoundaryBall ball_field(const json& j) {
    if (!j.is_object()) throw ConfigError("ball must be an object");
    BoundaryBall b;
    b.center = rational_field(j.at("center"));
    b.n = j.at("n").get<long>();
    b.complement = j.value("complement", false);
    return b;
}

GroupFactor factor_field(const json& j, unsigned long prime, int prec) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("factor must be an object with a \"kind\"");
    prime = j.value("prime", prime);
    prec = j.value("precision", prec);
    if (prime < 2) throw ConfigError("factor is missing a prime");
    std::string kind = j["kind"].get<std::string>();
    if (kind == "trivial") return GroupFactor::trivial(prime);
    if (kind == "cyclic")
        return GroupFactor::cyclic(prime, prec, matrix_field(j.at("generator")));
    if (kind == "schottky") {
        std::vector<PGL2Elem> gens;
        for (const auto& m : j.at("generators")) gens.push_back(matrix_field(m));
        std::vector<std::pair<BoundaryBall, BoundaryBall>> balls;
        for (const auto& pr : j.at("balls")) {
            if (!pr.is_array() || pr.size() != 2)
                throw ConfigError("ball entry must be a pair [B+, B-]");
            balls.emplace_back(ball_field(pr[0]), ball_field(pr[1]));
        }
        if (balls.size() != gens.size())
            throw ConfigError("one ball pair per generator required");
        return GroupFactor::schottky(SchottkyFactor(prime, prec, gens, balls));
    }
    throw ConfigError("unknown factor kind: " + kind);
}

ProjPoint point_field(const json& j, unsigned long prime, int prec) {
    if (j.is_string() && j.get<std::string>() == "inf")
        return ProjPoint::infinity(prime, prec);
    return ProjPoint::from_rational(rational_field(j), prime, prec);
}

}  // namespace

PlecticGroup group_from_json(const std::string& text) {
    json j = parse_json(text);
    if (!j.is_object() || !j.contains("factors"))
        throw ConfigError("group config needs a \"factors\" list");
    unsigned long prime = j.value("prime", 0ul);
    int prec = j.value("precision", 32);
    if (prec <= 0) throw ConfigError("precision must be positive");
    std::vector<GroupFactor> factors;
    for (const auto& f : j["factors"]) factors.push_back(factor_field(f, prime, prec));
    if (factors.empty()) throw ConfigError("group config needs at least one factor");
    return PlecticGroup(std::move(factors));
}

PlecticGroup load_group(const std::string& path) {
    return group_from_json(read_file(path));
}

PlecticCycle cycle_from_json(const std::string& text, const PlecticGroup& g) {
    json j = parse_json(text);
    if (!j.is_array()) throw ConfigError("cycle file must be a list of terms");
    PlecticCycle d;
    for (const auto& t : j) {
        CycleTerm term;
        term.coeff = t.at("coeff").get<long>();
        const auto& pls = t.at("places");
        if (pls.size() != g.places())
            throw ConfigError("cycle term has the wrong number of places");
        for (size_t pl = 0; pl < g.places(); ++pl) {
            int prec = g.factor(pl).is_trivial() ? 32 : g.factor(pl).factor().precision();
            term.places.push_back({point_field(pls[pl].at("x"), g.prime(pl), prec),
                                   point_field(pls[pl].at("y"), g.prime(pl), prec)});
        }
        d.terms.push_back(std::move(term));
    }
    if (d.terms.empty()) throw ConfigError("cycle file has no terms");
    return d;
}

PlecticCycle load_cycle(const std::string& path, const PlecticGroup& g) {
    return cycle_from_json(read_file(path), g);
}

MorphismSpec load_morphism(const std::string& path) {
    json j = parse_json(read_file(path));
    MorphismSpec spec;
    for (const auto& m : j.at("g")) spec.g.push_back(matrix_field(m));
    spec.word_bound = j.value("word_bound", 12ul);
    std::string target = j.at("target").get<std::string>();
    spec.target = (std::filesystem::path(path).parent_path() / target).string();
    return spec;
}

}  // namespace plectic
