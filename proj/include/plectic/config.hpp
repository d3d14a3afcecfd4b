#pragma once

#include <string>

#include "plectic/errors.hpp"
#include "plectic/hecke.hpp"
#include "plectic/integration.hpp"

namespace plectic {

std::string read_file(const std::string& path);

// Group config: {"prime": p, "precision": N, "factors": [...]} where each
// factor is {"kind": "schottky", "generators": [...], "balls": [...]},
// {"kind": "cyclic", "generator": ...} or {"kind": "trivial"}. A factor may
// override "prime"/"precision"; balls are pairs [B+, B-] of
// {"center": "...", "n": k, "complement": bool}.
PlecticGroup group_from_json(const std::string& text);
PlecticGroup load_group(const std::string& path);

// Cycle file: list of {"coeff": n, "places": [{"x": "...", "y": "..."}...]},
// points are rationals or "inf".
PlecticCycle cycle_from_json(const std::string& text, const PlecticGroup& g);
PlecticCycle load_cycle(const std::string& path, const PlecticGroup& g);

// Morphism spec: {"g": [matrix per place], "target": group-config path
// (relative to the spec file), "word_bound": n}.
struct MorphismSpec {
    std::vector<PGL2Elem> g;
    std::string target;
    size_t word_bound = 12;
};
MorphismSpec load_morphism(const std::string& path);

}
