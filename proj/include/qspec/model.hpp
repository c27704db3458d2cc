#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qspec/labels.hpp"

namespace qspec {

using StateId = std::uint32_t;

struct Edge {
    Label label;
    StateId target = 0;
    auto operator<=>(const Edge&) const = default;
};

/// Sorted, duplicate-free set of (label, target) pairs.
using EdgeSet = std::vector<Edge>;

void normalize(EdgeSet& edges);
void normalize(std::vector<EdgeSet>& sets);

struct Lts {
    std::vector<std::string> names;
    StateId initial = 0;
    std::vector<EdgeSet> out;

    std::size_t size() const { return names.size(); }
    StateId add_state(std::string name);
    void add_transition(StateId from, Label label, StateId to);
    void normalize();
    auto operator<=>(const Lts&) const = default;
};

struct Dmts {
    std::vector<std::string> names;
    std::vector<StateId> initial;
    std::vector<EdgeSet> may;
    std::vector<std::vector<EdgeSet>> must;

    std::size_t size() const { return names.size(); }
    StateId add_state(std::string name);
    void normalize();
    auto operator<=>(const Dmts&) const = default;
};

struct AcceptanceAutomaton {
    std::vector<std::string> names;
    std::vector<StateId> initial;
    std::vector<std::vector<EdgeSet>> tran;

    std::size_t size() const { return names.size(); }
    StateId add_state(std::string name);
    void normalize();
    auto operator<=>(const AcceptanceAutomaton&) const = default;
};

/// Normal-form equation system. box[x] holds every [a]-obligation as a
/// (a, y) pair; diamond[x] holds the disjunctive <a>-obligations.
struct NuExpr {
    std::vector<std::string> names;
    std::vector<StateId> initial;
    std::vector<std::vector<EdgeSet>> diamond;
    std::vector<EdgeSet> box;

    std::size_t size() const { return names.size(); }
    StateId add_state(std::string name);
    void normalize();
    auto operator<=>(const NuExpr&) const = default;
};

using System = std::variant<Lts, Dmts, AcceptanceAutomaton, NuExpr>;

enum class Formalism { lts, dmts, aa, nu };

std::string_view to_string(Formalism f);
std::optional<Formalism> parse_formalism(std::string_view text);
Formalism formalism_of(const System& sys);
std::size_t state_count(const System& sys);
const std::vector<std::string>& state_names(const System& sys);

struct SpecDocument {
    LabelStructure labels;
    std::map<std::string, System> systems;

    const System& get(const std::string& name) const;
    bool operator==(const SpecDocument&) const = default;
};

struct Violation {
    std::string location;
    std::string rule;
};

/// Well-formedness check; an empty result means the system is valid.
std::vector<Violation> validate(const System& sys, const LabelStructure& ls);

/// True iff the system is an implementation in its own formalism.
bool is_implementation(const System& sys, const LabelStructure& ls);

// Translations between the formalisms.

AcceptanceAutomaton db(const Dmts& d, std::size_t max_candidates = 20);
Dmts bd(const AcceptanceAutomaton& a, std::size_t max_states = 100000);
NuExpr ddh(const Dmts& d);
/// Throws ValidationError if a diamond obligation has no covering box entry.
Dmts hd(const NuExpr& n, const LabelStructure& ls);
/// hd without the cover check; used internally for refinement.
Dmts hd_unchecked(const NuExpr& n);
System embed_lts(const Lts& i, Formalism target);

/// Any system as an acceptance automaton (LTS embedded, DMTS via db, nu via hd then db).
AcceptanceAutomaton to_aa(const System& sys);

} // namespace qspec
