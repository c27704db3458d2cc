#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qspec/model.hpp"

namespace qspec {

using StatePair = std::pair<StateId, StateId>;

struct RefinementFailure {
    StateId left = 0;
    std::optional<StateId> right;  // empty when the right side has no initial state
    std::string clause;
};

struct RefinementWitness {
    bool holds = false;
    /// Greatest refinement relation, restricted to pairs of reachable states.
    std::vector<StatePair> relation;
    std::optional<RefinementFailure> failure;
};

RefinementWitness mr_dmts(const Dmts& d1, const Dmts& d2, const LabelStructure& ls);
RefinementWitness mr_aa(const AcceptanceAutomaton& a1, const AcceptanceAutomaton& a2, const LabelStructure& ls);
RefinementWitness mr_nu(const NuExpr& n1, const NuExpr& n2, const LabelStructure& ls);

/// Modal refinement between arbitrary systems. Equal formalisms use the
/// native definition (LTS as DMTS); mixed pairs are compared as acceptance automata.
RefinementWitness modal_refinement(const System& s1, const System& s2, const LabelStructure& ls);

/// Greatest-fixed-point model checking of an LTS against a normal-form expression.
bool mc_nu(const Lts& i, const NuExpr& n, const LabelStructure& ls);

} // namespace qspec
