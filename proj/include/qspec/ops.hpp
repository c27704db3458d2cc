#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qspec/model.hpp"
#include "qspec/refine.hpp"

namespace qspec {

/// Disjoint union. States of the second operand follow those of the first.
Dmts disjoin(const Dmts& d1, const Dmts& d2);
AcceptanceAutomaton disjoin(const AcceptanceAutomaton& a1, const AcceptanceAutomaton& a2);

/// Product conjunction over the pairs reachable from initial pairs.
Dmts conjoin(const Dmts& d1, const Dmts& d2, const LabelStructure& ls);

/// Structural composition under the structure's synchronization operator.
AcceptanceAutomaton compose(const AcceptanceAutomaton& a1, const AcceptanceAutomaton& a2, const LabelStructure& ls);

struct QuotientOptions {
    bool split_divisor = true;
    std::size_t postra_limit = 16;
    std::size_t max_states = 100000;
    std::size_t max_labels = 256;
};

struct QuotientResult {
    AcceptanceAutomaton aa;
    /// For every quotient state, its (dividend state, divisor state) pairs.
    std::vector<std::vector<StatePair>> pairs;
};

/// The quotient a3 / a1. Throws CapabilityError for set labels and for
/// weighted labels under csp, BudgetError when a limit is exceeded.
QuotientResult quotient(const AcceptanceAutomaton& a3, const AcceptanceAutomaton& a1, const LabelStructure& ls,
                        const QuotientOptions& options = {});

/// Copies states so that the acceptance sets of every state are pairwise disjoint.
AcceptanceAutomaton split_disjoint(const AcceptanceAutomaton& a, std::vector<StateId>* origin = nullptr);

struct PruneResult {
    AcceptanceAutomaton aa;
    /// origin[s] is the state of the input that s came from.
    std::vector<StateId> origin;
    /// Initial states (in the result) whose acceptance set became empty.
    std::vector<StateId> inconsistent_initial;
};

PruneResult prune_inconsistent(const AcceptanceAutomaton& a);

struct LatticeBounds {
    AcceptanceAutomaton bottom;
    AcceptanceAutomaton top;
};

/// Top uses the maximal labels of the structure; throws BudgetError beyond 16 of them.
LatticeBounds lattice_bounds(const LabelStructure& ls);

} // namespace qspec
