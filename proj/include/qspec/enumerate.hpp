#pragma once

#include <cstddef>
#include <vector>

#include "qspec/model.hpp"
#include "qspec/quant.hpp"

namespace qspec {

/// All LTS over the given implementation labels with at most max_states
/// states, every state reachable, one representative per isomorphism class.
struct LtsUniverse {
    std::vector<Lts> systems;
    bool truncated = false;
};

LtsUniverse enumerate_lts(std::size_t max_states, const std::vector<Label>& gamma, std::size_t limit = 2'000'000);

struct ImplementationSet {
    std::vector<Lts> implementations;
    bool truncated = false;
};

/// The members of the universe that modally refine the specification.
ImplementationSet implementations_upto(const System& spec, const LabelStructure& ls, const LtsUniverse& universe);
ImplementationSet implementations_upto(const Dmts& spec, std::size_t max_states, const std::vector<Label>& gamma,
                                       const LabelStructure& ls);

struct BoundedVerdict {
    bool holds = false;
    /// Set when the universe was truncated; the verdict is then only indicative.
    bool truncated = false;
};

/// Implementation-set inclusion checked over the enumerated universe.
BoundedVerdict tr_oracle(const System& s1, const System& s2, const LabelStructure& ls, const LtsUniverse& universe);
BoundedVerdict tr_oracle(const Dmts& s1, const Dmts& s2, std::size_t max_states, const std::vector<Label>& gamma,
                         const LabelStructure& ls);

struct BoundedValue {
    double value = 0.0;
    bool truncated = false;
};

/// sup over enumerated implementations of s1 of inf over those of s2 of their refinement distance.
BoundedValue thorough_distance_oracle(const System& s1, const System& s2, const LabelStructure& ls,
                                      const TraceDistanceSpec& m, const LtsUniverse& universe,
                                      double tol = kDefaultTolerance);
BoundedValue thorough_distance_oracle(const Dmts& s1, const Dmts& s2, const TraceDistanceSpec& m,
                                      std::size_t max_states, const std::vector<Label>& gamma,
                                      const LabelStructure& ls, double tol = kDefaultTolerance);

} // namespace qspec
