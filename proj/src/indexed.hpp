#pragma once

// Integer-indexed views of systems used by the fixed-point engines.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "qspec/model.hpp"

namespace qspec::detail {

using IEdge = std::pair<std::uint32_t, StateId>;  // (label index, target)
using IEdgeSet = std::vector<IEdge>;

/// Interns labels and caches ⊑ and the label hemimetric between them.
class LabelTable {
public:
    explicit LabelTable(const LabelStructure& ls) : ls_(ls) {}

    std::uint32_t intern(const Label& l);
    IEdgeSet intern(const EdgeSet& edges);

    /// Must be called after all labels are interned.
    void finalize();

    bool leq(std::uint32_t a, std::uint32_t b) const { return leq_[a * n_ + b] != 0; }
    double dist(std::uint32_t a, std::uint32_t b) const { return dist_[a * n_ + b]; }
    const Label& label(std::uint32_t i) const { return labels_[i]; }
    std::size_t size() const { return labels_.size(); }
    const LabelStructure& structure() const { return ls_; }

private:
    const LabelStructure& ls_;
    std::vector<Label> labels_;
    std::map<Label, std::uint32_t> index_;
    std::size_t n_ = 0;
    std::vector<char> leq_;
    std::vector<double> dist_;
};

/// DMTS-shaped view: may edges and disjunctive must sets. ν-calculus
/// expressions map onto it with box as may and diamond as must.
struct ModalView {
    std::vector<StateId> initial;
    std::vector<IEdgeSet> may;
    std::vector<std::vector<IEdgeSet>> must;
    std::size_t size() const { return may.size(); }
};

struct AcceptanceView {
    std::vector<StateId> initial;
    std::vector<std::vector<IEdgeSet>> tran;
    std::size_t size() const { return tran.size(); }
};

ModalView make_view(const Dmts& d, LabelTable& table);
AcceptanceView make_view(const AcceptanceAutomaton& a, LabelTable& table);

} // namespace qspec::detail
