#include "indexed.hpp"

namespace qspec::detail {

std::uint32_t LabelTable::intern(const Label& l) {
    auto [it, inserted] = index_.try_emplace(l, static_cast<std::uint32_t>(labels_.size()));
    if (inserted) labels_.push_back(l);
    return it->second;
}

IEdgeSet LabelTable::intern(const EdgeSet& edges) {
    IEdgeSet out;
    out.reserve(edges.size());
    for (const auto& e : edges) out.emplace_back(intern(e.label), e.target);
    return out;
}

void LabelTable::finalize() {
    n_ = labels_.size();
    leq_.assign(n_ * n_, 0);
    dist_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            leq_[i * n_ + j] = refines(labels_[i], labels_[j], ls_) ? 1 : 0;
            dist_[i * n_ + j] = label_distance(labels_[i], labels_[j], ls_);
        }
}

ModalView make_view(const Dmts& d, LabelTable& table) {
    ModalView v;
    v.initial = d.initial;
    v.may.reserve(d.size());
    v.must.resize(d.size());
    for (StateId s = 0; s < d.size(); ++s) {
        v.may.push_back(table.intern(d.may[s]));
        for (const auto& n : d.must[s]) v.must[s].push_back(table.intern(n));
    }
    return v;
}

AcceptanceView make_view(const AcceptanceAutomaton& a, LabelTable& table) {
    AcceptanceView v;
    v.initial = a.initial;
    v.tran.resize(a.size());
    for (StateId s = 0; s < a.size(); ++s)
        for (const auto& m : a.tran[s]) v.tran[s].push_back(table.intern(m));
    return v;
}

} // namespace qspec::detail
