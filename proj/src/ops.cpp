#include "qspec/ops.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "qspec/errors.hpp"

namespace qspec {

namespace {

EdgeSet shifted(const EdgeSet& edges, StateId offset) {
    EdgeSet out = edges;
    for (auto& e : out) e.target += offset;
    return out;
}

std::string pair_name(const std::string& a, const std::string& b, char sep) {
    return "(" + a + sep + b + ")";
}

/// Reachable product construction shared by conjunction and composition.
class ProductBuilder {
public:
    using Key = std::pair<StateId, StateId>;

    template <class AddState>
    StateId id(const Key& key, AddState add_state) {
        auto [it, inserted] = ids_.try_emplace(key, 0);
        if (inserted) {
            it->second = add_state(key);
            work_.push_back(key);
        }
        return it->second;
    }

    bool next(Key& key) {
        if (work_.empty()) return false;
        key = work_.front();
        work_.pop_front();
        return true;
    }

    StateId at(const Key& key) const { return ids_.at(key); }

private:
    std::map<Key, StateId> ids_;
    std::deque<Key> work_;
};

} // namespace

Dmts disjoin(const Dmts& d1, const Dmts& d2) {
    Dmts d;
    const auto offset = static_cast<StateId>(d1.size());
    for (const auto& n : d1.names) d.add_state("1:" + n);
    for (const auto& n : d2.names) d.add_state("2:" + n);
    d.initial = d1.initial;
    for (auto s : d2.initial) d.initial.push_back(s + offset);
    for (StateId s = 0; s < d1.size(); ++s) {
        d.may[s] = d1.may[s];
        d.must[s] = d1.must[s];
    }
    for (StateId s = 0; s < d2.size(); ++s) {
        d.may[s + offset] = shifted(d2.may[s], offset);
        for (const auto& n : d2.must[s]) d.must[s + offset].push_back(shifted(n, offset));
    }
    d.normalize();
    return d;
}

AcceptanceAutomaton disjoin(const AcceptanceAutomaton& a1, const AcceptanceAutomaton& a2) {
    AcceptanceAutomaton a;
    const auto offset = static_cast<StateId>(a1.size());
    for (const auto& n : a1.names) a.add_state("1:" + n);
    for (const auto& n : a2.names) a.add_state("2:" + n);
    a.initial = a1.initial;
    for (auto s : a2.initial) a.initial.push_back(s + offset);
    for (StateId s = 0; s < a1.size(); ++s) a.tran[s] = a1.tran[s];
    for (StateId s = 0; s < a2.size(); ++s)
        for (const auto& m : a2.tran[s]) a.tran[s + offset].push_back(shifted(m, offset));
    a.normalize();
    return a;
}

Dmts conjoin(const Dmts& d1, const Dmts& d2, const LabelStructure& ls) {
    Dmts d;
    ProductBuilder pb;
    auto add = [&](const ProductBuilder::Key& k) { return d.add_state(pair_name(d1.names[k.first], d2.names[k.second], ',')); };
    for (auto s1 : d1.initial)
        for (auto s2 : d2.initial) d.initial.push_back(pb.id({s1, s2}, add));
    ProductBuilder::Key key;
    while (pb.next(key)) {
        const auto [s1, s2] = key;
        const StateId me = pb.at(key);
        EdgeSet may;
        for (const auto& e1 : d1.may[s1])
            for (const auto& e2 : d2.may[s2])
                if (auto c = conjoin(e1.label, e2.label, ls)) may.push_back({*c, pb.id({e1.target, e2.target}, add)});
        std::vector<EdgeSet> must;
        for (const auto& n1 : d1.must[s1]) {
            EdgeSet n;
            for (const auto& e1 : n1)
                for (const auto& e2 : d2.may[s2])
                    if (auto c = conjoin(e1.label, e2.label, ls)) n.push_back({*c, pb.id({e1.target, e2.target}, add)});
            must.push_back(std::move(n));
        }
        for (const auto& n2 : d2.must[s2]) {
            EdgeSet n;
            for (const auto& e2 : n2)
                for (const auto& e1 : d1.may[s1])
                    if (auto c = conjoin(e1.label, e2.label, ls)) n.push_back({*c, pb.id({e1.target, e2.target}, add)});
            must.push_back(std::move(n));
        }
        d.may[me] = std::move(may);
        d.must[me] = std::move(must);
    }
    d.normalize();
    return d;
}

AcceptanceAutomaton compose(const AcceptanceAutomaton& a1, const AcceptanceAutomaton& a2, const LabelStructure& ls) {
    AcceptanceAutomaton a;
    ProductBuilder pb;
    auto add = [&](const ProductBuilder::Key& k) { return a.add_state(pair_name(a1.names[k.first], a2.names[k.second], '|')); };
    for (auto s1 : a1.initial)
        for (auto s2 : a2.initial) a.initial.push_back(pb.id({s1, s2}, add));
    ProductBuilder::Key key;
    while (pb.next(key)) {
        const auto [s1, s2] = key;
        std::vector<EdgeSet> tran;
        for (const auto& m1 : a1.tran[s1])
            for (const auto& m2 : a2.tran[s2]) {
                EdgeSet m;
                for (const auto& e1 : m1)
                    for (const auto& e2 : m2)
                        if (auto c = synchronize(e1.label, e2.label, ls))
                            m.push_back({*c, pb.id({e1.target, e2.target}, add)});
                tran.push_back(std::move(m));
            }
        a.tran[pb.at(key)] = std::move(tran);
    }
    a.normalize();
    return a;
}

AcceptanceAutomaton split_disjoint(const AcceptanceAutomaton& a, std::vector<StateId>* origin) {
    std::vector<char> disjoint(a.size(), 1);
    for (StateId s = 0; s < a.size(); ++s) {
        const auto& t = a.tran[s];
        for (std::size_t i = 0; i < t.size() && disjoint[s]; ++i)
            for (std::size_t j = i + 1; j < t.size() && disjoint[s]; ++j)
                for (const auto& e : t[i])
                    if (std::binary_search(t[j].begin(), t[j].end(), e)) {
                        disjoint[s] = 0;
                        break;
                    }
    }

    AcceptanceAutomaton out;
    std::vector<StateId> orig;
    for (StateId s = 0; s < a.size(); ++s) {
        out.add_state(a.names[s]);
        orig.push_back(s);
    }
    out.initial = a.initial;
    // Copies are keyed by (parent origin, acceptance-set index, edge index).
    std::map<std::tuple<StateId, std::size_t, std::size_t>, StateId> copies;
    std::deque<StateId> work;
    for (StateId s = 0; s < a.size(); ++s) work.push_back(s);
    while (!work.empty()) {
        const StateId x = work.front();
        work.pop_front();
        const StateId o = orig[x];
        std::vector<EdgeSet> tran;
        for (std::size_t k = 0; k < a.tran[o].size(); ++k) {
            EdgeSet m;
            const auto& src = a.tran[o][k];
            for (std::size_t j = 0; j < src.size(); ++j) {
                StateId target = src[j].target;
                if (!disjoint[o]) {
                    auto [it, inserted] = copies.try_emplace({o, k, j}, 0);
                    if (inserted) {
                        it->second = out.add_state(a.names[target] + "~" + std::to_string(out.size()));
                        orig.push_back(target);
                        work.push_back(it->second);
                    }
                    target = it->second;
                }
                m.push_back({src[j].label, target});
            }
            tran.push_back(std::move(m));
        }
        out.tran[x] = std::move(tran);
    }
    out.normalize();
    if (origin) *origin = std::move(orig);
    return out;
}

PruneResult prune_inconsistent(const AcceptanceAutomaton& a) {
    std::vector<std::vector<EdgeSet>> tran = a.tran;
    std::vector<char> dead(a.size(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId s = 0; s < a.size(); ++s)
            if (!dead[s] && tran[s].empty()) {
                dead[s] = 1;
                changed = true;
            }
        for (StateId s = 0; s < a.size(); ++s) {
            auto& t = tran[s];
            const auto before = t.size();
            t.erase(std::remove_if(t.begin(), t.end(),
                                   [&](const EdgeSet& m) {
                                       return std::any_of(m.begin(), m.end(),
                                                          [&](const Edge& e) { return dead[e.target] != 0; });
                                   }),
                    t.end());
            if (t.size() != before) changed = true;
        }
    }

    std::vector<StateId> new_id(a.size(), static_cast<StateId>(-1));
    PruneResult r;
    std::deque<StateId> work;
    auto visit = [&](StateId s) {
        if (new_id[s] != static_cast<StateId>(-1)) return new_id[s];
        new_id[s] = r.aa.add_state(a.names[s]);
        r.origin.push_back(s);
        work.push_back(s);
        return new_id[s];
    };
    for (auto s : a.initial) r.aa.initial.push_back(visit(s));
    while (!work.empty()) {
        const StateId s = work.front();
        work.pop_front();
        for (const auto& m : tran[s])
            for (const auto& e : m) visit(e.target);
    }
    for (StateId n = 0; n < r.aa.size(); ++n) {
        for (const auto& m : tran[r.origin[n]]) {
            EdgeSet mapped;
            for (const auto& e : m) mapped.push_back({e.label, new_id[e.target]});
            r.aa.tran[n].push_back(std::move(mapped));
        }
    }
    r.aa.normalize();
    for (auto s : r.aa.initial)
        if (r.aa.tran[s].empty()) r.inconsistent_initial.push_back(s);
    return r;
}

LatticeBounds lattice_bounds(const LabelStructure& ls) {
    LatticeBounds b;
    const auto top_labels = ls.maximal_labels();
    if (top_labels.size() > 16)
        throw BudgetError("the top specification needs " + std::to_string(top_labels.size()) +
                          " maximal labels; the limit is 16");
    const StateId s = b.top.add_state("top");
    b.top.initial = {s};
    const std::size_t k = top_labels.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        EdgeSet m;
        for (std::size_t j = 0; j < k; ++j)
            if (mask >> j & 1) m.push_back({top_labels[j], s});
        b.top.tran[s].push_back(std::move(m));
    }
    b.top.normalize();
    return b;
}

} // namespace qspec
