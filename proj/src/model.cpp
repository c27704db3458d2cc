#include "qspec/model.hpp"

#include <algorithm>
#include <set>

#include "qspec/errors.hpp"

namespace qspec {

void normalize(EdgeSet& edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

void normalize(std::vector<EdgeSet>& sets) {
    for (auto& s : sets) normalize(s);
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
}

namespace {

void normalize_ids(std::vector<StateId>& ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
}

std::string edge_text(const std::vector<std::string>& names, StateId from, const Edge& e) {
    std::string target = e.target < names.size() ? names[e.target] : "#" + std::to_string(e.target);
    return names[from] + " -" + to_string(e.label) + "-> " + target;
}

void check_edges(const EdgeSet& edges, StateId from, const std::vector<std::string>& names,
                 const LabelStructure& ls, std::vector<Violation>& out) {
    for (const auto& e : edges) {
        if (e.target >= names.size())
            out.push_back({edge_text(names, from, e), "target state out of range"});
        try {
            ls.check_label(e.label);
        } catch (const Error& err) {
            out.push_back({edge_text(names, from, e), err.what()});
        }
    }
}

void check_initial(const std::vector<StateId>& initial, std::size_t n, std::vector<Violation>& out) {
    for (auto s : initial)
        if (s >= n) out.push_back({"initial", "initial state out of range"});
}

bool covered(const Edge& e, const EdgeSet& may, const LabelStructure& ls) {
    for (const auto& m : may)
        if (m.target == e.target && m.label.index() == e.label.index() && refines(e.label, m.label, ls))
            return true;
    return false;
}

} // namespace

StateId Lts::add_state(std::string name) {
    names.push_back(std::move(name));
    out.emplace_back();
    return static_cast<StateId>(names.size() - 1);
}

void Lts::add_transition(StateId from, Label label, StateId to) { out[from].push_back({std::move(label), to}); }

void Lts::normalize() {
    for (auto& e : out) qspec::normalize(e);
}

StateId Dmts::add_state(std::string name) {
    names.push_back(std::move(name));
    may.emplace_back();
    must.emplace_back();
    return static_cast<StateId>(names.size() - 1);
}

void Dmts::normalize() {
    normalize_ids(initial);
    for (auto& e : may) qspec::normalize(e);
    for (auto& m : must) qspec::normalize(m);
}

StateId AcceptanceAutomaton::add_state(std::string name) {
    names.push_back(std::move(name));
    tran.emplace_back();
    return static_cast<StateId>(names.size() - 1);
}

void AcceptanceAutomaton::normalize() {
    normalize_ids(initial);
    for (auto& t : tran) qspec::normalize(t);
}

StateId NuExpr::add_state(std::string name) {
    names.push_back(std::move(name));
    diamond.emplace_back();
    box.emplace_back();
    return static_cast<StateId>(names.size() - 1);
}

void NuExpr::normalize() {
    normalize_ids(initial);
    for (auto& d : diamond) qspec::normalize(d);
    for (auto& b : box) qspec::normalize(b);
}

std::string_view to_string(Formalism f) {
    switch (f) {
    case Formalism::lts: return "lts";
    case Formalism::dmts: return "dmts";
    case Formalism::aa: return "aa";
    case Formalism::nu: return "nu";
    }
    return "?";
}

std::optional<Formalism> parse_formalism(std::string_view text) {
    if (text == "lts") return Formalism::lts;
    if (text == "dmts") return Formalism::dmts;
    if (text == "aa") return Formalism::aa;
    if (text == "nu") return Formalism::nu;
    return std::nullopt;
}

Formalism formalism_of(const System& sys) { return static_cast<Formalism>(sys.index()); }

std::size_t state_count(const System& sys) {
    return std::visit([](const auto& s) { return s.size(); }, sys);
}

const std::vector<std::string>& state_names(const System& sys) {
    return std::visit([](const auto& s) -> const std::vector<std::string>& { return s.names; }, sys);
}

const System& SpecDocument::get(const std::string& name) const {
    auto it = systems.find(name);
    if (it == systems.end()) throw MismatchError("no system named '" + name + "'");
    return it->second;
}

// ---------------------------------------------------------------- validation

std::vector<Violation> validate(const System& sys, const LabelStructure& ls) {
    std::vector<Violation> out;
    if (const auto* l = std::get_if<Lts>(&sys)) {
        if (l->size() == 0) {
            out.push_back({"initial", "an LTS needs at least one state"});
            return out;
        }
        if (l->initial >= l->size()) out.push_back({"initial", "initial state out of range"});
        for (StateId s = 0; s < l->size(); ++s) {
            check_edges(l->out[s], s, l->names, ls, out);
            for (const auto& e : l->out[s])
                if (e.label.index() == static_cast<std::size_t>(ls.kind()) && !is_implementation_label(e.label, ls))
                    out.push_back({edge_text(l->names, s, e), "not an implementation label"});
        }
    } else if (const auto* d = std::get_if<Dmts>(&sys)) {
        check_initial(d->initial, d->size(), out);
        for (StateId s = 0; s < d->size(); ++s) {
            check_edges(d->may[s], s, d->names, ls, out);
            for (const auto& n : d->must[s]) {
                check_edges(n, s, d->names, ls, out);
                for (const auto& e : n)
                    if (e.target < d->size() && !covered(e, d->may[s], ls))
                        out.push_back({"must " + edge_text(d->names, s, e), "no covering may transition"});
            }
        }
    } else if (const auto* a = std::get_if<AcceptanceAutomaton>(&sys)) {
        check_initial(a->initial, a->size(), out);
        for (StateId s = 0; s < a->size(); ++s)
            for (const auto& m : a->tran[s]) check_edges(m, s, a->names, ls, out);
    } else {
        const auto& n = std::get<NuExpr>(sys);
        check_initial(n.initial, n.size(), out);
        for (StateId x = 0; x < n.size(); ++x) {
            check_edges(n.box[x], x, n.names, ls, out);
            for (const auto& obligation : n.diamond[x]) {
                check_edges(obligation, x, n.names, ls, out);
                for (const auto& e : obligation)
                    if (e.target < n.size() && !covered(e, n.box[x], ls))
                        out.push_back({"diamond " + edge_text(n.names, x, e), "no covering box entry"});
            }
        }
    }
    return out;
}

bool is_implementation(const System& sys, const LabelStructure& ls) {
    auto impl_edges = [&](const EdgeSet& edges) {
        return std::all_of(edges.begin(), edges.end(),
                           [&](const Edge& e) { return is_implementation_label(e.label, ls); });
    };
    if (const auto* l = std::get_if<Lts>(&sys)) {
        for (const auto& e : l->out)
            if (!impl_edges(e)) return false;
        return true;
    }
    if (const auto* d = std::get_if<Dmts>(&sys)) {
        if (d->initial.size() != 1) return false;
        for (StateId s = 0; s < d->size(); ++s) {
            if (!impl_edges(d->may[s])) return false;
            if (d->must[s].size() != d->may[s].size()) return false;
            for (const auto& e : d->may[s])
                if (!std::binary_search(d->must[s].begin(), d->must[s].end(), EdgeSet{e})) return false;
        }
        return true;
    }
    if (const auto* a = std::get_if<AcceptanceAutomaton>(&sys)) {
        if (a->initial.size() != 1) return false;
        for (const auto& t : a->tran)
            if (t.size() != 1 || !impl_edges(t.front())) return false;
        return true;
    }
    const auto& n = std::get<NuExpr>(sys);
    if (n.initial.size() != 1) return false;
    for (StateId x = 0; x < n.size(); ++x) {
        if (!impl_edges(n.box[x])) return false;
        std::vector<EdgeSet> expected;
        for (const auto& e : n.box[x]) expected.push_back({e});
        if (expected != n.diamond[x]) return false;
    }
    return true;
}

// ---------------------------------------------------------------- translations

AcceptanceAutomaton db(const Dmts& d, std::size_t max_candidates) {
    AcceptanceAutomaton a;
    a.names = d.names;
    a.initial = d.initial;
    a.tran.resize(d.size());
    for (StateId s = 0; s < d.size(); ++s) {
        EdgeSet candidates = d.may[s];
        for (const auto& n : d.must[s]) candidates.insert(candidates.end(), n.begin(), n.end());
        normalize(candidates);
        if (candidates.size() > max_candidates)
            throw BudgetError("state " + d.names[s] + " has " + std::to_string(candidates.size()) +
                              " candidate transitions; the limit is " + std::to_string(max_candidates));
        const std::size_t k = candidates.size();
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
            EdgeSet m;
            for (std::size_t j = 0; j < k; ++j)
                if (mask >> j & 1) m.push_back(candidates[j]);
            bool ok = true;
            for (const auto& n : d.must[s]) {
                bool hit = false;
                for (const auto& e : n)
                    if (std::binary_search(m.begin(), m.end(), e)) {
                        hit = true;
                        break;
                    }
                if (!hit) {
                    ok = false;
                    break;
                }
            }
            if (ok) a.tran[s].push_back(std::move(m));
        }
        normalize(a.tran[s]);
    }
    return a;
}

Dmts bd(const AcceptanceAutomaton& a, std::size_t max_states) {
    Dmts d;
    // first_of[s] is the DMTS id of (s, Tran(s)[0]); ids of a state's pairs are contiguous.
    std::vector<StateId> first_of(a.size());
    for (StateId s = 0; s < a.size(); ++s) {
        first_of[s] = static_cast<StateId>(d.size());
        for (std::size_t k = 0; k < a.tran[s].size(); ++k) {
            if (d.size() >= max_states)
                throw BudgetError("translation to DMTS exceeds the state budget of " + std::to_string(max_states));
            d.add_state(a.names[s] + "." + std::to_string(k));
        }
    }
    for (auto s0 : a.initial)
        for (std::size_t k = 0; k < a.tran[s0].size(); ++k) d.initial.push_back(first_of[s0] + static_cast<StateId>(k));
    for (StateId s = 0; s < a.size(); ++s) {
        for (std::size_t k = 0; k < a.tran[s].size(); ++k) {
            const StateId me = first_of[s] + static_cast<StateId>(k);
            for (const auto& e : a.tran[s][k]) {
                EdgeSet n;
                for (std::size_t k2 = 0; k2 < a.tran[e.target].size(); ++k2)
                    n.push_back({e.label, first_of[e.target] + static_cast<StateId>(k2)});
                d.may[me].insert(d.may[me].end(), n.begin(), n.end());
                d.must[me].push_back(std::move(n));
            }
        }
    }
    d.normalize();
    return d;
}

NuExpr ddh(const Dmts& d) {
    NuExpr n;
    n.names = d.names;
    n.initial = d.initial;
    n.diamond = d.must;
    n.box = d.may;
    return n;
}

Dmts hd_unchecked(const NuExpr& n) {
    Dmts d;
    d.names = n.names;
    d.initial = n.initial;
    d.may = n.box;
    d.must = n.diamond;
    return d;
}

Dmts hd(const NuExpr& n, const LabelStructure& ls) {
    for (StateId x = 0; x < n.size(); ++x)
        for (const auto& obligation : n.diamond[x])
            for (const auto& e : obligation)
                if (!covered(e, n.box[x], ls))
                    throw ValidationError("diamond obligation " + edge_text(n.names, x, e) +
                                          " has no covering box entry");
    return hd_unchecked(n);
}

System embed_lts(const Lts& i, Formalism target) {
    switch (target) {
    case Formalism::lts: return i;
    case Formalism::dmts: {
        Dmts d;
        d.names = i.names;
        d.initial = {i.initial};
        d.may = i.out;
        d.must.resize(i.size());
        for (StateId s = 0; s < i.size(); ++s)
            for (const auto& e : i.out[s]) d.must[s].push_back({e});
        d.normalize();
        return d;
    }
    case Formalism::aa: {
        AcceptanceAutomaton a;
        a.names = i.names;
        a.initial = {i.initial};
        for (const auto& e : i.out) a.tran.push_back({e});
        a.normalize();
        return a;
    }
    case Formalism::nu: {
        NuExpr n;
        n.names = i.names;
        n.initial = {i.initial};
        n.box = i.out;
        n.diamond.resize(i.size());
        for (StateId s = 0; s < i.size(); ++s)
            for (const auto& e : i.out[s]) n.diamond[s].push_back({e});
        n.normalize();
        return n;
    }
    }
    return i;
}

AcceptanceAutomaton to_aa(const System& sys) {
    if (const auto* l = std::get_if<Lts>(&sys)) return std::get<AcceptanceAutomaton>(embed_lts(*l, Formalism::aa));
    if (const auto* d = std::get_if<Dmts>(&sys)) return db(*d);
    if (const auto* a = std::get_if<AcceptanceAutomaton>(&sys)) return *a;
    return db(hd_unchecked(std::get<NuExpr>(sys)));
}

} // namespace qspec
