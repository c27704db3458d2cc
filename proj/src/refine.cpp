#include "qspec/refine.hpp"

#include <deque>

#include "indexed.hpp"

namespace qspec {

using detail::AcceptanceView;
using detail::IEdgeSet;
using detail::LabelTable;
using detail::ModalView;

namespace {

class Relation {
public:
    Relation(std::size_t n1, std::size_t n2) : n2_(n2), bits_(n1 * n2, 1) {}
    bool has(StateId a, StateId b) const { return bits_[a * n2_ + b] != 0; }
    void erase(StateId a, StateId b) { bits_[a * n2_ + b] = 0; }

private:
    std::size_t n2_;
    std::vector<char> bits_;
};

// Every (a1,t1) in n1 has a matching (a2,t2) in n2.
bool covers(const IEdgeSet& n1, const IEdgeSet& n2, const Relation& rel, const LabelTable& table) {
    for (const auto& [a1, t1] : n1) {
        bool found = false;
        for (const auto& [a2, t2] : n2)
            if (table.leq(a1, a2) && rel.has(t1, t2)) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

// Same, with the quantifiers read from the right.
bool covered_by(const IEdgeSet& n1, const IEdgeSet& n2, const Relation& rel, const LabelTable& table) {
    for (const auto& [a2, t2] : n2) {
        bool found = false;
        for (const auto& [a1, t1] : n1)
            if (table.leq(a1, a2) && rel.has(t1, t2)) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

std::vector<char> reachable(std::size_t n, const std::vector<StateId>& initial,
                            const std::vector<std::vector<StateId>>& succ) {
    std::vector<char> seen(n, 0);
    std::deque<StateId> work(initial.begin(), initial.end());
    for (auto s : initial) seen[s] = 1;
    while (!work.empty()) {
        auto s = work.front();
        work.pop_front();
        for (auto t : succ[s])
            if (!seen[t]) {
                seen[t] = 1;
                work.push_back(t);
            }
    }
    return seen;
}

std::vector<std::vector<StateId>> successors(const ModalView& v) {
    std::vector<std::vector<StateId>> succ(v.size());
    for (StateId s = 0; s < v.size(); ++s) {
        for (const auto& e : v.may[s]) succ[s].push_back(e.second);
        for (const auto& n : v.must[s])
            for (const auto& e : n) succ[s].push_back(e.second);
    }
    return succ;
}

std::vector<std::vector<StateId>> successors(const AcceptanceView& v) {
    std::vector<std::vector<StateId>> succ(v.size());
    for (StateId s = 0; s < v.size(); ++s)
        for (const auto& m : v.tran[s])
            for (const auto& e : m) succ[s].push_back(e.second);
    return succ;
}

template <class View, class Check>
RefinementWitness greatest_relation(const View& v1, const View& v2, Check check) {
    const std::size_t n1 = v1.size(), n2 = v2.size();
    Relation rel(n1, n2);
    std::vector<std::string> why(n1 * n2);
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId s1 = 0; s1 < n1; ++s1)
            for (StateId s2 = 0; s2 < n2; ++s2) {
                if (!rel.has(s1, s2)) continue;
                if (auto clause = check(s1, s2, rel)) {
                    rel.erase(s1, s2);
                    why[s1 * n2 + s2] = *clause;
                    changed = true;
                }
            }
    }

    RefinementWitness w;
    w.holds = true;
    for (auto s1 : v1.initial) {
        bool matched = false;
        for (auto s2 : v2.initial)
            if (rel.has(s1, s2)) {
                matched = true;
                break;
            }
        if (!matched) {
            w.holds = false;
            if (!w.failure) {
                RefinementFailure f;
                f.left = s1;
                if (!v2.initial.empty()) {
                    f.right = v2.initial.front();
                    f.clause = why[s1 * n2 + v2.initial.front()];
                } else {
                    f.clause = "no initial state on the right";
                }
                w.failure = f;
            }
        }
    }
    auto r1 = reachable(n1, v1.initial, successors(v1));
    auto r2 = reachable(n2, v2.initial, successors(v2));
    for (StateId s1 = 0; s1 < n1; ++s1)
        for (StateId s2 = 0; s2 < n2; ++s2)
            if (r1[s1] && r2[s2] && rel.has(s1, s2)) w.relation.emplace_back(s1, s2);
    return w;
}

RefinementWitness mr_modal(const ModalView& v1, const ModalView& v2, const LabelTable& table,
                           const char* may_word, const char* must_word) {
    auto check = [&](StateId s1, StateId s2, const Relation& rel) -> std::optional<std::string> {
        for (const auto& e1 : v1.may[s1]) {
            bool found = false;
            for (const auto& e2 : v2.may[s2])
                if (table.leq(e1.first, e2.first) && rel.has(e1.second, e2.second)) {
                    found = true;
                    break;
                }
            if (!found) return std::string(may_word) + " " + to_string(table.label(e1.first)) + " is not matched";
        }
        for (std::size_t k = 0; k < v2.must[s2].size(); ++k) {
            const auto& n2 = v2.must[s2][k];
            bool found = false;
            for (const auto& n1 : v1.must[s1])
                if (covers(n1, n2, rel, table)) {
                    found = true;
                    break;
                }
            if (!found) return std::string(must_word) + " #" + std::to_string(k) + " on the right is not matched";
        }
        return std::nullopt;
    };
    return greatest_relation(v1, v2, check);
}

} // namespace

RefinementWitness mr_dmts(const Dmts& d1, const Dmts& d2, const LabelStructure& ls) {
    LabelTable table(ls);
    auto v1 = detail::make_view(d1, table);
    auto v2 = detail::make_view(d2, table);
    table.finalize();
    return mr_modal(v1, v2, table, "may transition", "must set");
}

RefinementWitness mr_nu(const NuExpr& n1, const NuExpr& n2, const LabelStructure& ls) {
    LabelTable table(ls);
    auto v1 = detail::make_view(hd_unchecked(n1), table);
    auto v2 = detail::make_view(hd_unchecked(n2), table);
    table.finalize();
    return mr_modal(v1, v2, table, "box entry", "diamond obligation");
}

RefinementWitness mr_aa(const AcceptanceAutomaton& a1, const AcceptanceAutomaton& a2, const LabelStructure& ls) {
    LabelTable table(ls);
    auto v1 = detail::make_view(a1, table);
    auto v2 = detail::make_view(a2, table);
    table.finalize();
    auto check = [&](StateId s1, StateId s2, const Relation& rel) -> std::optional<std::string> {
        for (std::size_t k = 0; k < v1.tran[s1].size(); ++k) {
            const auto& m1 = v1.tran[s1][k];
            bool found = false;
            for (const auto& m2 : v2.tran[s2])
                if (covers(m1, m2, rel, table) && covered_by(m1, m2, rel, table)) {
                    found = true;
                    break;
                }
            if (!found) return "acceptance set #" + std::to_string(k) + " on the left is not matched";
        }
        return std::nullopt;
    };
    return greatest_relation(v1, v2, check);
}

RefinementWitness modal_refinement(const System& s1, const System& s2, const LabelStructure& ls) {
    const auto f1 = formalism_of(s1), f2 = formalism_of(s2);
    auto as_dmts = [](const System& s) {
        if (const auto* l = std::get_if<Lts>(&s)) return std::get<Dmts>(embed_lts(*l, Formalism::dmts));
        return std::get<Dmts>(s);
    };
    const bool modal1 = f1 == Formalism::lts || f1 == Formalism::dmts;
    const bool modal2 = f2 == Formalism::lts || f2 == Formalism::dmts;
    if (modal1 && modal2) return mr_dmts(as_dmts(s1), as_dmts(s2), ls);
    if (f1 == Formalism::nu && f2 == Formalism::nu) return mr_nu(std::get<NuExpr>(s1), std::get<NuExpr>(s2), ls);
    return mr_aa(to_aa(s1), to_aa(s2), ls);
}

bool mc_nu(const Lts& i, const NuExpr& n, const LabelStructure& ls) {
    LabelTable table(ls);
    std::vector<IEdgeSet> out;
    for (const auto& e : i.out) out.push_back(table.intern(e));
    auto view = detail::make_view(hd_unchecked(n), table);
    table.finalize();

    const std::size_t ns = i.size(), nx = n.size();
    // sigma[x * ns + s]: state s is in the current assignment of x.
    std::vector<char> sigma(nx * ns, 1);
    auto in = [&](StateId x, StateId s) { return sigma[x * ns + s] != 0; };
    auto holds = [&](StateId s, StateId x) {
        for (const auto& obligation : view.must[x]) {
            bool ok = false;
            for (const auto& [a, y] : obligation) {
                for (const auto& [b, t] : out[s])
                    if (table.leq(b, a) && in(y, t)) {
                        ok = true;
                        break;
                    }
                if (ok) break;
            }
            if (!ok) return false;
        }
        for (const auto& [b, t] : out[s]) {
            bool ok = false;
            for (const auto& [a, y] : view.may[x])
                if (table.leq(b, a) && in(y, t)) {
                    ok = true;
                    break;
                }
            if (!ok) return false;
        }
        return true;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId x = 0; x < nx; ++x)
            for (StateId s = 0; s < ns; ++s)
                if (in(x, s) && !holds(s, x)) {
                    sigma[x * ns + s] = 0;
                    changed = true;
                }
    }
    for (auto x0 : n.initial)
        if (ns > 0 && in(x0, i.initial)) return true;
    return false;
}

} // namespace qspec
