#include "session.hpp"

#include <cmath>
#include <set>

#include "qspec/enumerate.hpp"
#include "qspec/errors.hpp"
#include "qspec/refine.hpp"

namespace qspec::session {

using nlohmann::json;

const System& lookup(const SpecDocument& doc, const std::string& name) { return doc.get(name); }

namespace {

void collect(const EdgeSet& edges, std::vector<Label>& out) {
    for (const auto& e : edges) out.push_back(e.label);
}

std::vector<Label> labels_of(const System& s) {
    std::vector<Label> out;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Lts>) {
                for (const auto& e : x.out) collect(e, out);
            } else if constexpr (std::is_same_v<T, Dmts>) {
                for (const auto& e : x.may) collect(e, out);
            } else if constexpr (std::is_same_v<T, AcceptanceAutomaton>) {
                for (const auto& sets : x.tran)
                    for (const auto& m : sets) collect(m, out);
            } else {
                for (const auto& e : x.box) collect(e, out);
                for (const auto& sets : x.diamond)
                    for (const auto& m : sets) collect(m, out);
            }
        },
        s);
    return out;
}

Dmts as_dmts(const System& s) {
    if (const auto* l = std::get_if<Lts>(&s)) return std::get<Dmts>(embed_lts(*l, Formalism::dmts));
    if (const auto* d = std::get_if<Dmts>(&s)) return *d;
    if (const auto* a = std::get_if<AcceptanceAutomaton>(&s)) return bd(*a);
    return hd_unchecked(std::get<NuExpr>(s));
}

} // namespace

std::vector<Label> oracle_alphabet(const SpecDocument& doc, const System& a, const System& b) {
    const LabelStructure& ls = doc.labels;
    std::set<Label> gamma;
    switch (ls.kind()) {
    case LabelKind::discrete:
        for (const auto& s : ls.alphabet())
            if (is_implementation_label(discrete(s), ls)) gamma.insert(discrete(s));
        break;
    case LabelKind::set:
        for (const auto& s : ls.alphabet()) gamma.insert(label_set({s}));
        break;
    case LabelKind::weighted: {
        std::vector<Label> used = labels_of(a);
        for (auto& l : labels_of(b)) used.push_back(std::move(l));
        for (const auto& l : used) {
            const auto& w = std::get<WeightedLabel>(l);
            const Interval& iv = w.interval;
            if (std::isfinite(iv.lo) && !iv.lo_open) gamma.insert(weighted(w.action, iv.lo, iv.lo));
            if (std::isfinite(iv.hi) && !iv.hi_open) gamma.insert(weighted(w.action, iv.hi, iv.hi));
            if (std::isfinite(iv.lo) && std::isfinite(iv.hi) && iv.lo < iv.hi) {
                const double mid = (iv.lo + iv.hi) / 2;
                gamma.insert(weighted(w.action, mid, mid));
            }
        }
        break;
    }
    }
    return {gamma.begin(), gamma.end()};
}

LtsUniverse oracle_universe(const SpecDocument& doc, const System& a, const System& b, const Options& o) {
    return enumerate_lts(o.max_states, oracle_alphabet(doc, a, b), o.budget);
}

json refine_report(const SpecDocument& doc, const std::string& left, const std::string& right,
                   const RefinementWitness& w) {
    const auto& ln = state_names(doc.get(left));
    const auto& rn = state_names(doc.get(right));
    // Mixed formalisms are compared as acceptance automata, whose state names can differ.
    auto name = [](const std::vector<std::string>& names, StateId s) {
        return s < names.size() ? json(names[s]) : json(s);
    };
    json relation = json::array();
    for (const auto& [s1, s2] : w.relation) relation.push_back({name(ln, s1), name(rn, s2)});
    json j{{"left", left}, {"right", right}, {"holds", w.holds}, {"relation", relation}};
    if (w.failure) {
        json f{{"left", name(ln, w.failure->left)}, {"clause", w.failure->clause}};
        f["right"] = w.failure->right ? name(rn, *w.failure->right) : json(nullptr);
        j["failure"] = f;
    }
    return j;
}

System compose_op(const SpecDocument& doc, const System& a, const System& b) {
    return compose(to_aa(a), to_aa(b), doc.labels);
}

System conjoin_op(const SpecDocument& doc, const System& a, const System& b) {
    return conjoin(as_dmts(a), as_dmts(b), doc.labels);
}

System disjoin_op(const System& a, const System& b) {
    if (std::holds_alternative<AcceptanceAutomaton>(a) || std::holds_alternative<AcceptanceAutomaton>(b))
        return disjoin(to_aa(a), to_aa(b));
    return disjoin(as_dmts(a), as_dmts(b));
}

System quotient_op(const SpecDocument& doc, const System& dividend, const System& divisor, const Options& o) {
    QuotientOptions q;
    q.split_divisor = o.split_divisor;
    q.postra_limit = o.postra_limit;
    q.max_states = o.budget;
    auto result = quotient(to_aa(dividend), to_aa(divisor), doc.labels, q);
    if (o.prune) return prune_inconsistent(result.aa).aa;
    return result.aa;
}

System prune_op(const System& a) { return prune_inconsistent(to_aa(a)).aa; }

System translate_op(const SpecDocument& doc, const System& s, Formalism target, const Options& o) {
    if (const auto* l = std::get_if<Lts>(&s)) return embed_lts(*l, target);
    switch (target) {
    case Formalism::lts:
        throw CapabilityError("only an lts can be translated to lts");
    case Formalism::dmts:
        if (const auto* a = std::get_if<AcceptanceAutomaton>(&s)) return bd(*a, o.budget);
        if (const auto* n = std::get_if<NuExpr>(&s)) return hd(*n, doc.labels);
        return s;
    case Formalism::aa:
        return to_aa(s);
    case Formalism::nu:
        if (const auto* a = std::get_if<AcceptanceAutomaton>(&s)) return ddh(bd(*a, o.budget));
        if (const auto* d = std::get_if<Dmts>(&s)) return ddh(*d);
        return s;
    }
    return s;
}

const Lts& as_lts(const System& s, const std::string& name) {
    if (const auto* l = std::get_if<Lts>(&s)) return *l;
    throw MismatchError("system " + name + " is not an lts");
}

NuExpr as_nu(const System& s, const std::string& name) {
    if (const auto* n = std::get_if<NuExpr>(&s)) return *n;
    if (const auto* d = std::get_if<Dmts>(&s)) return ddh(*d);
    throw MismatchError("system " + name + " is neither a nu expression nor a dmts");
}

} // namespace qspec::session
