#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "qspec/errors.hpp"
#include "qspec/ops.hpp"

namespace qspec {

namespace {

using PairSet = std::vector<StatePair>;  // sorted (dividend, divisor) pairs

struct Slot {
    std::size_t i;  // constituent index
    Label a1;
    StateId t1;
};

struct PostraEntry {
    Label label;
    PairSet target;
    auto operator<=>(const PostraEntry&) const = default;
};

class QuotientBuilder {
public:
    QuotientBuilder(const AcceptanceAutomaton& a3, const AcceptanceAutomaton& a1, const LabelStructure& ls,
                    const QuotientOptions& opt, std::vector<std::string> divisor_names)
        : a3_(a3), a1_(a1), ls_(ls), opt_(opt), divisor_names_(std::move(divisor_names)) {}

    QuotientResult build(const std::vector<StateId>& divisor_origin) {
        std::vector<PairSet> initial_states;
        if (a1_.initial.empty()) {
            initial_states.push_back({});
        } else if (!a3_.initial.empty()) {
            // One initial state per choice of a dividend initial state for every divisor initial state.
            std::vector<std::size_t> choice(a1_.initial.size(), 0);
            for (;;) {
                PairSet s;
                for (std::size_t k = 0; k < choice.size(); ++k) s.emplace_back(a3_.initial[choice[k]], a1_.initial[k]);
                std::sort(s.begin(), s.end());
                s.erase(std::unique(s.begin(), s.end()), s.end());
                initial_states.push_back(std::move(s));
                std::size_t k = 0;
                while (k < choice.size() && ++choice[k] == a3_.initial.size()) choice[k++] = 0;
                if (k == choice.size()) break;
            }
        }
        for (const auto& s : initial_states) result_.aa.initial.push_back(id(s));
        while (!work_.empty()) {
            PairSet s = work_.front();
            work_.pop_front();
            const StateId me = ids_.at(s);
            auto tran = s.empty() ? universal() : acceptance_sets(s);
            result_.aa.tran[me] = std::move(tran);
        }
        result_.aa.normalize();

        for (auto& pairs : result_.pairs) {
            for (auto& p : pairs) p.second = divisor_origin[p.second];
            std::sort(pairs.begin(), pairs.end());
            pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
        }
        std::map<std::string, int> seen;
        for (auto& name : result_.aa.names)
            if (seen[name]++ > 0) name += "#" + std::to_string(seen[name] - 1);
        return std::move(result_);
    }

private:
    StateId id(const PairSet& s) {
        auto [it, inserted] = ids_.try_emplace(s, 0);
        if (inserted) {
            if (result_.aa.size() >= opt_.max_states)
                throw BudgetError("quotient exceeds the state budget of " + std::to_string(opt_.max_states));
            std::vector<std::string> parts;
            for (const auto& [s3, s1] : s) parts.push_back(a3_.names[s3] + "/" + divisor_names_[s1]);
            std::sort(parts.begin(), parts.end());
            parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
            std::string name = "{";
            for (std::size_t k = 0; k < parts.size(); ++k) name += (k ? "," : "") + parts[k];
            name += "}";
            it->second = result_.aa.add_state(std::move(name));
            result_.pairs.push_back(s);
            work_.push_back(s);
        }
        return it->second;
    }

    std::vector<EdgeSet> universal() {
        const auto tops = ls_.maximal_labels();
        if (tops.size() > 16)
            throw BudgetError("the universal quotient state needs " + std::to_string(tops.size()) +
                              " maximal labels; the limit is 16");
        const StateId me = ids_.at({});
        std::vector<EdgeSet> out;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << tops.size()); ++mask) {
            EdgeSet m;
            for (std::size_t j = 0; j < tops.size(); ++j)
                if (mask >> j & 1) m.push_back({tops[j], me});
            out.push_back(std::move(m));
        }
        return out;
    }

    // Every (a, t) reachable from the constituent's acceptance sets.
    static EdgeSet flatten(const std::vector<EdgeSet>& tran) {
        EdgeSet out;
        for (const auto& m : tran) out.insert(out.end(), m.begin(), m.end());
        normalize(out);
        return out;
    }

    std::vector<Label> candidates(const PairSet& s, const std::vector<EdgeSet>& flat1,
                                  const std::vector<EdgeSet>& flat3) const {
        std::set<Label> pool;
        if (ls_.kind() == LabelKind::discrete) {
            for (const auto& sym : ls_.alphabet()) pool.insert(DiscreteLabel{sym});
            return {pool.begin(), pool.end()};
        }
        for (const auto& top : ls_.maximal_labels()) pool.insert(top);
        for (std::size_t i = 0; i < s.size(); ++i)
            for (const auto& e1 : flat1[i]) {
                for (const auto& piece : non_synchronizing(e1.label, ls_)) pool.insert(piece);
                for (const auto& e3 : flat3[i])
                    for (const auto& r : residuals(e1.label, e3.label, ls_)) pool.insert(r);
            }
        std::vector<Label> out(pool.begin(), pool.end());
        for (std::size_t k = 0; k < out.size(); ++k)
            for (std::size_t j = 0; j < k; ++j)
                if (auto c = conjoin(out[k], out[j], ls_); c && pool.insert(*c).second) {
                    if (pool.size() > opt_.max_labels)
                        throw BudgetError("quotient label candidates exceed the limit of " +
                                          std::to_string(opt_.max_labels));
                    out.push_back(*c);
                }
        return out;
    }

    std::vector<EdgeSet> acceptance_sets(const PairSet& s) {
        const std::size_t n = s.size();
        std::vector<EdgeSet> flat1(n), flat3(n);
        for (std::size_t i = 0; i < n; ++i) {
            flat3[i] = flatten(a3_.tran[s[i].first]);
            flat1[i] = flatten(a1_.tran[s[i].second]);
        }
        std::vector<Slot> slots;
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& e1 : flat1[i]) slots.push_back({i, e1.label, e1.target});

        // Signature of a candidate: per slot, whether it synchronizes and which dividend edges cover it.
        struct Info {
            Label label;
            std::vector<std::vector<std::size_t>> covering;  // per slot; empty vector with defined=false
            std::vector<char> defined;
        };
        std::vector<Info> permitted;
        for (const auto& a : candidates(s, flat1, flat3)) {
            Info info{a, {}, {}};
            bool ok = true;
            for (const auto& slot : slots) {
                auto c = synchronize(slot.a1, a, ls_);
                std::vector<std::size_t> cover;
                if (c) {
                    const auto& f3 = flat3[slot.i];
                    for (std::size_t k = 0; k < f3.size(); ++k)
                        if (f3[k].label.index() == c->index() && refines(*c, f3[k].label, ls_)) cover.push_back(k);
                    if (cover.empty()) {
                        ok = false;
                        break;
                    }
                }
                info.defined.push_back(c ? 1 : 0);
                info.covering.push_back(std::move(cover));
            }
            if (ok) permitted.push_back(std::move(info));
        }
        std::vector<PostraEntry> postra;
        for (std::size_t k = 0; k < permitted.size(); ++k) {
            const auto& p = permitted[k];
            bool dominated = false;
            for (std::size_t j = 0; j < permitted.size() && !dominated; ++j) {
                if (j == k) continue;
                const auto& q = permitted[j];
                if (q.defined == p.defined && q.covering == p.covering && refines(p.label, q.label, ls_) &&
                    (!refines(q.label, p.label, ls_) || j < k))
                    dominated = true;
            }
            if (dominated) continue;
            // Cartesian product over the synchronizing slots of their target choices.
            std::vector<std::size_t> active;
            for (std::size_t x = 0; x < slots.size(); ++x)
                if (p.defined[x]) active.push_back(x);
            std::vector<std::vector<StateId>> options(active.size());
            for (std::size_t x = 0; x < active.size(); ++x) {
                const auto& slot = slots[active[x]];
                for (auto k3 : p.covering[active[x]]) options[x].push_back(flat3[slot.i][k3].target);
                std::sort(options[x].begin(), options[x].end());
                options[x].erase(std::unique(options[x].begin(), options[x].end()), options[x].end());
            }
            std::vector<std::size_t> pick(active.size(), 0);
            for (;;) {
                PairSet target;
                for (std::size_t x = 0; x < active.size(); ++x)
                    target.emplace_back(options[x][pick[x]], slots[active[x]].t1);
                std::sort(target.begin(), target.end());
                target.erase(std::unique(target.begin(), target.end()), target.end());
                postra.push_back({p.label, std::move(target)});
                if (postra.size() > opt_.postra_limit)
                    throw BudgetError("quotient state " + result_.aa.names[ids_.at(s)] + " has more than " +
                                      std::to_string(opt_.postra_limit) + " successor choices");
                std::size_t x = 0;
                while (x < active.size() && ++pick[x] == options[x].size()) pick[x++] = 0;
                if (x == active.size()) break;
            }
        }
        std::sort(postra.begin(), postra.end());
        postra.erase(std::unique(postra.begin(), postra.end()), postra.end());

        const std::size_t np = postra.size();
        std::vector<EdgeSet> result;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << np); ++mask) {
            std::vector<const PostraEntry*> m;
            for (std::size_t j = 0; j < np; ++j)
                if (mask >> j & 1) m.push_back(&postra[j]);
            if (!admissible(s, m)) continue;
            EdgeSet edges;
            for (const auto* e : m) edges.push_back({e->label, id(e->target)});
            result.push_back(std::move(edges));
        }
        return result;
    }

    // For every constituent and every divisor acceptance set, some dividend
    // acceptance set matches the composed behaviour in both directions.
    bool admissible(const PairSet& s, const std::vector<const PostraEntry*>& m) const {
        for (const auto& [s3, s1] : s) {
            for (const auto& m1 : a1_.tran[s1]) {
                struct Composed {
                    Label label;
                    StateId t1;
                    const PairSet* target;
                };
                std::vector<Composed> composed;
                for (const auto* e : m)
                    for (const auto& e1 : m1)
                        if (auto c = synchronize(e1.label, e->label, ls_)) composed.push_back({*c, e1.target, &e->target});
                bool matched = false;
                for (const auto& m3 : a3_.tran[s3]) {
                    auto related = [&](const Composed& c, const Edge& e3) {
                        return c.label.index() == e3.label.index() && refines(c.label, e3.label, ls_) &&
                               std::binary_search(c.target->begin(), c.target->end(), StatePair{e3.target, c.t1});
                    };
                    bool ok = true;
                    for (const auto& c : composed) {
                        if (!std::any_of(m3.begin(), m3.end(), [&](const Edge& e3) { return related(c, e3); })) {
                            ok = false;
                            break;
                        }
                    }
                    if (ok)
                        for (const auto& e3 : m3)
                            if (!std::any_of(composed.begin(), composed.end(),
                                             [&](const Composed& c) { return related(c, e3); })) {
                                ok = false;
                                break;
                            }
                    if (ok) {
                        matched = true;
                        break;
                    }
                }
                if (!matched) return false;
            }
        }
        return true;
    }

    const AcceptanceAutomaton& a3_;
    const AcceptanceAutomaton& a1_;
    const LabelStructure& ls_;
    const QuotientOptions& opt_;
    std::vector<std::string> divisor_names_;
    QuotientResult result_;
    std::map<PairSet, StateId> ids_;
    std::deque<PairSet> work_;
};

} // namespace

QuotientResult quotient(const AcceptanceAutomaton& a3, const AcceptanceAutomaton& a1, const LabelStructure& ls,
                        const QuotientOptions& options) {
    if (ls.kind() == LabelKind::set)
        throw CapabilityError("quotient is not supported for set labels with " + std::string(to_string(ls.sync())) +
                              " synchronization");
    if (ls.kind() == LabelKind::weighted && ls.sync() == SyncOp::csp)
        throw CapabilityError("quotient is not supported for weighted labels with csp synchronization");
    std::vector<StateId> origin;
    AcceptanceAutomaton divisor;
    if (options.split_divisor) {
        divisor = split_disjoint(a1, &origin);
    } else {
        divisor = a1;
        for (StateId s = 0; s < a1.size(); ++s) origin.push_back(s);
    }
    std::vector<std::string> names;
    for (auto o : origin) names.push_back(a1.names[o]);
    QuotientBuilder builder(a3, divisor, ls, options, std::move(names));
    return builder.build(origin);
}

} // namespace qspec
