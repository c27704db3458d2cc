#include <set>
#include "qspec/enumerate.hpp"

#include <algorithm>
#include <numeric>

#include "qspec/errors.hpp"
#include "qspec/refine.hpp"

namespace qspec {

namespace {

bool all_reachable(std::uint64_t mask, std::size_t n, std::size_t g) {
    std::uint32_t seen = 1, frontier = 1;
    while (frontier) {
        std::uint32_t next = 0;
        for (std::size_t s = 0; s < n; ++s) {
            if (!(frontier >> s & 1)) continue;
            for (std::size_t l = 0; l < g; ++l)
                for (std::size_t t = 0; t < n; ++t)
                    if (mask >> ((s * g + l) * n + t) & 1) next |= 1u << t;
        }
        frontier = next & ~seen;
        seen |= next;
    }
    return seen == (1u << n) - 1;
}

std::uint64_t permuted(std::uint64_t mask, std::size_t n, std::size_t g, const std::vector<std::size_t>& perm) {
    std::uint64_t out = 0;
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t l = 0; l < g; ++l)
            for (std::size_t t = 0; t < n; ++t)
                if (mask >> ((s * g + l) * n + t) & 1) out |= std::uint64_t{1} << ((perm[s] * g + l) * n + perm[t]);
    return out;
}

} // namespace

LtsUniverse enumerate_lts(std::size_t max_states, const std::vector<Label>& gamma, std::size_t limit) {
    LtsUniverse u;
    const std::size_t g = gamma.size();
    for (std::size_t n = 1; n <= max_states; ++n) {
        const std::size_t bits = n * g * n;
        if (bits > 40) throw BudgetError("LTS enumeration with " + std::to_string(n) + " states and " +
                                         std::to_string(g) + " labels is too large");
        std::vector<std::vector<std::size_t>> perms;
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        do perms.push_back(perm);
        while (std::next_permutation(perm.begin() + 1, perm.end()));

        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
            if (!all_reachable(mask, n, g)) continue;
            bool canonical = true;
            for (std::size_t p = 1; p < perms.size() && canonical; ++p)
                if (permuted(mask, n, g, perms[p]) < mask) canonical = false;
            if (!canonical) continue;
            if (u.systems.size() >= limit) {
                u.truncated = true;
                return u;
            }
            Lts lts;
            for (std::size_t s = 0; s < n; ++s) lts.add_state("q" + std::to_string(s));
            for (std::size_t s = 0; s < n; ++s)
                for (std::size_t l = 0; l < g; ++l)
                    for (std::size_t t = 0; t < n; ++t)
                        if (mask >> ((s * g + l) * n + t) & 1)
                            lts.add_transition(static_cast<StateId>(s), gamma[l], static_cast<StateId>(t));
            lts.normalize();
            u.systems.push_back(std::move(lts));
        }
    }
    return u;
}

ImplementationSet implementations_upto(const System& spec, const LabelStructure& ls, const LtsUniverse& universe) {
    ImplementationSet out;
    out.truncated = universe.truncated;
    const Formalism target = formalism_of(spec) == Formalism::lts ? Formalism::dmts : formalism_of(spec);
    for (const auto& i : universe.systems)
        if (modal_refinement(embed_lts(i, target), spec, ls).holds) out.implementations.push_back(i);
    return out;
}

ImplementationSet implementations_upto(const Dmts& spec, std::size_t max_states, const std::vector<Label>& gamma,
                                       const LabelStructure& ls) {
    return implementations_upto(System{spec}, ls, enumerate_lts(max_states, gamma));
}

BoundedVerdict tr_oracle(const System& s1, const System& s2, const LabelStructure& ls, const LtsUniverse& universe) {
    BoundedVerdict v;
    v.truncated = universe.truncated;
    v.holds = true;
    const Formalism f1 = formalism_of(s1) == Formalism::lts ? Formalism::dmts : formalism_of(s1);
    const Formalism f2 = formalism_of(s2) == Formalism::lts ? Formalism::dmts : formalism_of(s2);
    for (const auto& i : universe.systems)
        if (modal_refinement(embed_lts(i, f1), s1, ls).holds && !modal_refinement(embed_lts(i, f2), s2, ls).holds) {
            v.holds = false;
            break;
        }
    return v;
}

BoundedVerdict tr_oracle(const Dmts& s1, const Dmts& s2, std::size_t max_states, const std::vector<Label>& gamma,
                         const LabelStructure& ls) {
    return tr_oracle(System{s1}, System{s2}, ls, enumerate_lts(max_states, gamma));
}

BoundedValue thorough_distance_oracle(const System& s1, const System& s2, const LabelStructure& ls,
                                      const TraceDistanceSpec& m, const LtsUniverse& universe, double tol) {
    BoundedValue r;
    r.truncated = universe.truncated;
    auto left = implementations_upto(s1, ls, universe);
    auto right = implementations_upto(s2, ls, universe);
    std::vector<Dmts> right_dmts;
    for (const auto& i : right.implementations) right_dmts.push_back(std::get<Dmts>(embed_lts(i, Formalism::dmts)));
    const std::set<Lts> right_set(right.implementations.begin(), right.implementations.end());
    for (const auto& i1 : left.implementations) {
        if (right_set.count(i1)) continue;
        const auto d1 = std::get<Dmts>(embed_lts(i1, Formalism::dmts));
        double inf = kInfinity;
        for (const auto& d2 : right_dmts) {
            inf = std::min(inf, refinement_distance(d1, d2, ls, m, tol).value);
            if (inf == 0.0) break;
        }
        r.value = std::max(r.value, inf);
    }
    return r;
}

BoundedValue thorough_distance_oracle(const Dmts& s1, const Dmts& s2, const TraceDistanceSpec& m,
                                      std::size_t max_states, const std::vector<Label>& gamma,
                                      const LabelStructure& ls, double tol) {
    return thorough_distance_oracle(System{s1}, System{s2}, ls, m, enumerate_lts(max_states, gamma), tol);
}

} // namespace qspec
