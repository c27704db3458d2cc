#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "corpus.hpp"
#include "qspec/enumerate.hpp"
#include "qspec/errors.hpp"
#include "qspec/io.hpp"
#include "qspec/ops.hpp"
#include "qspec/refine.hpp"

using namespace qspec;

namespace {

std::string data(const char* name) { return std::string(QSPEC_DATA_DIR) + "/" + name; }

bool equivalent(const AcceptanceAutomaton& a, const AcceptanceAutomaton& b, const LabelStructure& ls) {
    return mr_aa(a, b, ls).holds && mr_aa(b, a, ls).holds;
}

bool equivalent(const Dmts& a, const Dmts& b, const LabelStructure& ls) {
    return mr_dmts(a, b, ls).holds && mr_dmts(b, a, ls).holds;
}

std::set<Lts> members(const ImplementationSet& s) { return {s.implementations.begin(), s.implementations.end()}; }

Dmts must_edge(const char* s, const char* label, const char* t) {
    Dmts d;
    d.add_state(s);
    d.add_state(t);
    d.initial = {0};
    d.may[0] = {{discrete(label), 1}};
    d.must[0] = {{{discrete(label), 1}}};
    return d;
}

AcceptanceAutomaton single_edge(const Label& l) {
    AcceptanceAutomaton a;
    a.add_state("p");
    a.add_state("q");
    a.initial = {0};
    a.tran[0] = {EdgeSet{{l, 1}}};
    a.tran[1] = {EdgeSet{}};
    return a;
}

} // namespace

TEST_CASE("disjunction") {
    corpus::Rng rng(41);
    const auto alpha = corpus::discrete_alphabet(2);
    const auto universe = enumerate_lts(2, alpha.impl_labels);
    Dmts bottom;
    for (int k = 0; k < 80; ++k) {
        const Dmts d1 = corpus::random_dmts(rng, alpha, {4, 2, 2, 2}), d2 = corpus::random_dmts(rng, alpha, {4, 2, 2, 2}),
                   d3 = corpus::random_dmts(rng, alpha, {4, 2, 2, 2});
        const Dmts dis = disjoin(d1, d2);
        CHECK(mr_dmts(dis, d3, alpha.ls).holds == (mr_dmts(d1, d3, alpha.ls).holds && mr_dmts(d2, d3, alpha.ls).holds));
        CHECK(equivalent(disjoin(bottom, d1), d1, alpha.ls));
        auto uni = members(implementations_upto(System{d1}, alpha.ls, universe));
        const auto i2 = members(implementations_upto(System{d2}, alpha.ls, universe));
        uni.insert(i2.begin(), i2.end());
        CHECK(members(implementations_upto(System{dis}, alpha.ls, universe)) == uni);
    }
}

TEST_CASE("conjunction") {
    const SpecDocument doc = load_document(data("fig6.qs"));
    const Dmts both = conjoin(std::get<Dmts>(doc.get("D1")), std::get<Dmts>(doc.get("D2")), doc.labels);
    REQUIRE(both.initial.size() == 1);
    CHECK(both.may[both.initial[0]].empty());
    CHECK_FALSE(db(both).tran[both.initial[0]].empty());

    const LabelStructure ls(LabelKind::discrete, {"a", "b"}, {}, SyncOp::csp);
    const Dmts d1 = must_edge("s1", "a", "s2"), d2 = must_edge("t1", "b", "t2");
    const Dmts c = conjoin(d1, d2, ls);
    REQUIRE(c.initial.size() == 1);
    CHECK(db(c).tran[c.initial[0]].empty());

    corpus::Rng rng(42);
    const auto alpha = corpus::discrete_alphabet(3, true);
    for (int k = 0; k < 80; ++k) {
        const Dmts d = corpus::random_dmts(rng, alpha, {4, 3, 2, 2});
        CHECK(equivalent(conjoin(d, d, alpha.ls), d, alpha.ls));
        const Dmts e = corpus::random_dmts(rng, alpha, {4, 3, 2, 2}), f = corpus::random_dmts(rng, alpha, {4, 3, 2, 2});
        CHECK(mr_dmts(f, conjoin(d, e, alpha.ls), alpha.ls).holds ==
              (mr_dmts(f, d, alpha.ls).holds && mr_dmts(f, e, alpha.ls).holds));
    }
}

TEST_CASE("structural composition") {
    const LabelStructure ls(LabelKind::discrete, {"a", "b"}, {}, SyncOp::csp);
    const auto c = compose(db(must_edge("s1", "a", "s2")), db(must_edge("t1", "b", "t2")), ls);
    REQUIRE(c.initial.size() == 1);
    CHECK(c.tran[c.initial[0]] == std::vector<EdgeSet>{EdgeSet{}});

    const LabelStructure w(LabelKind::weighted, {"a"}, {}, SyncOp::plus);
    const auto p = compose(single_edge(weighted("a", 1, 1)), single_edge(weighted("a", 3, 3)), w);
    REQUIRE(p.initial.size() == 1);
    REQUIRE(p.tran[p.initial[0]].size() == 1);
    REQUIRE(p.tran[p.initial[0]][0].size() == 1);
    CHECK(p.tran[p.initial[0]][0][0].label == weighted("a", 4, 4));
}

TEST_CASE("composition laws") {
    corpus::Rng rng(43);
    const auto alpha = corpus::restrict(rng, corpus::weighted_alphabet(SyncOp::plus, 1, 2), 3);
    const corpus::AaShape shape{3, 2, 2, 0.05};
    for (int k = 0; k < 60; ++k) {
        const auto a1 = corpus::random_aa(rng, alpha, shape), a2 = corpus::random_aa(rng, alpha, shape),
                   a3 = corpus::random_aa(rng, alpha, shape), a4 = corpus::random_aa(rng, alpha, shape);
        const auto& ls = alpha.ls;
        CHECK(equivalent(compose(a1, a2, ls), compose(a2, a1, ls), ls));
        CHECK(equivalent(compose(compose(a1, a2, ls), a3, ls), compose(a1, compose(a2, a3, ls), ls), ls));
        CHECK(equivalent(compose(a1, disjoin(a2, a3), ls), disjoin(compose(a1, a2, ls), compose(a1, a3, ls)), ls));
        if (mr_aa(a1, a3, ls).holds && mr_aa(a2, a4, ls).holds)
            CHECK(mr_aa(compose(a1, a2, ls), compose(a3, a4, ls), ls).holds);
    }
}

TEST_CASE("quotient example") {
    const SpecDocument doc = load_document(data("fig5.qs"));
    const auto s = db(std::get<Dmts>(doc.get("s")));
    const auto t = db(std::get<Dmts>(doc.get("t")));
    const auto q = quotient(s, t, doc.labels);
    const auto pruned = prune_inconsistent(q.aa);
    CHECK(mr_aa(compose(t, q.aa, doc.labels), s, doc.labels).holds);
    CHECK(mr_aa(pruned.aa, q.aa, doc.labels).holds);
    CHECK_FALSE(mr_aa(q.aa, pruned.aa, doc.labels).holds);
    CHECK(pruned.inconsistent_initial.empty());
}

TEST_CASE("quotient adjunction on discrete labels") {
    corpus::Rng rng(44);
    const auto alpha = corpus::discrete_alphabet(2);
    const corpus::AaShape shape{3, 2, 2, 0.05};
    int done = 0;
    while (done < 60) {
        const auto a1 = corpus::random_aa(rng, alpha, shape), a2 = corpus::random_aa(rng, alpha, shape),
                   a3 = corpus::random_aa(rng, alpha, shape);
        AcceptanceAutomaton q;
        try {
            q = quotient(a3, a1, alpha.ls).aa;
        } catch (const BudgetError&) {
            continue;
        }
        ++done;
        CHECK(mr_aa(compose(a1, a2, alpha.ls), a3, alpha.ls).holds == mr_aa(a2, q, alpha.ls).holds);
    }
}

TEST_CASE("quotient by an empty divisor is universal") {
    const auto alpha = corpus::discrete_alphabet(2);
    corpus::Rng rng(45);
    const auto a3 = corpus::random_aa(rng, alpha, {3, 2, 2, 0.0});
    AcceptanceAutomaton none;
    none.add_state("s");
    const auto q = quotient(a3, none, alpha.ls);
    REQUIRE(q.aa.initial.size() == 1);
    CHECK(q.pairs[q.aa.initial[0]].empty());
    const auto top = lattice_bounds(alpha.ls).top;
    CHECK(equivalent(q.aa, top, alpha.ls));
}

TEST_CASE("quotient capabilities") {
    const LabelStructure sets(LabelKind::set, {"a", "b"}, {}, SyncOp::cap);
    AcceptanceAutomaton a;
    a.add_state("s");
    a.initial = {0};
    a.tran[0] = {EdgeSet{{label_set({"a"}), 0}}};
    CHECK_THROWS_AS(quotient(a, a, sets), CapabilityError);
    const LabelStructure wcsp(LabelKind::weighted, {"a"}, {}, SyncOp::csp);
    AcceptanceAutomaton w;
    w.add_state("s");
    w.initial = {0};
    w.tran[0] = {EdgeSet{{weighted("a", 0, 1), 0}}};
    CHECK_THROWS_AS(quotient(w, w, wcsp), CapabilityError);
}

TEST_CASE("quotient budget") {
    const auto alpha = corpus::discrete_alphabet(3);
    AcceptanceAutomaton big;
    big.add_state("s");
    big.initial = {0};
    for (const auto& l : alpha.spec_labels) big.tran[0].push_back(EdgeSet{{l, 0}});
    big.normalize();
    QuotientOptions o;
    o.postra_limit = 1;
    CHECK_THROWS_AS(quotient(big, big, alpha.ls, o), BudgetError);
}

TEST_CASE("pruning") {
    const LabelStructure ls(LabelKind::discrete, {"a"}, {}, SyncOp::csp);
    AcceptanceAutomaton a;
    a.add_state("s");
    a.add_state("bad");
    a.initial = {0};
    a.tran[0] = {EdgeSet{{discrete("a"), 1}}};
    const auto p = prune_inconsistent(a);
    REQUIRE(p.aa.initial.size() == 1);
    CHECK(p.aa.tran[p.aa.initial[0]].empty());
    CHECK(p.inconsistent_initial.size() == 1);

    // an inconsistent state refines anything, so only one direction survives
    AcceptanceAutomaton b;
    b.add_state("s");
    b.add_state("bad");
    b.initial = {0};
    b.tran[0] = {EdgeSet{}, EdgeSet{{discrete("a"), 1}}};
    const auto pb = prune_inconsistent(b);
    CHECK(mr_aa(pb.aa, b, ls).holds);
    CHECK_FALSE(mr_aa(b, pb.aa, ls).holds);

    corpus::Rng rng(46);
    const auto alpha = corpus::discrete_alphabet(2);
    const auto universe = enumerate_lts(2, alpha.impl_labels);
    for (int k = 0; k < 60; ++k) {
        const auto x = corpus::random_aa(rng, alpha, {4, 3, 2, 0.2});
        const auto px = prune_inconsistent(x).aa;
        CHECK(mr_aa(px, x, alpha.ls).holds);
        CHECK(tr_oracle(System{x}, System{px}, alpha.ls, universe).holds);
        const auto y = corpus::random_aa(rng, alpha, {4, 3, 2, 0.0});
        const auto py = prune_inconsistent(y);
        CHECK(py.aa.tran.size() <= y.tran.size());
        CHECK(equivalent(py.aa, y, alpha.ls));
    }
}

TEST_CASE("lattice bounds") {
    const auto alpha = corpus::discrete_alphabet(2);
    const auto b = lattice_bounds(alpha.ls);
    CHECK(b.bottom.initial.empty());
    CHECK(b.top.initial.size() == 1);
    CHECK_FALSE(mr_aa(b.top, b.bottom, alpha.ls).holds);
    corpus::Rng rng(47);
    for (int k = 0; k < 40; ++k) {
        const auto x = corpus::random_aa(rng, alpha, {4, 3, 2, 0.0});
        CHECK(mr_aa(b.bottom, x, alpha.ls).holds);
        CHECK(mr_aa(x, b.top, alpha.ls).holds);
    }
}
