#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "corpus.hpp"
#include "qspec/enumerate.hpp"
#include "qspec/errors.hpp"
#include "qspec/io.hpp"
#include "qspec/model.hpp"
#include "qspec/refine.hpp"

using namespace qspec;

namespace {

std::string data(const char* name) { return std::string(QSPEC_DATA_DIR) + "/" + name; }

const LabelStructure& abc() {
    static const LabelStructure ls(LabelKind::discrete, {"a", "b", "c"}, {}, SyncOp::csp);
    return ls;
}

Dmts one_state() {
    Dmts d;
    d.add_state("s");
    d.initial = {0};
    return d;
}

bool has_rule(const std::vector<Violation>& v, const std::string& needle) {
    for (const auto& x : v)
        if (x.rule.find(needle) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_CASE("validation") {
    const SpecDocument doc = load_document(data("grants.qs"));
    CHECK(validate(doc.get("x"), doc.labels).empty());

    Dmts d = one_state();
    d.add_state("t");
    d.must[0].push_back({{discrete("a"), 1}});
    CHECK(validate(d, abc()).size() == 1);

    Lts l;
    l.add_state("p");
    l.add_transition(0, weighted("grant", 0, 5), 0);
    CHECK(has_rule(validate(l, doc.labels), "not an implementation label"));
}

TEST_CASE("db") {
    Dmts d = one_state();
    CHECK(db(d).tran[0] == std::vector<EdgeSet>{EdgeSet{}});

    d.may[0].push_back({discrete("a"), 0});
    d.must[0].push_back({{discrete("a"), 0}});
    CHECK(db(d).tran[0] == std::vector<EdgeSet>{EdgeSet{{discrete("a"), 0}}});

    const SpecDocument doc = load_document(data("grants.qs"));
    const auto& x = std::get<Dmts>(doc.get("x"));
    const auto a = db(x);
    StateId y = 0;
    for (StateId s = 0; s < x.size(); ++s)
        if (x.names[s] == "y") y = s;
    StateId xs = 1 - y;
    REQUIRE_FALSE(a.tran[y].empty());
    for (const auto& m : a.tran[y]) {
        const bool grant = std::find(m.begin(), m.end(), Edge{weighted("grant", 0, 5), xs}) != m.end();
        const bool work = std::find(m.begin(), m.end(), Edge{weighted("work", 2, 4), y}) != m.end();
        CHECK((grant || work));
    }
    // all 4 subsets of the two may edges meeting the must set: 3
    CHECK(a.tran[y].size() == 3);
}

TEST_CASE("bd") {
    AcceptanceAutomaton a;
    a.add_state("s");
    a.initial = {0};
    a.tran[0] = {EdgeSet{}};
    Dmts d = bd(a);
    CHECK(d.size() == 1);
    CHECK(d.may[0].empty());
    CHECK(d.must[0].empty());

    a.tran[0] = {EdgeSet{{discrete("a"), 0}}};
    d = bd(a);
    REQUIRE(d.size() == 1);
    CHECK(d.may[0] == EdgeSet{{discrete("a"), 0}});
    CHECK(d.must[0] == std::vector<EdgeSet>{EdgeSet{{discrete("a"), 0}}});

    const SpecDocument doc = load_document(data("grants.qs"));
    const auto& x = std::get<Dmts>(doc.get("x"));
    const Dmts back = bd(db(x));
    CHECK(mr_dmts(back, x, doc.labels).holds);
}

TEST_CASE("bd(db(x)) is only thoroughly equivalent to x") {
    // x delays its choice of acceptance set, bd(db(x)) makes it in the initial state.
    const SpecDocument doc = load_document(data("grants.qs"));
    const auto& x = std::get<Dmts>(doc.get("x"));
    const Dmts back = bd(db(x));
    CHECK_FALSE(mr_dmts(x, back, doc.labels).holds);
    const std::vector<Label> gamma{weighted("req", 0, 0), weighted("grant", 5, 5), weighted("work", 3, 3)};
    const auto universe = enumerate_lts(2, gamma);
    CHECK(tr_oracle(System{x}, System{back}, doc.labels, universe).holds);
    CHECK(tr_oracle(System{back}, System{x}, doc.labels, universe).holds);
}

TEST_CASE("bd budget") {
    AcceptanceAutomaton a;
    a.add_state("s");
    a.tran[0] = {EdgeSet{}, EdgeSet{{discrete("a"), 0}}};
    CHECK_THROWS_AS(bd(a, 1), BudgetError);
}

TEST_CASE("bd drops edges into inconsistent states") {
    AcceptanceAutomaton left;
    left.add_state("s1");
    left.add_state("s2");
    left.initial = {0};
    left.tran[0] = {EdgeSet{}, EdgeSet{{discrete("b"), 1}}};
    AcceptanceAutomaton right;
    right.add_state("s0");
    right.initial = {0};
    right.tran[0] = {EdgeSet{}};
    CHECK_FALSE(mr_aa(left, right, abc()).holds);
    CHECK(mr_dmts(bd(left), bd(right), abc()).holds);
}

TEST_CASE("bd splits initial states") {
    // The right operand offers a choice of initial state, and bd turns each acceptance set into its own initial state.
    Dmts left;
    left.add_state("l0");
    left.add_state("l1");
    left.initial = {0};
    left.may[0] = {{discrete("a"), 1}};
    Dmts right;
    right.add_state("r1");
    right.add_state("r2");
    right.add_state("r3");
    right.initial = {0, 1};
    right.may[0] = {{discrete("a"), 2}};
    right.must[0] = {{{discrete("a"), 2}}};
    CHECK_FALSE(mr_dmts(left, right, abc()).holds);
    CHECK_FALSE(mr_aa(db(left), db(right), abc()).holds);
    CHECK(mr_dmts(bd(db(left)), bd(db(right)), abc()).holds);
}

TEST_CASE("ddh and hd") {
    const SpecDocument doc = load_document(data("grants.qs"));
    const auto& x = std::get<Dmts>(doc.get("x"));
    const auto& phi = std::get<NuExpr>(doc.get("phi"));
    const NuExpr n = ddh(x);
    CHECK(n.initial == phi.initial);
    CHECK(n.box == phi.box);
    CHECK(n.diamond == phi.diamond);
    const Dmts back = hd(phi, doc.labels);
    CHECK(back.may == x.may);
    CHECK(back.must == x.must);
    CHECK(back.initial == x.initial);

    CHECK(ddh(Dmts{}).size() == 0);
    Dmts d = one_state();
    d.may[0] = {{discrete("a"), 0}};
    const NuExpr m = ddh(d);
    CHECK(m.diamond[0].empty());
    CHECK(m.box[0].size() == 1);

    NuExpr boxes;
    boxes.add_state("X");
    boxes.box[0] = {{discrete("b"), 0}};
    const Dmts h = hd(boxes, abc());
    CHECK(h.must[0].empty());
    CHECK(h.may[0].size() == 1);
}

TEST_CASE("hd rejects an uncovered diamond") {
    NuExpr n;
    n.add_state("X");
    n.diamond[0] = {{{discrete("a"), 0}}};
    CHECK_THROWS_AS(hd(n, abc()), ValidationError);
}

TEST_CASE("hd inverts ddh on random systems") {
    corpus::Rng rng(11);
    for (int k = 0; k < 200; ++k) {
        const auto alpha = k % 2 ? corpus::weighted_alphabet(SyncOp::plus) : corpus::discrete_alphabet(3, true);
        const Dmts d = corpus::random_dmts(rng, alpha);
        CHECK(hd(ddh(d), alpha.ls) == d);
    }
}

TEST_CASE("embedding") {
    const SpecDocument doc = load_document(data("grants.qs"));
    const auto& i1 = std::get<Lts>(doc.get("i1"));
    const auto d = std::get<Dmts>(embed_lts(i1, Formalism::dmts));
    CHECK(d.size() == 2);
    CHECK(d.must[0].size() == 1);
    CHECK(d.must[1].size() == 1);
    for (Formalism f : {Formalism::lts, Formalism::dmts, Formalism::aa, Formalism::nu}) {
        const System s = embed_lts(i1, f);
        CHECK(validate(s, doc.labels).empty());
        CHECK(is_implementation(s, doc.labels));
    }
    Lts dead;
    dead.add_state("p");
    const auto a = std::get<AcceptanceAutomaton>(embed_lts(dead, Formalism::aa));
    CHECK(a.tran[0] == std::vector<EdgeSet>{EdgeSet{}});
}

TEST_CASE("a refinable specification is not an implementation") {
    const SpecDocument doc = load_document(data("grants.qs"));
    CHECK_FALSE(is_implementation(doc.get("x"), doc.labels));
}
