// Acceptance runner: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iterator>
#include <set>
#include <string>

#include "corpus.hpp"
#include "qspec/enumerate.hpp"
#include "qspec/errors.hpp"
#include "qspec/io.hpp"
#include "qspec/ops.hpp"
#include "qspec/quant.hpp"
#include "qspec/refine.hpp"

using namespace qspec;

namespace {

std::string data(const char* name) { return std::string(QSPEC_DATA_DIR) + "/" + name; }

bool near(double a, double b, double tol) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::fabs(a - b) <= tol;
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail = what;
            pass = false;
        }
    }
};

int run_one(int number, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > limit_seconds) o.require(false, "runtime " + std::to_string(secs) + "s over limit");
    std::printf("criterion %d %s: %s (%.2fs)%s%s\n", number, title, o.pass ? "PASS" : "FAIL", secs,
                o.detail.empty() ? "" : " ", o.detail.c_str());
    std::fflush(stdout);
    return o.pass ? 0 : 1;
}

Outcome vending() {
    Outcome o;
    SpecDocument doc = load_document(data("vending.qs"));
    o.require(modal_refinement(doc.get("t"), doc.get("s"), doc.labels).holds, "t does not refine s");
    std::vector<std::pair<std::string, std::string>> order;
    for (const auto& p : doc.labels.order())
        if (!(p.first == "beer" && p.second == "beverage")) order.push_back(p);
    o.require(!modal_refinement(doc.get("t"), doc.get("s"), doc.labels.with_order(order)).holds,
              "t still refines s without beer <= beverage");
    return o;
}

Outcome grants() {
    Outcome o;
    SpecDocument doc = load_document(data("grants.qs"));
    const auto& phi = std::get<NuExpr>(doc.get("phi"));
    o.require(mc_nu(std::get<Lts>(doc.get("i1")), phi, doc.labels), "i1 does not satisfy the formula");
    o.require(!mc_nu(std::get<Lts>(doc.get("i2")), phi, doc.labels), "i2 satisfies the formula");
    o.require(!modal_refinement(doc.get("xprime"), doc.get("x"), doc.labels).holds, "x' refines x");
    return o;
}

Outcome discounting() {
    Outcome o;
    SpecDocument doc = load_document(data("grants.qs"));
    for (double lambda : {0.5, 0.9, 0.99}) {
        const auto m = make_metric(MetricKind::discounting, lambda);
        const double expect = lambda / (1 - lambda);
        const double fwd = refinement_distance(doc.get("x"), doc.get("xprime"), doc.labels, m).value;
        const double bwd = refinement_distance(doc.get("xprime"), doc.get("x"), doc.labels, m).value;
        o.require(near(fwd, expect, 1e-6), "md(x,x') = " + format_number(fwd) + " at lambda " + format_number(lambda));
        o.require(near(bwd, expect, 1e-6), "md(x',x) = " + format_number(bwd) + " at lambda " + format_number(lambda));
    }
    return o;
}

Outcome conjunction_defect() {
    Outcome o;
    SpecDocument doc = load_document(data("fig6.qs"));
    const auto m = make_metric(MetricKind::pointwise);
    const auto& i = std::get<Lts>(doc.get("I"));
    const auto& d1 = std::get<Dmts>(doc.get("D1"));
    const auto& d2 = std::get<Dmts>(doc.get("D2"));
    const System both = conjoin(d1, d2, doc.labels);
    const System ii = i;
    o.require(refinement_distance(ii, System{d1}, doc.labels, m).value == 1.0, "md(I,D1) != 1");
    o.require(refinement_distance(ii, System{d2}, doc.labels, m).value == 1.0, "md(I,D2) != 1");
    o.require(std::isinf(refinement_distance(ii, both, doc.labels, m).value), "md(I,D1&D2) finite");
    o.require(relaxed_membership(i, System{d1}, 1.0, doc.labels, m).member, "I not in [[D1]]^1");
    o.require(relaxed_membership(i, System{d2}, 1.0, doc.labels, m).member, "I not in [[D2]]^1");
    o.require(!relaxed_membership(i, both, 1.0, doc.labels, m).member, "I in [[D1&D2]]^1");
    return o;
}

Outcome fig5() {
    Outcome o;
    SpecDocument doc = load_document(data("fig5.qs"));
    const auto& s = std::get<Dmts>(doc.get("s"));
    const auto& t = std::get<Dmts>(doc.get("t"));
    const auto s_aa = db(s);
    const auto t_aa = db(t);
    const auto q = quotient(s_aa, t_aa, doc.labels);
    const auto pruned = prune_inconsistent(q.aa);
    StateId s2 = 0, t2 = 0;
    for (StateId k = 0; k < s.size(); ++k)
        if (s.names[k] == "s2") s2 = k;
    for (StateId k = 0; k < t.size(); ++k)
        if (t.names[k] == "t2") t2 = k;
    std::vector<char> targeted(pruned.aa.size(), 0);
    for (const auto& sets : pruned.aa.tran)
        for (const auto& m : sets)
            for (const auto& e : m) targeted[e.target] = 1;
    for (StateId k = 0; k < pruned.aa.size(); ++k) {
        if (!targeted[k] || pruned.aa.tran[k].empty()) continue;
        for (const auto& p : q.pairs[pruned.origin[k]])
            o.require(!(p.first == s2 && p.second == t2), "state " + pruned.aa.names[k] + " reachable");
    }
    o.require(mr_aa(compose(t_aa, pruned.aa, doc.labels), s_aa, doc.labels).holds, "t || (s/t) does not refine s");
    o.require(mr_aa(compose(t_aa, q.aa, doc.labels), s_aa, doc.labels).holds, "t || unpruned s/t does not refine s");
    return o;
}


const MetricKind kMetrics[] = {MetricKind::discrete, MetricKind::pointwise, MetricKind::discounting};

double metric_tol(MetricKind k) { return k == MetricKind::discounting ? 1e-6 : 0.0; }

std::string describe(const SpecDocument& doc) { return "\n" + serialize(doc, Format::text); }

SpecDocument pair_doc(const LabelStructure& ls, const System& a, const System& b) {
    SpecDocument doc;
    doc.labels = ls;
    doc.systems.emplace("left", a);
    doc.systems.emplace("right", b);
    return doc;
}

struct Tally {
    std::size_t count = 0;
    std::string first;

    void add(bool ok, const std::string& what) {
        if (ok) return;
        if (count++ == 0) first = what;
    }
};

Outcome translations() {
    Outcome o;
    corpus::Rng rng(6);
    std::size_t pairs = 0;
    // bd disagreements split by whether the right operand has several initial states.
    Tally other, bd_multi, bd_single;
    auto bd_tally = [&](const std::vector<StateId>& right_initial) -> Tally& {
        return right_initial.size() > 1 ? bd_multi : bd_single;
    };
    for (int k = 0; k < 240; ++k) {
        const bool weighted = k % 2 == 1;
        const corpus::Alphabet alpha = corpus::restrict(
            rng, weighted ? corpus::weighted_alphabet(SyncOp::plus) : corpus::discrete_alphabet(3, k % 4 == 2), 3);
        const Dmts d1 = corpus::random_dmts(rng, alpha), d2 = corpus::random_dmts(rng, alpha);
        const auto& ls = alpha.ls;
        AcceptanceAutomaton a1, a2;
        try {
            a1 = db(d1);
            a2 = db(d2);
        } catch (const BudgetError&) {
            continue;
        }
        ++pairs;
        const NuExpr n1 = ddh(d1), n2 = ddh(d2);
        const Dmts b1 = bd(a1), b2 = bd(a2);
        const std::string where = describe(pair_doc(ls, d1, d2));
        Tally& via_bd = bd_tally(a2.initial);
        other.add(hd(n1, ls) == d1 && hd(n2, ls) == d2, "hd(ddh(d)) differs from d" + where);
        const bool r = mr_dmts(d1, d2, ls).holds;
        other.add(mr_aa(a1, a2, ls).holds == r, "db changes the refinement verdict" + where);
        other.add(mr_nu(n1, n2, ls).holds == r, "ddh changes the refinement verdict" + where);
        via_bd.add(mr_dmts(b1, b2, ls).holds == r, "bd(db) changes the refinement verdict" + where);
        for (MetricKind kind : kMetrics) {
            const auto m = make_metric(kind, 0.9);
            const double v = refinement_distance(d1, d2, ls, m).value;
            const double tol = metric_tol(kind);
            const std::string name = std::string(to_string(kind));
            other.add(near(refinement_distance(a1, a2, ls, m).value, v, tol), name + " distance differs under db" + where);
            other.add(near(refinement_distance(n1, n2, ls, m).value, v, tol), name + " distance differs under ddh" + where);
            via_bd.add(near(refinement_distance(b1, b2, ls, m).value, v, tol), name + " distance differs under bd" + where);
        }
        // bd on a random acceptance automaton.
        const corpus::AaShape consistent{6, 3, 2, 0.0};
        const AcceptanceAutomaton c1 = corpus::random_aa(rng, alpha, consistent),
                                  c2 = corpus::random_aa(rng, alpha, consistent);
        const Dmts e1 = bd(c1), e2 = bd(c2);
        Tally& direct = bd_tally(c2.initial);
        direct.add(mr_aa(c1, c2, ls).holds == mr_dmts(e1, e2, ls).holds,
                   "bd changes the refinement verdict" + describe(pair_doc(ls, c1, c2)));
        for (MetricKind kind : kMetrics) {
            const auto m = make_metric(kind, 0.9);
            direct.add(near(refinement_distance(c1, c2, ls, m).value, refinement_distance(e1, e2, ls, m).value,
                            metric_tol(kind)),
                       std::string(to_string(kind)) + " distance differs under bd" + describe(pair_doc(ls, c1, c2)));
        }
    }
    o.require(pairs >= 200, "only " + std::to_string(pairs) + " pairs");
    const std::string counts = std::to_string(pairs) + " pairs; failed checks: " + std::to_string(other.count) +
                               " db/ddh/hd, " + std::to_string(bd_single.count) + " bd with one right initial state, " +
                               std::to_string(bd_multi.count) + " bd with several right initial states";
    if (other.count) o.require(false, counts + "; first: " + other.first);
    else if (bd_single.count) o.require(false, counts + "; first: " + bd_single.first);
    else if (bd_multi.count) o.require(false, counts + "; first: " + bd_multi.first);
    if (o.pass) o.detail = counts;
    return o;
}

struct Triple {
    AcceptanceAutomaton a1, a2, a3;
};

SpecDocument triple_doc(const LabelStructure& ls, const Triple& t) {
    SpecDocument doc;
    doc.labels = ls;
    doc.systems.emplace("A1", t.a1);
    doc.systems.emplace("A2", t.a2);
    doc.systems.emplace("A3", t.a3);
    return doc;
}

Outcome adjunction() {
    Outcome o;
    corpus::Rng rng(7);
    const corpus::AaShape shape{3, 2, 2, 0.05};
    std::size_t discrete_count = 0, weighted_count = 0, skipped = 0, weighted_failures = 0, unreachable = 0;
    std::string first_weighted;
    const auto alpha_d = corpus::discrete_alphabet(2);
    while (discrete_count < 100) {
        const Triple t{corpus::random_aa(rng, alpha_d, shape), corpus::random_aa(rng, alpha_d, shape),
                       corpus::random_aa(rng, alpha_d, shape)};
        AcceptanceAutomaton q;
        try {
            q = quotient(t.a3, t.a1, alpha_d.ls).aa;
        } catch (const BudgetError&) {
            ++skipped;
            continue;
        }
        ++discrete_count;
        const auto& ls = alpha_d.ls;
        const AcceptanceAutomaton c = compose(t.a1, t.a2, ls);
        const bool lhs = mr_aa(c, t.a3, ls).holds;
        const bool rhs = mr_aa(t.a2, q, ls).holds;
        o.require(lhs == rhs, std::string("csp triple: compose ") + (lhs ? "refines" : "does not refine") +
                                  " but the quotient check says otherwise" + describe(triple_doc(ls, t)));
        const auto m = make_metric(MetricKind::discrete);
        o.require(refinement_distance(c, t.a3, ls, m).value == refinement_distance(t.a2, q, ls, m).value,
                  "csp triple: discrete distances differ" + describe(triple_doc(ls, t)));
    }
    const auto alpha_w = corpus::weighted_alphabet(SyncOp::plus, 1, 2);
    while (weighted_count < 50) {
        const auto alpha = corpus::restrict(rng, alpha_w, 3);
        const Triple t{corpus::random_aa(rng, alpha, shape), corpus::random_aa(rng, alpha, shape),
                       corpus::random_aa(rng, alpha, shape)};
        AcceptanceAutomaton q;
        try {
            q = quotient(t.a3, t.a1, alpha.ls).aa;
        } catch (const BudgetError&) {
            ++skipped;
            continue;
        }
        ++weighted_count;
        const auto m = make_metric(MetricKind::discounting, 0.5);
        const double lhs = refinement_distance(compose(t.a1, t.a2, alpha.ls), t.a3, alpha.ls, m).value;
        const double rhs = refinement_distance(t.a2, q, alpha.ls, m).value;
        if (!near(lhs, rhs, 1e-6)) {
            if (std::isinf(rhs) && !std::isinf(lhs)) ++unreachable;
            if (weighted_failures++ == 0)
                first_weighted = "plus triple: md(A1||A2,A3) = " + format_number(lhs) + " but md(A2,A3/A1) = " +
                                 format_number(rhs) + describe(triple_doc(alpha.ls, t));
        }
    }
    if (weighted_failures)
        o.require(false, std::to_string(weighted_failures) + " of 50 plus triples disagree (" +
                             std::to_string(unreachable) + " with a finite composed distance and an infinite " +
                             "quotient distance); first: " + first_weighted);
    if (o.pass)
        o.detail = std::to_string(discrete_count) + " csp and " + std::to_string(weighted_count) +
                   " plus triples, " + std::to_string(skipped) + " regenerated over budget";
    return o;
}

Outcome lattice_laws() {
    Outcome o;
    corpus::Rng rng(8);
    const corpus::DmtsShape shape{4, 2, 2, 2};
    // Implementation universes for the bounded oracles.
    const auto alpha_d = corpus::discrete_alphabet(2);
    const LtsUniverse small_d = enumerate_lts(2, alpha_d.impl_labels);
    const LtsUniverse big_d = enumerate_lts(3, alpha_d.impl_labels);
    const auto alpha_w = corpus::weighted_alphabet(SyncOp::plus, 1, 1);
    const LtsUniverse big_w = enumerate_lts(3, alpha_w.impl_labels);
    const LtsUniverse small_w = enumerate_lts(2, alpha_w.impl_labels);
    auto members = [](const ImplementationSet& s) { return std::set<Lts>(s.implementations.begin(), s.implementations.end()); };

    for (int k = 0; k < 120; ++k) {
        const bool weighted = k % 2 == 1;
        const auto& alpha = weighted ? alpha_w : alpha_d;
        const auto& ls = alpha.ls;
        const Dmts d1 = corpus::random_dmts(rng, alpha, shape), d2 = corpus::random_dmts(rng, alpha, shape),
                   d3 = corpus::random_dmts(rng, alpha, shape);
        const std::string where = describe([&] {
            SpecDocument doc;
            doc.labels = ls;
            doc.systems.emplace("D1", d1);
            doc.systems.emplace("D2", d2);
            doc.systems.emplace("D3", d3);
            return doc;
        }());
        const Dmts dis = disjoin(d1, d2), con = conjoin(d2, d3, ls);
        const bool r13 = mr_dmts(d1, d3, ls).holds, r23 = mr_dmts(d2, d3, ls).holds, r12 = mr_dmts(d1, d2, ls).holds;
        o.require(mr_dmts(dis, d3, ls).holds == (r13 && r23), "disjunction is not a join" + where);
        o.require(mr_dmts(d1, con, ls).holds == (r12 && r13), "conjunction is not a meet" + where);
        if (!weighted) {
            auto i1 = members(implementations_upto(System{d1}, ls, small_d));
            auto i2 = members(implementations_upto(System{d2}, ls, small_d));
            auto i3 = members(implementations_upto(System{d3}, ls, small_d));
            std::set<Lts> uni = i1, inter;
            uni.insert(i2.begin(), i2.end());
            std::set_intersection(i2.begin(), i2.end(), i3.begin(), i3.end(), std::inserter(inter, inter.end()));
            o.require(members(implementations_upto(System{dis}, ls, small_d)) == uni,
                      "implementations of a disjunction are not the union" + where);
            o.require(members(implementations_upto(System{con}, ls, small_d)) == inter,
                      "implementations of a conjunction are not the intersection" + where);
        }
        for (MetricKind kind : kMetrics) {
            const auto m = make_metric(kind, 0.8);
            const double tol = metric_tol(kind);
            const std::string name = std::string(to_string(kind));
            const double m13 = refinement_distance(d1, d3, ls, m).value, m23 = refinement_distance(d2, d3, ls, m).value;
            const double m12 = refinement_distance(d1, d2, ls, m).value;
            o.require(near(refinement_distance(dis, d3, ls, m).value, std::max(m13, m23), tol),
                      name + " distance from a disjunction is not the max" + where);
            o.require(refinement_distance(d1, con, ls, m).value + tol >= std::max(m12, m13),
                      name + " distance to a conjunction is below the max" + where);
            // zero distance iff refinement
            o.require((m12 <= tol) == r12, name + " distance 0 does not match refinement" + where);
            o.require((m13 <= tol) == r13, name + " distance 0 does not match refinement" + where);
        }
        // modal implies thorough, thd <= md
        const auto& universe = weighted ? big_w : big_d;
        if (k < 60) {
            if (r12)
                o.require(tr_oracle(System{d1}, System{d2}, ls, universe).holds,
                          "modal refinement without thorough refinement" + where);
            for (MetricKind kind : kMetrics) {
                const auto m = make_metric(kind, 0.8);
                const double md = refinement_distance(d1, d2, ls, m).value;
                const auto thd = thorough_distance_oracle(System{d1}, System{d2}, ls, m, weighted ? small_w : small_d);
                o.require(thd.value <= md + metric_tol(kind) + 1e-9,
                          std::string(to_string(kind)) + " thorough distance " + format_number(thd.value) +
                              " above modal distance " + format_number(md) + where);
            }
        }
    }
    // composition bound P for (discounting, plus)
    const auto alpha_p = corpus::weighted_alphabet(SyncOp::plus, 1, 2);
    const corpus::AaShape shape_p{3, 2, 2, 0.05};
    const auto m = make_metric(MetricKind::discounting, 0.8);
    const auto P = composition_bound_P(m, SyncOp::plus);
    for (int k = 0; k < 100; ++k) {
        const auto alpha = corpus::restrict(rng, alpha_p, 3);
        const auto& ls = alpha.ls;
        const auto a1 = corpus::random_aa(rng, alpha, shape_p), a2 = corpus::random_aa(rng, alpha, shape_p);
        const auto a3 = corpus::random_aa(rng, alpha, shape_p), a4 = corpus::random_aa(rng, alpha, shape_p);
        const double lhs = refinement_distance(compose(a1, a2, ls), compose(a3, a4, ls), ls, m).value;
        const double bound = P(refinement_distance(a1, a3, ls, m).value, refinement_distance(a2, a4, ls, m).value);
        o.require(lhs <= bound + 1e-6, "composition exceeds the P bound: " + format_number(lhs) + " > " +
                                           format_number(bound));
    }
    return o;
}

} // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));
    auto run = [&](int number, const char* title, double limit, const std::function<Outcome()>& body) {
        return only.empty() || only.count(number) ? run_one(number, title, limit, body) : 0;
    };
    int failures = 0;
    failures += run(1, "vending-machine refinement", 1, vending);
    failures += run(2, "request-grant implementations", 1, grants);
    failures += run(3, "discounting distance", 1, discounting);
    failures += run(4, "conjunction defect", 1, conjunction_defect);
    failures += run(5, "quotient example", 5, fig5);
    failures += run(6, "translation invariance", 120, translations);
    failures += run(7, "quotient adjunction", 300, adjunction);
    failures += run(8, "lattice and soundness laws", 600, lattice_laws);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
