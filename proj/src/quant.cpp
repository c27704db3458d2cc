#include "qspec/quant.hpp"

#include <algorithm>
#include <cmath>

#include "indexed.hpp"
#include "qspec/errors.hpp"

namespace qspec {

using detail::AcceptanceView;
using detail::IEdgeSet;
using detail::LabelTable;
using detail::ModalView;

std::string_view to_string(MetricKind kind) {
    switch (kind) {
    case MetricKind::discrete: return "discrete";
    case MetricKind::pointwise: return "pointwise";
    case MetricKind::discounting: return "discounting";
    }
    return "?";
}

std::optional<MetricKind> parse_metric(std::string_view text) {
    if (text == "discrete") return MetricKind::discrete;
    if (text == "pointwise") return MetricKind::pointwise;
    if (text == "discounting") return MetricKind::discounting;
    return std::nullopt;
}

double TraceDistanceSpec::step(double label_dist, bool leq, double alpha) const {
    switch (kind_) {
    case MetricKind::discrete: return leq ? alpha : kInfinity;
    case MetricKind::pointwise: return std::max(label_dist, alpha);
    case MetricKind::discounting:
        if (lambda_ == 0.0) return label_dist;
        return label_dist + lambda_ * alpha;
    }
    return kInfinity;
}

double TraceDistanceSpec::F(const Label& a, const Label& b, double alpha, const LabelStructure& ls) const {
    return step(label_distance(a, b, ls), refines(a, b, ls), alpha);
}

TraceDistanceSpec make_metric(MetricKind kind, double lambda) {
    if (kind == MetricKind::discounting && !(lambda >= 0.0 && lambda < 1.0))
        throw ValidationError("discount factor must lie in [0,1), got " + format_number(lambda));
    return TraceDistanceSpec(kind, kind == MetricKind::discounting ? lambda : 0.0);
}

namespace {

class Engine {
public:
    Engine(std::size_t n1, std::size_t n2, const LabelTable& table, const TraceDistanceSpec& m)
        : n1_(n1), n2_(n2), table_(table), m_(m), cur_(n1 * n2, 0.0), next_(n1 * n2, 0.0) {}

    double F(std::uint32_t a1, std::uint32_t a2, StateId t1, StateId t2) const {
        return m_.step(table_.dist(a1, a2), table_.leq(a1, a2), cur_[t1 * n2_ + t2]);
    }

    // sup over n1 of inf over n2 of F.
    double forward(const IEdgeSet& n1, const IEdgeSet& n2) const {
        double sup = 0.0;
        for (const auto& [a1, t1] : n1) {
            double inf = kInfinity;
            for (const auto& [a2, t2] : n2) inf = std::min(inf, F(a1, a2, t1, t2));
            sup = std::max(sup, inf);
            if (sup == kInfinity) break;
        }
        return sup;
    }

    // sup over n2 of inf over n1 of F.
    double backward(const IEdgeSet& n1, const IEdgeSet& n2) const {
        double sup = 0.0;
        for (const auto& [a2, t2] : n2) {
            double inf = kInfinity;
            for (const auto& [a1, t1] : n1) inf = std::min(inf, F(a1, a2, t1, t2));
            sup = std::max(sup, inf);
            if (sup == kInfinity) break;
        }
        return sup;
    }

    template <class Update>
    DistanceTable run(Update update, double tol) {
        const std::size_t pairs = cur_.size();
        const double lambda = m_.kind() == MetricKind::discounting ? m_.lambda() : 0.0;
        double dmax = 0.0;
        for (std::size_t i = 0; i < table_.size(); ++i)
            for (std::size_t j = 0; j < table_.size(); ++j) {
                const double d = table_.dist(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
                if (std::isfinite(d)) dmax = std::max(dmax, d);
            }
        DistanceTable out;
        out.left_size = n1_;
        out.right_size = n2_;
        std::size_t k = 0;
        double factor = 1.0;  // lambda^k
        for (;;) {
            for (std::size_t p = 0; p < pairs; ++p)
                next_[p] = update(static_cast<StateId>(p / n2_), static_cast<StateId>(p % n2_));
            ++k;
            factor *= lambda;
            const bool stationary = next_ == cur_;
            cur_.swap(next_);
            if (stationary) {
                out.converged = true;
                out.error_bound = 0.0;
                break;
            }
            if (m_.kind() == MetricKind::discounting && k > pairs) {
                const double bound = lambda == 0.0 ? 0.0 : factor * dmax / (1.0 - lambda);
                if (bound < tol) {
                    out.converged = true;
                    out.error_bound = bound;
                    break;
                }
            }
        }
        out.rounds = k;
        out.values = cur_;
        return out;
    }

private:
    std::size_t n1_;
    std::size_t n2_;
    const LabelTable& table_;
    const TraceDistanceSpec& m_;
    std::vector<double> cur_;
    std::vector<double> next_;
};

double aggregate(const DistanceTable& t, const std::vector<StateId>& init1, const std::vector<StateId>& init2) {
    double sup = 0.0;
    for (auto s1 : init1) {
        double inf = kInfinity;
        for (auto s2 : init2) inf = std::min(inf, t.at(s1, s2));
        sup = std::max(sup, inf);
    }
    return sup;
}

DistanceResult modal_distance(const ModalView& v1, const ModalView& v2, const LabelTable& table,
                              const TraceDistanceSpec& m, double tol) {
    Engine engine(v1.size(), v2.size(), table, m);
    auto update = [&](StateId s1, StateId s2) {
        double value = engine.forward(v1.may[s1], v2.may[s2]);
        if (value == kInfinity) return value;
        for (const auto& n2 : v2.must[s2]) {
            double inf = kInfinity;
            for (const auto& n1 : v1.must[s1]) inf = std::min(inf, engine.forward(n1, n2));
            value = std::max(value, inf);
            if (value == kInfinity) break;
        }
        return value;
    };
    DistanceResult r;
    r.table = engine.run(update, tol);
    r.value = aggregate(r.table, v1.initial, v2.initial);
    return r;
}

} // namespace

DistanceResult refinement_distance(const Dmts& d1, const Dmts& d2, const LabelStructure& ls,
                                   const TraceDistanceSpec& m, double tol) {
    LabelTable table(ls);
    auto v1 = detail::make_view(d1, table);
    auto v2 = detail::make_view(d2, table);
    table.finalize();
    return modal_distance(v1, v2, table, m, tol);
}

DistanceResult refinement_distance(const NuExpr& n1, const NuExpr& n2, const LabelStructure& ls,
                                   const TraceDistanceSpec& m, double tol) {
    return refinement_distance(hd_unchecked(n1), hd_unchecked(n2), ls, m, tol);
}

DistanceResult refinement_distance(const AcceptanceAutomaton& a1, const AcceptanceAutomaton& a2,
                                   const LabelStructure& ls, const TraceDistanceSpec& m, double tol) {
    LabelTable table(ls);
    auto v1 = detail::make_view(a1, table);
    auto v2 = detail::make_view(a2, table);
    table.finalize();
    Engine engine(v1.size(), v2.size(), table, m);
    auto update = [&](StateId s1, StateId s2) {
        double sup = 0.0;
        for (const auto& m1 : v1.tran[s1]) {
            double inf = kInfinity;
            for (const auto& m2 : v2.tran[s2]) {
                double v = engine.forward(m1, m2);
                if (v < inf) v = std::max(v, engine.backward(m1, m2));
                inf = std::min(inf, v);
            }
            sup = std::max(sup, inf);
            if (sup == kInfinity) break;
        }
        return sup;
    };
    DistanceResult r;
    r.table = engine.run(update, tol);
    r.value = aggregate(r.table, v1.initial, v2.initial);
    return r;
}

DistanceResult refinement_distance(const System& s1, const System& s2, const LabelStructure& ls,
                                   const TraceDistanceSpec& m, double tol) {
    const auto f1 = formalism_of(s1), f2 = formalism_of(s2);
    auto as_dmts = [](const System& s) {
        if (const auto* l = std::get_if<Lts>(&s)) return std::get<Dmts>(embed_lts(*l, Formalism::dmts));
        return std::get<Dmts>(s);
    };
    const bool modal1 = f1 == Formalism::lts || f1 == Formalism::dmts;
    const bool modal2 = f2 == Formalism::lts || f2 == Formalism::dmts;
    if (modal1 && modal2) return refinement_distance(as_dmts(s1), as_dmts(s2), ls, m, tol);
    if (f1 == Formalism::nu && f2 == Formalism::nu)
        return refinement_distance(std::get<NuExpr>(s1), std::get<NuExpr>(s2), ls, m, tol);
    return refinement_distance(to_aa(s1), to_aa(s2), ls, m, tol);
}

MembershipResult relaxed_membership(const Lts& i, const System& s, double alpha, const LabelStructure& ls,
                                    const TraceDistanceSpec& m, double tol) {
    System embedded = embed_lts(i, formalism_of(s) == Formalism::lts ? Formalism::dmts : formalism_of(s));
    MembershipResult r;
    r.distance = refinement_distance(embedded, s, ls, m, tol).value;
    r.member = r.distance <= alpha;
    r.near_threshold = std::isfinite(alpha) && std::isfinite(r.distance) && std::fabs(r.distance - alpha) <= tol;
    return r;
}

std::vector<StatePair> witness_family(const DistanceTable& table, double alpha) {
    std::vector<StatePair> out;
    for (StateId s1 = 0; s1 < table.left_size; ++s1)
        for (StateId s2 = 0; s2 < table.right_size; ++s2)
            if (table.at(s1, s2) <= alpha) out.emplace_back(s1, s2);
    return out;
}

CompositionBound composition_bound_P(const TraceDistanceSpec& m, SyncOp sync) {
    if (sync == SyncOp::plus && (m.kind() == MetricKind::discounting || m.kind() == MetricKind::pointwise))
        return [](double a, double b) { return a + b; };
    if (sync == SyncOp::csp && m.kind() == MetricKind::discrete)
        return [](double a, double b) { return std::max(a, b); };
    throw CapabilityError("no composition bound for the " + std::string(to_string(m.kind())) + " metric with " +
                          std::string(to_string(sync)) + " synchronization");
}

} // namespace qspec
