#include "qspec/labels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "qspec/errors.hpp"

namespace qspec {

namespace {

// Lower endpoint (value, open) of `a` is at least as tight as that of `b`:
// every point admitted by a's lower bound is admitted by b's.
bool lower_within(double a, bool a_open, double b, bool b_open) {
    if (a != b) return a > b;
    return a_open || !b_open;
}

bool upper_within(double a, bool a_open, double b, bool b_open) {
    if (a != b) return a < b;
    return a_open || !b_open;
}

// x - y on the extended reals with inf - inf (same sign) taken as 0.
double excess(double x, double y) {
    if (std::isinf(x) && std::isinf(y) && (x > 0) == (y > 0)) return 0.0;
    return x - y;
}

const WeightedLabel* as_weighted(const Label& l) { return std::get_if<WeightedLabel>(&l); }

[[noreturn]] void kind_mismatch(const Label& a, const Label& b) {
    throw MismatchError("labels of different kinds: " + to_string(a) + " and " + to_string(b));
}

std::vector<std::string> sorted_unique(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<std::string> set_intersection(const std::vector<std::string>& a,
                                          const std::vector<std::string>& b) {
    std::vector<std::string> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Interval interval_plus(const Interval& a, const Interval& b) {
    return Interval::make(a.lo + b.lo, a.hi + b.hi, a.lo_open || b.lo_open, a.hi_open || b.hi_open);
}

Interval interval_max(const Interval& a, const Interval& b) {
    double lo;
    bool lo_open;
    if (a.lo != b.lo) {
        lo = a.lo > b.lo ? a.lo : b.lo;
        lo_open = a.lo > b.lo ? a.lo_open : b.lo_open;
    } else {
        lo = a.lo;
        lo_open = a.lo_open || b.lo_open;
    }
    double hi;
    bool hi_open;
    if (a.hi != b.hi) {
        hi = a.hi > b.hi ? a.hi : b.hi;
        hi_open = a.hi > b.hi ? a.hi_open : b.hi_open;
    } else {
        hi = a.hi;
        hi_open = a.hi_open && b.hi_open;
    }
    return Interval::make(lo, hi, lo_open, hi_open);
}

// Residual of interval addition: the largest x with a1 + x inside a3.
std::optional<Interval> residual_plus(const Interval& a1, const Interval& a3) {
    double lo;
    if (a3.lo == -kInfinity) lo = -kInfinity;
    else if (a1.lo == -kInfinity) return std::nullopt;
    else lo = a3.lo - a1.lo;
    double hi;
    if (a3.hi == kInfinity) hi = kInfinity;
    else if (a1.hi == kInfinity) return std::nullopt;
    else hi = a3.hi - a1.hi;
    const Interval x = Interval::make(lo, hi, a3.lo_open && !a1.lo_open, a3.hi_open && !a1.hi_open);
    if (x.empty()) return std::nullopt;
    return x;
}

// Residual of endpoint-wise maximum.
std::optional<Interval> residual_max(const Interval& a1, const Interval& a3) {
    if (!upper_within(a1.hi, a1.hi_open, a3.hi, a3.hi_open)) return std::nullopt;
    double lo = -kInfinity;
    bool lo_open = true;
    if (!lower_within(a1.lo, a1.lo_open, a3.lo, a3.lo_open)) {
        lo = a3.lo;
        lo_open = a3.lo_open;
    }
    const Interval x = Interval::make(lo, a3.hi, lo_open, a3.hi_open);
    if (x.empty()) return std::nullopt;
    return x;
}

// Residual of intersection: the largest x meeting a1 only inside a3.
std::optional<Interval> residual_cap(const Interval& a1, const Interval& a3) {
    if (!a1.intersect(a3)) return std::nullopt;
    double lo = -kInfinity;
    bool lo_open = true;
    if (!lower_within(a1.lo, a1.lo_open, a3.lo, a3.lo_open)) {
        lo = a3.lo;
        lo_open = a3.lo_open;
    }
    double hi = kInfinity;
    bool hi_open = true;
    if (!upper_within(a1.hi, a1.hi_open, a3.hi, a3.hi_open)) {
        hi = a3.hi;
        hi_open = a3.hi_open;
    }
    return Interval::make(lo, hi, lo_open, hi_open);
}

} // namespace

// ---------------------------------------------------------------- Interval

Interval Interval::make(double lo, double hi, bool lo_open, bool hi_open) {
    Interval i{lo, hi, lo_open, hi_open};
    if (std::isinf(i.lo)) i.lo_open = true;
    if (std::isinf(i.hi)) i.hi_open = true;
    return i;
}

bool Interval::empty() const {
    if (std::isnan(lo) || std::isnan(hi)) return true;
    if (lo > hi) return true;
    if (lo == hi) return lo_open || hi_open;
    return false;
}

bool Interval::contains(const Interval& inner) const {
    return lower_within(inner.lo, inner.lo_open, lo, lo_open) &&
           upper_within(inner.hi, inner.hi_open, hi, hi_open);
}

std::optional<Interval> Interval::intersect(const Interval& other) const {
    Interval r;
    if (lower_within(lo, lo_open, other.lo, other.lo_open)) {
        r.lo = lo;
        r.lo_open = lo_open;
    } else {
        r.lo = other.lo;
        r.lo_open = other.lo_open;
    }
    if (upper_within(hi, hi_open, other.hi, other.hi_open)) {
        r.hi = hi;
        r.hi_open = hi_open;
    } else {
        r.hi = other.hi;
        r.hi_open = other.hi_open;
    }
    if (r.empty()) return std::nullopt;
    return r;
}

// ---------------------------------------------------------------- Label

Label discrete(std::string name) { return DiscreteLabel{std::move(name)}; }

Label weighted(std::string action, Interval interval) {
    return WeightedLabel{std::move(action), interval};
}

Label weighted(std::string action, double lo, double hi) {
    return WeightedLabel{std::move(action), Interval::closed(lo, hi)};
}

Label label_set(std::vector<std::string> members) {
    return SetLabel{sorted_unique(std::move(members))};
}

std::string format_number(double value) {
    if (value == kInfinity) return "inf";
    if (value == -kInfinity) return "-inf";
    if (value == 0.0) return "0";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) return std::to_string(value);
    return std::string(buf, end);
}

std::string to_string(const Interval& i) {
    std::string s;
    s += i.lo_open ? '(' : '[';
    s += format_number(i.lo);
    s += ',';
    s += format_number(i.hi);
    s += i.hi_open ? ')' : ']';
    return s;
}

std::string to_string(const Label& label) {
    struct Printer {
        std::string operator()(const DiscreteLabel& l) const { return l.name; }
        std::string operator()(const WeightedLabel& l) const { return l.action + to_string(l.interval); }
        std::string operator()(const SetLabel& l) const {
            std::string s = "{";
            for (std::size_t i = 0; i < l.members.size(); ++i) {
                if (i) s += ',';
                s += l.members[i];
            }
            return s + "}";
        }
    };
    return std::visit(Printer{}, label);
}

std::string_view to_string(LabelKind kind) {
    switch (kind) {
    case LabelKind::discrete: return "discrete";
    case LabelKind::weighted: return "weighted";
    case LabelKind::set: return "set";
    }
    return "?";
}

std::string_view to_string(SyncOp op) {
    switch (op) {
    case SyncOp::csp: return "csp";
    case SyncOp::plus: return "plus";
    case SyncOp::max: return "max";
    case SyncOp::cap: return "cap";
    }
    return "?";
}

std::optional<LabelKind> parse_label_kind(std::string_view text) {
    if (text == "discrete") return LabelKind::discrete;
    if (text == "weighted") return LabelKind::weighted;
    if (text == "set") return LabelKind::set;
    return std::nullopt;
}

std::optional<SyncOp> parse_sync_op(std::string_view text) {
    if (text == "csp") return SyncOp::csp;
    if (text == "plus") return SyncOp::plus;
    if (text == "max") return SyncOp::max;
    if (text == "cap") return SyncOp::cap;
    return std::nullopt;
}

// ---------------------------------------------------------------- LabelStructure

LabelStructure::LabelStructure() { build_closure(); }

LabelStructure::LabelStructure(LabelKind kind, std::vector<std::string> alphabet,
                               std::vector<std::pair<std::string, std::string>> order, SyncOp sync)
    : kind_(kind), alphabet_(sorted_unique(std::move(alphabet))), order_(std::move(order)), sync_(sync) {
    if (kind_ != LabelKind::discrete && !order_.empty())
        throw ValidationError("an explicit label order is only allowed for discrete labels");
    if (kind_ == LabelKind::discrete && sync_ != SyncOp::csp)
        throw CapabilityError("discrete labels support only csp synchronization, got " +
                              std::string(to_string(sync_)));
    if (kind_ == LabelKind::set && (sync_ == SyncOp::plus || sync_ == SyncOp::max))
        throw CapabilityError("set labels support only csp or cap synchronization, got " +
                              std::string(to_string(sync_)));
    for (const auto& [a, b] : order_) {
        if (!has_symbol(a)) throw ValidationError("order mentions undeclared symbol '" + a + "'");
        if (!has_symbol(b)) throw ValidationError("order mentions undeclared symbol '" + b + "'");
    }
    build_closure();
}

LabelStructure LabelStructure::with_sync(SyncOp sync) const {
    return LabelStructure(kind_, alphabet_, order_, sync);
}

LabelStructure LabelStructure::with_order(std::vector<std::pair<std::string, std::string>> order) const {
    return LabelStructure(kind_, alphabet_, std::move(order), sync_);
}

std::optional<std::size_t> LabelStructure::index_of(std::string_view symbol) const {
    auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), symbol);
    if (it == alphabet_.end() || *it != symbol) return std::nullopt;
    return static_cast<std::size_t>(it - alphabet_.begin());
}

bool LabelStructure::has_symbol(std::string_view symbol) const { return index_of(symbol).has_value(); }

void LabelStructure::build_closure() {
    const std::size_t n = alphabet_.size();
    leq_.assign(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) leq_[i][i] = 1;
    for (const auto& [a, b] : order_) leq_[*index_of(a)][*index_of(b)] = 1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (leq_[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (leq_[k][j]) leq_[i][j] = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (leq_[i][j] && leq_[j][i])
                throw ValidationError("label order is not antisymmetric: " + alphabet_[i] + " and " +
                                      alphabet_[j] + " refine each other");

    warnings_.clear();
    if (kind_ != LabelKind::discrete) return;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            std::size_t maximal = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (!leq_[c][a] || !leq_[c][b]) continue;
                bool is_max = true;
                for (std::size_t d = 0; d < n && is_max; ++d)
                    if (d != c && leq_[d][a] && leq_[d][b] && leq_[c][d]) is_max = false;
                if (is_max) ++maximal;
            }
            if (maximal > 1)
                warnings_.push_back("symbols " + alphabet_[a] + " and " + alphabet_[b] +
                                    " have several maximal common refinements; their conjunction is "
                                    "left undefined and may not be a greatest lower bound");
        }
    }
}

bool LabelStructure::symbol_leq(std::string_view a, std::string_view b) const {
    auto ia = index_of(a);
    auto ib = index_of(b);
    if (!ia || !ib) return a == b;
    return leq_[*ia][*ib] != 0;
}

void LabelStructure::check_label(const Label& label) const {
    switch (kind_) {
    case LabelKind::discrete: {
        const auto* l = std::get_if<DiscreteLabel>(&label);
        if (!l) throw ValidationError("label " + to_string(label) + " is not a discrete label");
        if (!has_symbol(l->name)) throw ValidationError("undeclared label '" + l->name + "'");
        return;
    }
    case LabelKind::weighted: {
        const auto* l = std::get_if<WeightedLabel>(&label);
        if (!l) throw ValidationError("label " + to_string(label) + " is not a weighted label");
        if (!has_symbol(l->action)) throw ValidationError("undeclared action '" + l->action + "'");
        if (l->interval.empty()) throw ValidationError("empty interval in label " + to_string(label));
        return;
    }
    case LabelKind::set: {
        const auto* l = std::get_if<SetLabel>(&label);
        if (!l) throw ValidationError("label " + to_string(label) + " is not a set label");
        if (l->members.empty()) throw ValidationError("empty label set");
        for (const auto& m : l->members)
            if (!has_symbol(m)) throw ValidationError("undeclared implementation label '" + m + "'");
        return;
    }
    }
}

std::vector<Label> LabelStructure::maximal_labels() const {
    std::vector<Label> out;
    switch (kind_) {
    case LabelKind::discrete:
        for (std::size_t i = 0; i < alphabet_.size(); ++i) {
            bool is_max = true;
            for (std::size_t j = 0; j < alphabet_.size() && is_max; ++j)
                if (j != i && leq_[i][j]) is_max = false;
            if (is_max) out.push_back(DiscreteLabel{alphabet_[i]});
        }
        break;
    case LabelKind::weighted:
        for (const auto& u : alphabet_)
            out.push_back(WeightedLabel{u, Interval::make(-kInfinity, kInfinity, true, true)});
        break;
    case LabelKind::set:
        if (!alphabet_.empty()) out.push_back(SetLabel{alphabet_});
        break;
    }
    return out;
}

bool LabelStructure::operator==(const LabelStructure& other) const {
    return kind_ == other.kind_ && alphabet_ == other.alphabet_ && sync_ == other.sync_ &&
           leq_ == other.leq_;
}

// ---------------------------------------------------------------- operations

bool refines(const Label& a, const Label& b, const LabelStructure& ls) {
    if (a.index() != b.index()) kind_mismatch(a, b);
    if (const auto* x = std::get_if<DiscreteLabel>(&a))
        return ls.symbol_leq(x->name, std::get<DiscreteLabel>(b).name);
    if (const auto* x = as_weighted(a)) {
        const auto& y = std::get<WeightedLabel>(b);
        return x->action == y.action && y.interval.contains(x->interval);
    }
    const auto& x = std::get<SetLabel>(a).members;
    const auto& y = std::get<SetLabel>(b).members;
    return std::includes(y.begin(), y.end(), x.begin(), x.end());
}

bool is_implementation_label(const Label& a, const LabelStructure& ls) {
    if (const auto* x = std::get_if<DiscreteLabel>(&a)) {
        for (const auto& s : ls.alphabet())
            if (s != x->name && ls.symbol_leq(s, x->name)) return false;
        return true;
    }
    if (const auto* x = as_weighted(a)) return x->interval.is_point();
    return std::get<SetLabel>(a).members.size() == 1;
}

std::optional<Label> conjoin(const Label& a, const Label& b, const LabelStructure& ls) {
    if (a.index() != b.index()) kind_mismatch(a, b);
    if (const auto* x = std::get_if<DiscreteLabel>(&a)) {
        const auto& y = std::get<DiscreteLabel>(b);
        if (x->name == y.name) return a;
        std::vector<std::string> maximal;
        for (const auto& c : ls.alphabet()) {
            if (!ls.symbol_leq(c, x->name) || !ls.symbol_leq(c, y.name)) continue;
            bool is_max = true;
            for (const auto& d : ls.alphabet())
                if (d != c && ls.symbol_leq(d, x->name) && ls.symbol_leq(d, y.name) && ls.symbol_leq(c, d))
                    is_max = false;
            if (is_max) maximal.push_back(c);
        }
        if (maximal.size() != 1) return std::nullopt;
        return DiscreteLabel{maximal.front()};
    }
    if (const auto* x = as_weighted(a)) {
        const auto& y = std::get<WeightedLabel>(b);
        if (x->action != y.action) return std::nullopt;
        auto i = x->interval.intersect(y.interval);
        if (!i) return std::nullopt;
        return WeightedLabel{x->action, *i};
    }
    auto members = set_intersection(std::get<SetLabel>(a).members, std::get<SetLabel>(b).members);
    if (members.empty()) return std::nullopt;
    return SetLabel{std::move(members)};
}

std::optional<Label> synchronize(const Label& a, const Label& b, const LabelStructure& ls) {
    if (a.index() != b.index()) kind_mismatch(a, b);
    if (std::holds_alternative<DiscreteLabel>(a)) {
        if (a == b) return a;
        return std::nullopt;
    }
    if (const auto* x = as_weighted(a)) {
        const auto& y = std::get<WeightedLabel>(b);
        if (x->action != y.action) return std::nullopt;
        switch (ls.sync()) {
        case SyncOp::csp:
            if (a == b) return a;
            return std::nullopt;
        case SyncOp::plus: return WeightedLabel{x->action, interval_plus(x->interval, y.interval)};
        case SyncOp::max: return WeightedLabel{x->action, interval_max(x->interval, y.interval)};
        case SyncOp::cap: return conjoin(a, b, ls);
        }
    }
    // Set labels: csp on implementation labels lifted to sets is intersection.
    return conjoin(a, b, ls);
}

double label_distance(const Label& a, const Label& b, const LabelStructure& ls) {
    if (a.index() != b.index()) kind_mismatch(a, b);
    if (const auto* x = as_weighted(a)) {
        const auto& y = std::get<WeightedLabel>(b);
        if (x->action != y.action) return kInfinity;
        const double lower = excess(y.interval.lo, x->interval.lo);
        const double upper = excess(x->interval.hi, y.interval.hi);
        return std::max({lower, upper, 0.0});
    }
    return refines(a, b, ls) ? 0.0 : kInfinity;
}

std::vector<Label> residuals(const Label& a1, const Label& a3, const LabelStructure& ls) {
    if (a1.index() != a3.index()) kind_mismatch(a1, a3);
    if (std::holds_alternative<SetLabel>(a1))
        throw CapabilityError("residuals are not supported for set labels with " +
                              std::string(to_string(ls.sync())) + " synchronization");
    if (std::holds_alternative<DiscreteLabel>(a1)) {
        if (refines(a1, a3, ls)) return {a1};
        return {};
    }
    const auto& x = std::get<WeightedLabel>(a1);
    const auto& z = std::get<WeightedLabel>(a3);
    if (x.action != z.action) return {};
    std::optional<Interval> r;
    switch (ls.sync()) {
    case SyncOp::csp:
        if (refines(a1, a3, ls)) return {a1};
        return {};
    case SyncOp::plus: r = residual_plus(x.interval, z.interval); break;
    case SyncOp::max: r = residual_max(x.interval, z.interval); break;
    case SyncOp::cap: r = residual_cap(x.interval, z.interval); break;
    }
    if (!r) return {};
    return {WeightedLabel{x.action, *r}};
}

std::vector<Label> non_synchronizing(const Label& a1, const LabelStructure& ls) {
    const auto* x = as_weighted(a1);
    if (!x || ls.sync() != SyncOp::cap) return {};
    std::vector<Label> out;
    const Interval& i = x->interval;
    if (i.lo != -kInfinity) out.push_back(WeightedLabel{x->action, Interval::make(-kInfinity, i.lo, true, !i.lo_open)});
    if (i.hi != kInfinity) out.push_back(WeightedLabel{x->action, Interval::make(i.hi, kInfinity, !i.hi_open, true)});
    return out;
}

} // namespace qspec
