#pragma once

#include <compare>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qspec {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A real interval with independently open or closed endpoints.
/// Infinite endpoints are always stored as open.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_open = false;
    bool hi_open = false;

    static Interval closed(double lo, double hi) { return make(lo, hi, false, false); }
    static Interval point(double x) { return make(x, x, false, false); }
    /// Normalizes infinite endpoints to open. Does not reject empty intervals.
    static Interval make(double lo, double hi, bool lo_open, bool hi_open);

    bool empty() const;
    bool is_point() const { return !empty() && lo == hi; }
    /// True iff `inner` is a subset of this interval.
    bool contains(const Interval& inner) const;
    std::optional<Interval> intersect(const Interval& other) const;

    auto operator<=>(const Interval&) const = default;
};

struct DiscreteLabel {
    std::string name;
    auto operator<=>(const DiscreteLabel&) const = default;
};

struct WeightedLabel {
    std::string action;
    Interval interval;
    auto operator<=>(const WeightedLabel&) const = default;
};

/// A specification label given as a finite set of implementation labels.
/// Members are kept sorted and unique.
struct SetLabel {
    std::vector<std::string> members;
    auto operator<=>(const SetLabel&) const = default;
};

using Label = std::variant<DiscreteLabel, WeightedLabel, SetLabel>;

Label discrete(std::string name);
Label weighted(std::string action, Interval interval);
Label weighted(std::string action, double lo, double hi);
Label label_set(std::vector<std::string> members);

std::string to_string(const Interval& interval);
std::string to_string(const Label& label);
std::string format_number(double value);

enum class LabelKind { discrete, weighted, set };
enum class SyncOp { csp, plus, max, cap };

std::string_view to_string(LabelKind kind);
std::string_view to_string(SyncOp op);
std::optional<LabelKind> parse_label_kind(std::string_view text);
std::optional<SyncOp> parse_sync_op(std::string_view text);

/// The label algebra a document lives in: kind, declared symbols, the
/// refinement preorder on discrete symbols and the synchronization operator.
class LabelStructure {
public:
    LabelStructure();
    /// Throws ValidationError for cyclic preorders and unknown symbols,
    /// CapabilityError for unsupported (kind, sync) combinations.
    LabelStructure(LabelKind kind, std::vector<std::string> alphabet,
                   std::vector<std::pair<std::string, std::string>> order, SyncOp sync);

    LabelKind kind() const { return kind_; }
    SyncOp sync() const { return sync_; }
    const std::vector<std::string>& alphabet() const { return alphabet_; }
    const std::vector<std::pair<std::string, std::string>>& order() const { return order_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    LabelStructure with_sync(SyncOp sync) const;
    LabelStructure with_order(std::vector<std::pair<std::string, std::string>> order) const;

    bool has_symbol(std::string_view symbol) const;
    /// Reflexive-transitive closure of the declared order.
    bool symbol_leq(std::string_view a, std::string_view b) const;

    /// Throws ValidationError if the label does not belong to this structure.
    void check_label(const Label& label) const;

    /// The maximal labels: every label is below at least one of them.
    std::vector<Label> maximal_labels() const;

    bool operator==(const LabelStructure& other) const;

private:
    std::optional<std::size_t> index_of(std::string_view symbol) const;
    void build_closure();

    LabelKind kind_ = LabelKind::discrete;
    std::vector<std::string> alphabet_;
    std::vector<std::pair<std::string, std::string>> order_;
    SyncOp sync_ = SyncOp::csp;
    std::vector<std::vector<char>> leq_;
    std::vector<std::string> warnings_;
};

/// Label refinement a ⊑ b.
bool refines(const Label& a, const Label& b, const LabelStructure& ls);

/// True iff the label admits no strict refinement.
bool is_implementation_label(const Label& a, const LabelStructure& ls);

/// Partial conjunction: the greatest common lower bound, if it exists.
std::optional<Label> conjoin(const Label& a, const Label& b, const LabelStructure& ls);

/// Partial synchronization under the structure's operator.
std::optional<Label> synchronize(const Label& a, const Label& b, const LabelStructure& ls);

/// Asymmetric label hemimetric; 0 whenever a ⊑ b, infinite across actions.
double label_distance(const Label& a, const Label& b, const LabelStructure& ls);

/// Maximal labels x with synchronize(a1, x) defined and below a3.
/// Throws CapabilityError for set-valued labels.
std::vector<Label> residuals(const Label& a1, const Label& a3, const LabelStructure& ls);

/// Maximal labels that share a1's action but do not synchronize with it.
/// Non-empty only for interval intersection.
std::vector<Label> non_synchronizing(const Label& a1, const LabelStructure& ls);

} // namespace qspec
