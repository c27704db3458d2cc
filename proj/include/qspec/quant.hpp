#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "qspec/model.hpp"
#include "qspec/refine.hpp"

namespace qspec {

enum class MetricKind { discrete, pointwise, discounting };

std::string_view to_string(MetricKind kind);
std::optional<MetricKind> parse_metric(std::string_view text);

/// A recursively specified trace distance over the extended non-negative reals.
class TraceDistanceSpec {
public:
    TraceDistanceSpec(MetricKind kind, double lambda) : kind_(kind), lambda_(lambda) {}

    MetricKind kind() const { return kind_; }
    double lambda() const { return lambda_; }

    /// Distance iterator F(a, b, alpha), given the label distance d(a, b) and whether a ⊑ b.
    double step(double label_dist, bool leq, double alpha) const;
    double F(const Label& a, const Label& b, double alpha, const LabelStructure& ls) const;
    double eval(double value) const { return value; }
    bool recursively_separating() const { return true; }

private:
    MetricKind kind_;
    double lambda_;
};

/// Throws ValidationError unless 0 <= lambda < 1 for discounting.
TraceDistanceSpec make_metric(MetricKind kind, double lambda = 0.0);

struct DistanceTable {
    std::size_t left_size = 0;
    std::size_t right_size = 0;
    std::vector<double> values;  // row-major, left state major
    bool converged = false;
    double error_bound = 0.0;
    std::size_t rounds = 0;

    double at(StateId s1, StateId s2) const { return values[s1 * right_size + s2]; }
};

struct DistanceResult {
    double value = 0.0;
    DistanceTable table;
};

inline constexpr double kDefaultTolerance = 1e-9;

DistanceResult refinement_distance(const Dmts& d1, const Dmts& d2, const LabelStructure& ls,
                                   const TraceDistanceSpec& m, double tol = kDefaultTolerance);
DistanceResult refinement_distance(const AcceptanceAutomaton& a1, const AcceptanceAutomaton& a2,
                                   const LabelStructure& ls, const TraceDistanceSpec& m,
                                   double tol = kDefaultTolerance);
DistanceResult refinement_distance(const NuExpr& n1, const NuExpr& n2, const LabelStructure& ls,
                                   const TraceDistanceSpec& m, double tol = kDefaultTolerance);
/// Same formalism uses the native equations (LTS as DMTS); mixed pairs go through AA.
DistanceResult refinement_distance(const System& s1, const System& s2, const LabelStructure& ls,
                                   const TraceDistanceSpec& m, double tol = kDefaultTolerance);

struct MembershipResult {
    bool member = false;
    double distance = 0.0;
    /// The distance is within tol of alpha, so the verdict depends on rounding.
    bool near_threshold = false;
};

MembershipResult relaxed_membership(const Lts& i, const System& s, double alpha, const LabelStructure& ls,
                                    const TraceDistanceSpec& m, double tol = kDefaultTolerance);

/// The α-slice {(s1,s2) | table(s1,s2) <= alpha}.
std::vector<StatePair> witness_family(const DistanceTable& table, double alpha);

using CompositionBound = std::function<double(double, double)>;

/// Throws CapabilityError for unsupported (metric, sync) combinations.
CompositionBound composition_bound_P(const TraceDistanceSpec& m, SyncOp sync);

} // namespace qspec
