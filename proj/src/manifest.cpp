// Batch runner for JSON check manifests.
#include <cmath>
#include <filesystem>

#include "qspec/errors.hpp"
#include "qspec/refine.hpp"
#include "session.hpp"

namespace qspec::session {

namespace {

using nlohmann::json;

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return "parse";
    if (dynamic_cast<const ValidationError*>(&e)) return "validation";
    if (dynamic_cast<const MismatchError*>(&e)) return "mismatch";
    if (dynamic_cast<const CapabilityError*>(&e)) return "capability";
    if (dynamic_cast<const BudgetError*>(&e)) return "budget";
    return "internal";
}

json number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double read_number(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return kInfinity;
        if (s == "-inf") return -kInfinity;
        throw ValidationError("expected a number, got \"" + s + "\"");
    }
    return j.get<double>();
}

std::vector<std::string> operands(const json& check, std::size_t n) {
    auto names = check.value("operands", std::vector<std::string>{});
    if (names.size() != n)
        throw ValidationError(check.value("op", std::string("?")) + " takes " + std::to_string(n) + " operands");
    return names;
}

TraceDistanceSpec metric_of(const json& params) {
    const std::string name = params.value("metric", std::string("discounting"));
    const auto kind = parse_metric(name);
    if (!kind) throw ValidationError("unknown metric " + name);
    return make_metric(*kind, params.value("lambda", *kind == MetricKind::discounting ? 0.9 : 0.0));
}

/// Runs one check and returns its result; expectations are compared by the caller.
json run_check(SpecDocument& doc, const json& check, Options o) {
    const std::string op = check.at("op").get<std::string>();
    const json params = check.value("params", json::object());
    o.tol = params.value("tol", o.tol);
    o.max_states = params.value("max_states", o.max_states);
    auto result_name = [&] { return check.value("result", op); };
    auto add = [&](System s) {
        const std::string name = result_name();
        doc.systems.insert_or_assign(name, std::move(s));
        return json{{"result", name}};
    };
    if (op == "refine") {
        const auto n = operands(check, 2);
        return json{{"verdict", modal_refinement(doc.get(n[0]), doc.get(n[1]), doc.labels).holds}};
    }
    if (op == "distance") {
        const auto n = operands(check, 2);
        return json{{"value", number(refinement_distance(doc.get(n[0]), doc.get(n[1]), doc.labels, metric_of(params),
                                                        o.tol).value)}};
    }
    if (op == "mc") {
        const auto n = operands(check, 2);
        return json{{"verdict", mc_nu(as_lts(doc.get(n[0]), n[0]), as_nu(doc.get(n[1]), n[1]), doc.labels)}};
    }
    if (op == "member") {
        const auto n = operands(check, 2);
        const double alpha = read_number(params.value("alpha", json(0.0)));
        const auto r = relaxed_membership(as_lts(doc.get(n[0]), n[0]), doc.get(n[1]), alpha, doc.labels,
                                          metric_of(params), o.tol);
        return json{{"verdict", r.member}, {"value", number(r.distance)}};
    }
    if (op == "compose" || op == "conjoin" || op == "disjoin") {
        const auto n = operands(check, 2);
        const System& a = doc.get(n[0]);
        const System& b = doc.get(n[1]);
        if (op == "compose") return add(compose_op(doc, a, b));
        if (op == "conjoin") return add(conjoin_op(doc, a, b));
        return add(disjoin_op(a, b));
    }
    if (op == "quotient") {
        const auto n = operands(check, 2);
        o.split_divisor = params.value("split_divisor", o.split_divisor);
        o.prune = params.value("prune", o.prune);
        return add(quotient_op(doc, doc.get(n[0]), doc.get(n[1]), o));
    }
    if (op == "prune") {
        const auto n = operands(check, 1);
        return add(prune_op(doc.get(n[0])));
    }
    if (op == "translate") {
        const auto n = operands(check, 1);
        const auto target = parse_formalism(params.value("to", std::string()));
        if (!target) throw ValidationError("translate needs params.to");
        return add(translate_op(doc, doc.get(n[0]), *target, o));
    }
    throw ValidationError("unknown op " + op);
}

bool matches(const json& expect, const json& got) {
    if (expect.is_boolean()) return got.contains("verdict") && got["verdict"] == expect;
    if (expect.is_number() || expect.is_string()) return matches(json{{"value", expect}}, got);
    if (expect.is_object() && expect.contains("value")) {
        if (!got.contains("value")) return false;
        const double want = read_number(expect["value"]), have = read_number(got["value"]);
        if (std::isinf(want) || std::isinf(have)) return want == have;
        return std::fabs(want - have) <= expect.value("tol", 1e-6);
    }
    return true;
}

} // namespace

json run_manifest(const std::string& manifest, const std::string& base_dir, const Options& options) {
    json m;
    try {
        m = json::parse(manifest);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("manifest: ") + e.what(), 1, 1);
    }
    if (!m.is_object() || !m.contains("spec") || !m.contains("checks") || !m["checks"].is_array())
        throw ValidationError("manifest needs \"spec\" and a \"checks\" array");
    std::filesystem::path spec = m["spec"].get<std::string>();
    if (spec.is_relative() && !base_dir.empty()) spec = std::filesystem::path(base_dir) / spec;
    SpecDocument doc = load_document(spec.string());

    json results = json::array();
    std::size_t passed = 0;
    for (std::size_t k = 0; k < m["checks"].size(); ++k) {
        const json& check = m["checks"][k];
        json entry{{"index", k}, {"op", check.value("op", std::string())}};
        const json expect = check.value("expect", json());
        const std::string expected_error =
            expect.is_object() && expect.contains("error") ? expect["error"].get<std::string>() : "";
        try {
            json got = run_check(doc, check, options);
            entry.update(got);
            const bool ok = expected_error.empty() && matches(expect, got);
            entry["status"] = ok ? "pass" : "fail";
        } catch (const json::exception& e) {
            entry["status"] = "fail";
            entry["error"] = "validation";
            entry["message"] = e.what();
        } catch (const std::exception& e) {
            const std::string kind = error_kind(e);
            entry["status"] = kind == expected_error ? "pass" : "fail";
            entry["error"] = kind;
            entry["message"] = e.what();
        }
        if (entry["status"] == "pass") ++passed;
        results.push_back(entry);
    }
    return json{{"spec", spec.string()},
                {"passed", passed},
                {"failed", results.size() - passed},
                {"checks", results}};
}

} // namespace qspec::session
