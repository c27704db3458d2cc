// qspec command-line front end. Talks to the library only through qspec.h.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qspec/qspec.h"

namespace {

using nlohmann::json;

enum Exit { kTrue = 0, kFalse = 1, kUsage = 2, kCapability = 3 };

struct Args {
    std::string file;
    std::string left, right, system, dividend, divisor, name;
    std::string metric = "discounting";
    double lambda = 0.9;
    double tol = 1e-9;
    std::string alpha = "0";
    std::string sync, from, to, out;
    std::string format = "text";
    std::size_t max_states = 2;
    std::size_t budget = 100000;
    std::size_t postra_limit = 16;
    bool thorough = false;
    bool prune = false;
    bool no_split = false;
};

int exit_code(qs_status st) {
    switch (st) {
    case QS_OK: return kTrue;
    case QS_ERR_CAPABILITY:
    case QS_ERR_BUDGET:
    case QS_ERR_INTERNAL: return kCapability;
    default: return kUsage;
    }
}

int report_error(qs_status st) {
    std::fprintf(stderr, "error (%s): %s\n", qs_status_name(st), qs_last_error());
    return exit_code(st);
}

struct Document {
    qs_document* doc = nullptr;
    ~Document() { qs_document_free(doc); }
};

struct Owned {
    char* s = nullptr;
    ~Owned() { qs_string_free(s); }
};

qs_options options_of(const Args& a) {
    qs_options o;
    qs_options_init(&o);
    o.budget = a.budget;
    o.max_states = a.max_states;
    o.postra_limit = a.postra_limit;
    o.tol = a.tol;
    o.split_divisor = !a.no_split;
    o.prune = a.prune;
    return o;
}

bool parse_metric(const std::string& s, qs_metric& m) {
    if (s == "discrete") m = QS_METRIC_DISCRETE;
    else if (s == "pointwise") m = QS_METRIC_POINTWISE;
    else if (s == "discounting") m = QS_METRIC_DISCOUNTING;
    else return false;
    return true;
}

bool parse_extended(const std::string& s, double& v) {
    if (s == "inf") v = INFINITY;
    else {
        try {
            std::size_t used = 0;
            v = std::stod(s, &used);
            if (used != s.size()) return false;
        } catch (const std::exception&) {
            return false;
        }
    }
    return true;
}

/// Rounds away iteration noise below 1e-6 and keeps one decimal at least.
std::string show(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", std::round(v * 1e6) / 1e6);
    std::string s = buf;
    while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
    return s;
}

json number(double v) { return std::isinf(v) ? json(v > 0 ? "inf" : "-inf") : json(v); }

int load(const Args& a, Document& d) {
    qs_status st = qs_load(a.file.c_str(), &d.doc);
    if (st == QS_OK && !a.sync.empty()) st = qs_set_sync(d.doc, a.sync.c_str());
    return st == QS_OK ? -1 : report_error(st);
}

bool json_out(const Args& a) { return a.format == "json"; }

int cmd_validate(const Args& a) {
    Document d;
    if (int rc = load(a, d); rc >= 0) return rc;
    if (json_out(a)) {
        json names = json::array();
        for (std::size_t k = 0; k < qs_system_count(d.doc); ++k) names.push_back(qs_system_name(d.doc, k));
        std::cout << json{{"valid", true}, {"systems", names}}.dump(2) << "\n";
    } else {
        std::cout << a.file << ": " << qs_system_count(d.doc) << " systems, valid\n";
    }
    return kTrue;
}

int cmd_refine(const Args& a) {
    Document d;
    if (int rc = load(a, d); rc >= 0) return rc;
    int holds = 0;
    if (a.thorough) {
        const qs_options o = options_of(a);
        int truncated = 0;
        const qs_status st = qs_thorough(d.doc, a.left.c_str(), a.right.c_str(), &o, &holds, &truncated);
        if (st != QS_OK) return report_error(st);
        if (json_out(a))
            std::cout << json{{"left", a.left}, {"right", a.right}, {"thorough", holds != 0},
                              {"max_states", a.max_states}, {"truncated", truncated != 0}}
                             .dump(2)
                      << "\n";
        else
            std::cout << a.left << (holds ? " thoroughly refines " : " does not thoroughly refine ") << a.right
                      << " (implementations up to " << a.max_states << " states" << (truncated ? ", truncated" : "")
                      << ")\n";
        return holds ? kTrue : kFalse;
    }
    Owned report;
    const qs_status st = qs_refine(d.doc, a.left.c_str(), a.right.c_str(), &holds, &report.s);
    if (st != QS_OK) return report_error(st);
    if (json_out(a)) {
        std::cout << report.s << "\n";
    } else {
        std::cout << a.left << (holds ? " refines " : " does not refine ") << a.right << "\n";
        const json r = json::parse(report.s);
        if (r.contains("failure")) {
            const json& f = r["failure"];
            std::cout << "  at " << f["left"].dump();
            if (!f["right"].is_null()) std::cout << " vs " << f["right"].dump();
            std::cout << ": " << f["clause"].get<std::string>() << "\n";
        }
    }
    return holds ? kTrue : kFalse;
}

int cmd_distance(const Args& a) {
    qs_metric m;
    if (!parse_metric(a.metric, m)) return std::cerr << "error: unknown metric " << a.metric << "\n", kUsage;
    Document d;
    if (int rc = load(a, d); rc >= 0) return rc;
    const qs_options o = options_of(a);
    double value = 0;
    if (a.thorough) {
        int truncated = 0;
        const qs_status st =
            qs_thorough_distance(d.doc, a.left.c_str(), a.right.c_str(), m, a.lambda, &o, &value, &truncated);
        if (st != QS_OK) return report_error(st);
        if (json_out(a))
            std::cout << json{{"left", a.left}, {"right", a.right}, {"metric", a.metric}, {"thorough", number(value)},
                              {"truncated", truncated != 0}}
                             .dump(2)
                      << "\n";
        else
            std::cout << show(value) << "\n";
        return kTrue;
    }
    Owned table;
    const qs_status st = qs_distance(d.doc, a.left.c_str(), a.right.c_str(), m, a.lambda, &o, &value, &table.s);
    if (st != QS_OK) return report_error(st);
    if (json_out(a)) {
        json j{{"left", a.left}, {"right", a.right}, {"metric", a.metric}, {"value", number(value)},
               {"table", json::parse(table.s)}};
        if (m == QS_METRIC_DISCOUNTING) j["lambda"] = a.lambda;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << show(value) << "\n";
    }
    return kTrue;
}

int cmd_mc(const Args& a) {
    Document d;
    if (int rc = load(a, d); rc >= 0) return rc;
    int holds = 0;
    const qs_status st = qs_model_check(d.doc, a.left.c_str(), a.right.c_str(), &holds);
    if (st != QS_OK) return report_error(st);
    if (json_out(a))
        std::cout << json{{"implementation", a.left}, {"formula", a.right}, {"holds", holds != 0}}.dump(2) << "\n";
    else
        std::cout << a.left << (holds ? " satisfies " : " does not satisfy ") << a.right << "\n";
    return holds ? kTrue : kFalse;
}

int cmd_member(const Args& a) {
    qs_metric m;
    if (!parse_metric(a.metric, m)) return std::cerr << "error: unknown metric " << a.metric << "\n", kUsage;
    double alpha = 0;
    if (!parse_extended(a.alpha, alpha)) return std::cerr << "error: bad --alpha " << a.alpha << "\n", kUsage;
    Document d;
    if (int rc = load(a, d); rc >= 0) return rc;
    const qs_options o = options_of(a);
    int member = 0;
    double distance = 0;
    const qs_status st = qs_member(d.doc, a.left.c_str(), a.right.c_str(), m, a.lambda, alpha, &o, &member, &distance);
    if (st != QS_OK) return report_error(st);
    if (json_out(a))
        std::cout << json{{"implementation", a.left}, {"spec", a.right}, {"alpha", number(alpha)},
                          {"member", member != 0}, {"distance", number(distance)}}
                         .dump(2)
                  << "\n";
    else
        std::cout << a.left << (member ? " is" : " is not") << " within " << show(alpha) << " of " << a.right
                  << " (distance " << show(distance) << ")\n";
    return member ? kTrue : kFalse;
}

int emit(const Args& a, qs_document* doc, const std::string& name) {
    const bool as_json = json_out(a) || (!a.out.empty() && a.out.size() >= 5 &&
                                         a.out.compare(a.out.size() - 5, 5, ".json") == 0);
    Owned text;
    const qs_status st = qs_serialize(doc, as_json ? QS_FORMAT_JSON : QS_FORMAT_TEXT, &text.s);
    if (st != QS_OK) return report_error(st);
    if (a.out.empty()) {
        std::cout << text.s;
        return kTrue;
    }
    std::ofstream f(a.out, std::ios::binary);
    if (!(f << text.s)) return std::cerr << "error (io): cannot write " << a.out << "\n", kUsage;
    std::cerr << "wrote " << name << " to " << a.out << "\n";
    return kTrue;
}

int cmd_binary(const Args& a, const std::string& op) {
    Document d;
    if (int rc = load(a, d); rc >= 0) return rc;
    const std::string name = a.name.empty() ? op : a.name;
    qs_status st;
    if (op == "compose") st = qs_compose(d.doc, a.left.c_str(), a.right.c_str(), name.c_str());
    else if (op == "conjoin") st = qs_conjoin(d.doc, a.left.c_str(), a.right.c_str(), name.c_str());
    else st = qs_disjoin(d.doc, a.left.c_str(), a.right.c_str(), name.c_str());
    if (st != QS_OK) return report_error(st);
    return emit(a, d.doc, name);
}

int cmd_quotient(const Args& a) {
    Document d;
    if (int rc = load(a, d); rc >= 0) return rc;
    const std::string name = a.name.empty() ? "quotient" : a.name;
    const qs_options o = options_of(a);
    const qs_status st = qs_quotient(d.doc, a.dividend.c_str(), a.divisor.c_str(), name.c_str(), &o);
    if (st != QS_OK) return report_error(st);
    return emit(a, d.doc, name);
}

int cmd_prune(const Args& a) {
    Document d;
    if (int rc = load(a, d); rc >= 0) return rc;
    const std::string name = a.name.empty() ? a.system + "_pruned" : a.name;
    const qs_status st = qs_prune(d.doc, a.system.c_str(), name.c_str());
    if (st != QS_OK) return report_error(st);
    return emit(a, d.doc, name);
}

int cmd_translate(const Args& a) {
    Document d;
    if (int rc = load(a, d); rc >= 0) return rc;
    if (!a.from.empty()) {
        // --from must name the formalism the system is written in.
        Owned text;
        qs_status st = qs_serialize(d.doc, QS_FORMAT_JSON, &text.s);
        if (st != QS_OK) return report_error(st);
        const json j = json::parse(text.s);
        if (!j["systems"].contains(a.system))
            return std::cerr << "error (not_found): no system named '" << a.system << "'\n", kUsage;
        const std::string actual = j["systems"][a.system]["type"];
        if (actual != a.from)
            return std::cerr << "error (mismatch): " << a.system << " is a " << actual << ", not a " << a.from << "\n",
                   kUsage;
    }
    const std::string name = a.name.empty() ? a.system + "_" + a.to : a.name;
    const qs_options o = options_of(a);
    const qs_status st = qs_translate(d.doc, a.system.c_str(), a.to.c_str(), name.c_str(), &o);
    if (st != QS_OK) return report_error(st);
    return emit(a, d.doc, name);
}

int cmd_check(const Args& a) {
    std::ifstream in(a.file, std::ios::binary);
    if (!in) return std::cerr << "error (io): cannot open " << a.file << "\n", kUsage;
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string base = std::filesystem::path(a.file).parent_path().string();
    const qs_options o = options_of(a);
    int all = 0;
    Owned report;
    const qs_status st = qs_run_manifest(buf.str().c_str(), base.c_str(), &o, &all, &report.s);
    if (st != QS_OK) return report_error(st);
    if (json_out(a)) {
        std::cout << report.s << "\n";
    } else {
        const json r = json::parse(report.s);
        for (const auto& c : r["checks"]) {
            std::cout << "[" << c["index"].get<std::size_t>() << "] " << c["op"].get<std::string>() << ": "
                      << c["status"].get<std::string>();
            if (c.contains("verdict")) std::cout << " verdict=" << (c["verdict"].get<bool>() ? "true" : "false");
            if (c.contains("value"))
                std::cout << " value=" << (c["value"].is_string() ? c["value"].get<std::string>()
                                                                  : show(c["value"].get<double>()));
            if (c.contains("result")) std::cout << " result=" << c["result"].get<std::string>();
            if (c.contains("error")) std::cout << " " << c["error"].get<std::string>() << ": " << c["message"].get<std::string>();
            std::cout << "\n";
        }
        std::cout << r["passed"] << " passed, " << r["failed"] << " failed\n";
    }
    return all ? kTrue : kFalse;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantitative specification theories over structured labels"};
    app.require_subcommand(1);
    Args a;

    const std::vector<std::string> formats{"text", "json"};
    const std::vector<std::string> metrics{"discrete", "pointwise", "discounting"};
    const std::vector<std::string> formalisms{"lts", "dmts", "aa", "nu"};
    const std::vector<std::string> syncs{"csp", "plus", "max", "cap"};

    auto common = [&](CLI::App* sub) {
        sub->add_option("file", a.file, "Spec file (.qs or .qs.json)")->required();
        sub->add_option("--sync", a.sync, "Override the synchronization operator")->check(CLI::IsMember(syncs));
        sub->add_option("--format", a.format, "Output format")->check(CLI::IsMember(formats));
        sub->add_option("--budget", a.budget, "State budget")->envname("QSPEC_BUDGET");
        sub->add_option("--tol", a.tol, "Convergence tolerance");
        sub->add_option("--max-states", a.max_states, "Implementation size for bounded oracles");
    };
    auto pair = [&](CLI::App* sub) {
        sub->add_option("--left", a.left)->required();
        sub->add_option("--right", a.right)->required();
    };
    auto metric = [&](CLI::App* sub) {
        sub->add_option("--metric", a.metric)->check(CLI::IsMember(metrics));
        sub->add_option("--lambda", a.lambda, "Discount factor");
    };
    auto producing = [&](CLI::App* sub) {
        sub->add_option("--out", a.out, "Write the resulting document here");
        sub->add_option("--name", a.name, "Name of the new system");
    };

    auto* validate = app.add_subcommand("validate", "Parse and validate a spec file");
    common(validate);
    auto* refine = app.add_subcommand("refine", "Modal refinement of left by right");
    common(refine);
    pair(refine);
    refine->add_flag("--thorough", a.thorough, "Bounded thorough refinement");
    auto* distance = app.add_subcommand("distance", "Refinement distance");
    common(distance);
    pair(distance);
    metric(distance);
    distance->add_flag("--thorough", a.thorough, "Bounded thorough distance");
    auto* mc = app.add_subcommand("mc", "Model check an LTS (left) against a formula (right)");
    common(mc);
    pair(mc);
    auto* member = app.add_subcommand("member", "Relaxed membership of an LTS (left) in a spec (right)");
    common(member);
    pair(member);
    metric(member);
    member->add_option("--alpha", a.alpha, "Distance threshold");
    std::vector<std::pair<CLI::App*, std::string>> binaries;
    for (const char* op : {"compose", "conjoin", "disjoin"}) {
        auto* sub = app.add_subcommand(op, std::string(op) + " two systems");
        common(sub);
        pair(sub);
        producing(sub);
        binaries.emplace_back(sub, op);
    }
    auto* quotient = app.add_subcommand("quotient", "Quotient of dividend by divisor");
    common(quotient);
    producing(quotient);
    quotient->add_option("--dividend", a.dividend)->required();
    quotient->add_option("--divisor", a.divisor)->required();
    quotient->add_option("--postra-limit", a.postra_limit, "Largest expanded postra set");
    quotient->add_flag("--prune", a.prune, "Drop inconsistent states");
    quotient->add_flag("--no-split", a.no_split, "Do not split the divisor");
    auto* translate = app.add_subcommand("translate", "Translate a system to another formalism");
    common(translate);
    producing(translate);
    translate->add_option("--system,--left", a.system)->required();
    translate->add_option("--from", a.from)->check(CLI::IsMember(formalisms));
    translate->add_option("--to", a.to)->required()->check(CLI::IsMember(formalisms));
    auto* prune = app.add_subcommand("prune", "Remove inconsistent states");
    common(prune);
    producing(prune);
    prune->add_option("--system,--left", a.system)->required();
    auto* check = app.add_subcommand("check", "Run a JSON check manifest");
    check->add_option("file", a.file, "Manifest file")->required();
    check->add_option("--format", a.format)->check(CLI::IsMember(formats));
    check->add_option("--budget", a.budget)->envname("QSPEC_BUDGET");
    check->add_option("--tol", a.tol);
    check->add_option("--max-states", a.max_states);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    if (*validate) return cmd_validate(a);
    if (*refine) return cmd_refine(a);
    if (*distance) return cmd_distance(a);
    if (*mc) return cmd_mc(a);
    if (*member) return cmd_member(a);
    for (const auto& [sub, op] : binaries)
        if (*sub) return cmd_binary(a, op);
    if (*quotient) return cmd_quotient(a);
    if (*translate) return cmd_translate(a);
    if (*prune) return cmd_prune(a);
    if (*check) return cmd_check(a);
    return kUsage;
}
