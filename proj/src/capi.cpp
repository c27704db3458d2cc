#include "qspec/qspec.h"

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "qspec/enumerate.hpp"
#include "qspec/errors.hpp"
#include "qspec/refine.hpp"
#include "session.hpp"

struct qs_document {
    qspec::SpecDocument doc;
    std::vector<std::string> names;  // cache for qs_system_name

    void refresh() {
        names.clear();
        for (const auto& [name, sys] : doc.systems) names.push_back(name);
    }
};

namespace {

using namespace qspec;
using nlohmann::json;

thread_local std::string last_error;

qs_status fail(qs_status status, const std::string& message) {
    last_error = message;
    return status;
}

template <class F>
qs_status guarded(F&& body) {
    last_error.clear();
    try {
        return body();
    } catch (const ParseError& e) {
        return fail(QS_ERR_PARSE, e.what());
    } catch (const ValidationError& e) {
        return fail(QS_ERR_VALIDATION, e.what());
    } catch (const MismatchError& e) {
        return fail(QS_ERR_MISMATCH, e.what());
    } catch (const CapabilityError& e) {
        return fail(QS_ERR_CAPABILITY, e.what());
    } catch (const BudgetError& e) {
        return fail(QS_ERR_BUDGET, e.what());
    } catch (const std::bad_alloc&) {
        return fail(QS_ERR_BUDGET, "out of memory");
    } catch (const std::exception& e) {
        return fail(QS_ERR_INTERNAL, e.what());
    }
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

session::Options convert(const qs_options* o) {
    session::Options out;
    if (!o) return out;
    out.budget = o->budget;
    out.max_states = o->max_states;
    out.postra_limit = o->postra_limit;
    out.tol = o->tol;
    out.split_divisor = o->split_divisor != 0;
    out.prune = o->prune != 0;
    return out;
}

// Missing names are reported as not-found rather than as a mismatch.
#define QS_REQUIRE_SYSTEM(doc, name)                                                               \
    do {                                                                                           \
        if (!(name)) return fail(QS_ERR_USAGE, "system name is null");                             \
        if (!(doc)->doc.systems.count(name))                                                       \
            return fail(QS_ERR_NOT_FOUND, std::string("no system named '") + (name) + "'");         \
    } while (0)

std::optional<MetricKind> metric_kind(qs_metric m) {
    switch (m) {
    case QS_METRIC_DISCRETE: return MetricKind::discrete;
    case QS_METRIC_POINTWISE: return MetricKind::pointwise;
    case QS_METRIC_DISCOUNTING: return MetricKind::discounting;
    }
    return std::nullopt;
}

qs_status store(qs_document* doc, const char* result_name, System sys) {
    if (!result_name || !*result_name) return fail(QS_ERR_USAGE, "result name is empty");
    doc->doc.systems.insert_or_assign(result_name, std::move(sys));
    doc->refresh();
    return QS_OK;
}

} // namespace

extern "C" {

const char* qs_last_error(void) { return last_error.c_str(); }

const char* qs_status_name(qs_status status) {
    switch (status) {
    case QS_OK: return "ok";
    case QS_ERR_USAGE: return "usage";
    case QS_ERR_PARSE: return "parse";
    case QS_ERR_VALIDATION: return "validation";
    case QS_ERR_NOT_FOUND: return "not_found";
    case QS_ERR_MISMATCH: return "mismatch";
    case QS_ERR_CAPABILITY: return "capability";
    case QS_ERR_BUDGET: return "budget";
    case QS_ERR_IO: return "io";
    case QS_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

void qs_options_init(qs_options* options) {
    if (!options) return;
    const session::Options d;
    options->budget = d.budget;
    options->max_states = d.max_states;
    options->postra_limit = d.postra_limit;
    options->tol = d.tol;
    options->split_divisor = d.split_divisor;
    options->prune = d.prune;
}

qs_status qs_parse(const char* text, size_t length, qs_format format, qs_document** out) {
    if (!out || (!text && length)) return fail(QS_ERR_USAGE, "null argument");
    return guarded([&] {
        const std::string_view src(text ? text : "", length);
        auto* d = new qs_document{format == QS_FORMAT_JSON ? parse_spec_json(src) : parse_spec(src), {}};
        d->refresh();
        *out = d;
        return QS_OK;
    });
}

qs_status qs_load(const char* path, qs_document** out) {
    if (!path || !out) return fail(QS_ERR_USAGE, "null argument");
    std::ifstream in(path, std::ios::binary);
    if (!in) return fail(QS_ERR_IO, std::string("cannot open ") + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const std::string p = path;
    const bool is_json = p.size() >= 5 && p.compare(p.size() - 5, 5, ".json") == 0;
    const qs_status st = qs_parse(text.data(), text.size(), is_json ? QS_FORMAT_JSON : QS_FORMAT_TEXT, out);
    if (st != QS_OK) last_error = p + ":" + last_error;
    return st;
}

void qs_document_free(qs_document* doc) { delete doc; }

qs_status qs_serialize(const qs_document* doc, qs_format format, char** out) {
    if (!doc || !out) return fail(QS_ERR_USAGE, "null argument");
    return guarded([&] {
        *out = copy_string(serialize(doc->doc, format == QS_FORMAT_JSON ? Format::json : Format::text));
        return QS_OK;
    });
}

void qs_string_free(char* s) { std::free(s); }

size_t qs_system_count(const qs_document* doc) { return doc ? doc->names.size() : 0; }

const char* qs_system_name(const qs_document* doc, size_t index) {
    if (!doc || index >= doc->names.size()) return nullptr;
    return doc->names[index].c_str();
}

qs_status qs_set_sync(qs_document* doc, const char* sync) {
    if (!doc || !sync) return fail(QS_ERR_USAGE, "null argument");
    const auto op = parse_sync_op(sync);
    if (!op) return fail(QS_ERR_USAGE, std::string("unknown sync operator ") + sync);
    return guarded([&] {
        doc->doc.labels = doc->doc.labels.with_sync(*op);
        return QS_OK;
    });
}

qs_status qs_refine(const qs_document* doc, const char* left, const char* right, int* holds, char** report) {
    if (!doc || !holds) return fail(QS_ERR_USAGE, "null argument");
    QS_REQUIRE_SYSTEM(doc, left);
    QS_REQUIRE_SYSTEM(doc, right);
    return guarded([&] {
        const auto w = modal_refinement(doc->doc.get(left), doc->doc.get(right), doc->doc.labels);
        *holds = w.holds;
        if (report) *report = copy_string(session::refine_report(doc->doc, left, right, w).dump(2));
        return QS_OK;
    });
}

qs_status qs_thorough(const qs_document* doc, const char* left, const char* right, const qs_options* options,
                      int* holds, int* truncated) {
    if (!doc || !holds) return fail(QS_ERR_USAGE, "null argument");
    QS_REQUIRE_SYSTEM(doc, left);
    QS_REQUIRE_SYSTEM(doc, right);
    return guarded([&] {
        const System& a = doc->doc.get(left);
        const System& b = doc->doc.get(right);
        const auto universe = session::oracle_universe(doc->doc, a, b, convert(options));
        const auto v = tr_oracle(a, b, doc->doc.labels, universe);
        *holds = v.holds;
        if (truncated) *truncated = v.truncated;
        return QS_OK;
    });
}

qs_status qs_distance(const qs_document* doc, const char* left, const char* right, qs_metric metric, double lambda,
                      const qs_options* options, double* value, char** report) {
    if (!doc || !value) return fail(QS_ERR_USAGE, "null argument");
    QS_REQUIRE_SYSTEM(doc, left);
    QS_REQUIRE_SYSTEM(doc, right);
    const auto kind = metric_kind(metric);
    if (!kind) return fail(QS_ERR_USAGE, "unknown metric");
    return guarded([&] {
        const auto o = convert(options);
        if (!(o.tol > 0)) throw ValidationError("tol must be positive");
        const System& a = doc->doc.get(left);
        const System& b = doc->doc.get(right);
        const auto r = refinement_distance(a, b, doc->doc.labels, make_metric(*kind, lambda), o.tol);
        *value = r.value;
        if (report) {
            // Mixed formalisms are tabulated over acceptance automata.
            const bool native = formalism_of(a) == formalism_of(b) ||
                                (std::holds_alternative<Lts>(a) && std::holds_alternative<Dmts>(b));
            const auto& ln = native ? state_names(a) : to_aa(a).names;
            const auto& rn = native ? state_names(b) : to_aa(b).names;
            *report = copy_string(distance_table_json(r.table, ln, rn));
        }
        return QS_OK;
    });
}

qs_status qs_thorough_distance(const qs_document* doc, const char* left, const char* right, qs_metric metric,
                               double lambda, const qs_options* options, double* value, int* truncated) {
    if (!doc || !value) return fail(QS_ERR_USAGE, "null argument");
    QS_REQUIRE_SYSTEM(doc, left);
    QS_REQUIRE_SYSTEM(doc, right);
    const auto kind = metric_kind(metric);
    if (!kind) return fail(QS_ERR_USAGE, "unknown metric");
    return guarded([&] {
        const auto o = convert(options);
        const System& a = doc->doc.get(left);
        const System& b = doc->doc.get(right);
        const auto universe = session::oracle_universe(doc->doc, a, b, o);
        const auto v = thorough_distance_oracle(a, b, doc->doc.labels, make_metric(*kind, lambda), universe, o.tol);
        *value = v.value;
        if (truncated) *truncated = v.truncated;
        return QS_OK;
    });
}

qs_status qs_model_check(const qs_document* doc, const char* implementation, const char* formula, int* holds) {
    if (!doc || !holds) return fail(QS_ERR_USAGE, "null argument");
    QS_REQUIRE_SYSTEM(doc, implementation);
    QS_REQUIRE_SYSTEM(doc, formula);
    return guarded([&] {
        *holds = mc_nu(session::as_lts(doc->doc.get(implementation), implementation),
                       session::as_nu(doc->doc.get(formula), formula), doc->doc.labels);
        return QS_OK;
    });
}

qs_status qs_member(const qs_document* doc, const char* implementation, const char* spec, qs_metric metric,
                    double lambda, double alpha, const qs_options* options, int* member, double* distance) {
    if (!doc || !member) return fail(QS_ERR_USAGE, "null argument");
    QS_REQUIRE_SYSTEM(doc, implementation);
    QS_REQUIRE_SYSTEM(doc, spec);
    const auto kind = metric_kind(metric);
    if (!kind) return fail(QS_ERR_USAGE, "unknown metric");
    return guarded([&] {
        const auto r = relaxed_membership(session::as_lts(doc->doc.get(implementation), implementation),
                                          doc->doc.get(spec), alpha, doc->doc.labels, make_metric(*kind, lambda),
                                          convert(options).tol);
        *member = r.member;
        if (distance) *distance = r.distance;
        return QS_OK;
    });
}

qs_status qs_compose(qs_document* doc, const char* left, const char* right, const char* result_name) {
    if (!doc) return fail(QS_ERR_USAGE, "null argument");
    QS_REQUIRE_SYSTEM(doc, left);
    QS_REQUIRE_SYSTEM(doc, right);
    return guarded([&] {
        return store(doc, result_name, session::compose_op(doc->doc, doc->doc.get(left), doc->doc.get(right)));
    });
}

qs_status qs_conjoin(qs_document* doc, const char* left, const char* right, const char* result_name) {
    if (!doc) return fail(QS_ERR_USAGE, "null argument");
    QS_REQUIRE_SYSTEM(doc, left);
    QS_REQUIRE_SYSTEM(doc, right);
    return guarded([&] {
        return store(doc, result_name, session::conjoin_op(doc->doc, doc->doc.get(left), doc->doc.get(right)));
    });
}

qs_status qs_disjoin(qs_document* doc, const char* left, const char* right, const char* result_name) {
    if (!doc) return fail(QS_ERR_USAGE, "null argument");
    QS_REQUIRE_SYSTEM(doc, left);
    QS_REQUIRE_SYSTEM(doc, right);
    return guarded(
        [&] { return store(doc, result_name, session::disjoin_op(doc->doc.get(left), doc->doc.get(right))); });
}

qs_status qs_quotient(qs_document* doc, const char* dividend, const char* divisor, const char* result_name,
                      const qs_options* options) {
    if (!doc) return fail(QS_ERR_USAGE, "null argument");
    QS_REQUIRE_SYSTEM(doc, dividend);
    QS_REQUIRE_SYSTEM(doc, divisor);
    return guarded([&] {
        return store(doc, result_name,
                     session::quotient_op(doc->doc, doc->doc.get(dividend), doc->doc.get(divisor), convert(options)));
    });
}

qs_status qs_prune(qs_document* doc, const char* name, const char* result_name) {
    if (!doc) return fail(QS_ERR_USAGE, "null argument");
    QS_REQUIRE_SYSTEM(doc, name);
    return guarded([&] { return store(doc, result_name, session::prune_op(doc->doc.get(name))); });
}

qs_status qs_translate(qs_document* doc, const char* name, const char* target, const char* result_name,
                       const qs_options* options) {
    if (!doc || !target) return fail(QS_ERR_USAGE, "null argument");
    QS_REQUIRE_SYSTEM(doc, name);
    const auto f = parse_formalism(target);
    if (!f) return fail(QS_ERR_USAGE, std::string("unknown formalism ") + target);
    return guarded([&] {
        return store(doc, result_name, session::translate_op(doc->doc, doc->doc.get(name), *f, convert(options)));
    });
}

qs_status qs_run_manifest(const char* manifest_json, const char* base_dir, const qs_options* options,
                          int* all_passed, char** report) {
    if (!manifest_json || !all_passed) return fail(QS_ERR_USAGE, "null argument");
    return guarded([&] {
        const json r = session::run_manifest(manifest_json, base_dir ? base_dir : "", convert(options));
        *all_passed = r["failed"].get<std::size_t>() == 0;
        if (report) *report = copy_string(r.dump(2));
        return QS_OK;
    });
}

} // extern "C"
