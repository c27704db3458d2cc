#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "qspec/qspec.h"

namespace {

std::string data(const char* name) { return std::string(QSPEC_DATA_DIR) + "/" + name; }

struct Doc {
    qs_document* p = nullptr;
    explicit Doc(const char* name) { REQUIRE(qs_load(data(name).c_str(), &p) == QS_OK); }
    ~Doc() { qs_document_free(p); }
};

std::string take(char* s) {
    std::string out = s ? s : "";
    qs_string_free(s);
    return out;
}

} // namespace

TEST_CASE("status names") {
    CHECK(std::strcmp(qs_status_name(QS_OK), "ok") == 0);
    CHECK(std::strcmp(qs_status_name(QS_ERR_CAPABILITY), "capability") == 0);
    qs_options o;
    qs_options_init(&o);
    CHECK(o.max_states == 2);
    CHECK(o.tol > 0);
}

TEST_CASE("parse and serialize") {
    const char* text = "structure { kind discrete; alphabet a; }\nsystem p : lts { init p0; trans p0 -> p0 : a; }\n";
    qs_document* doc = nullptr;
    REQUIRE(qs_parse(text, std::strlen(text), QS_FORMAT_TEXT, &doc) == QS_OK);
    CHECK(qs_system_count(doc) == 1);
    CHECK(std::strcmp(qs_system_name(doc, 0), "p") == 0);
    CHECK(qs_system_name(doc, 1) == nullptr);
    char* out = nullptr;
    REQUIRE(qs_serialize(doc, QS_FORMAT_JSON, &out) == QS_OK);
    const std::string json = take(out);
    CHECK(nlohmann::json::parse(json).at("systems").contains("p"));
    qs_document* again = nullptr;
    REQUIRE(qs_parse(json.data(), json.size(), QS_FORMAT_JSON, &again) == QS_OK);
    REQUIRE(qs_serialize(again, QS_FORMAT_TEXT, &out) == QS_OK);
    char* first = nullptr;
    REQUIRE(qs_serialize(doc, QS_FORMAT_TEXT, &first) == QS_OK);
    CHECK(take(out) == take(first));
    qs_document_free(again);
    qs_document_free(doc);

    const char* broken = "structure { kind discrete; alphabet a; }\nsystem p : lts { init p0 }";
    CHECK(qs_parse(broken, std::strlen(broken), QS_FORMAT_TEXT, &doc) == QS_ERR_PARSE);
    CHECK(std::string(qs_last_error()).find("2:") == 0);
    const char* invalid = "structure { kind discrete; alphabet a; }\nsystem d : dmts { init s; must s -> { (a, t) }; }";
    CHECK(qs_parse(invalid, std::strlen(invalid), QS_FORMAT_TEXT, &doc) == QS_ERR_VALIDATION);
    CHECK(qs_load("/nonexistent/file.qs", &doc) == QS_ERR_IO);
}

TEST_CASE("queries") {
    Doc v("vending.qs");
    int holds = -1;
    char* report = nullptr;
    REQUIRE(qs_refine(v.p, "t", "s", &holds, &report) == QS_OK);
    CHECK(holds == 1);
    CHECK(nlohmann::json::parse(take(report)).at("holds") == true);
    CHECK(qs_refine(v.p, "t", "nosuch", &holds, nullptr) == QS_ERR_NOT_FOUND);

    Doc g("grants.qs");
    double value = 0;
    REQUIRE(qs_distance(g.p, "x", "xprime", QS_METRIC_DISCOUNTING, 0.9, nullptr, &value, nullptr) == QS_OK);
    CHECK(value == doctest::Approx(9.0).epsilon(1e-9));
    REQUIRE(qs_distance(g.p, "x", "xprime", QS_METRIC_DISCRETE, 0, nullptr, &value, nullptr) == QS_OK);
    CHECK(std::isinf(value));
    CHECK(qs_distance(g.p, "x", "xprime", QS_METRIC_DISCOUNTING, 1.5, nullptr, &value, nullptr) == QS_ERR_VALIDATION);
    REQUIRE(qs_model_check(g.p, "i1", "phi", &holds) == QS_OK);
    CHECK(holds == 1);
    REQUIRE(qs_model_check(g.p, "i2", "phi", &holds) == QS_OK);
    CHECK(holds == 0);
    CHECK(qs_model_check(g.p, "x", "phi", &holds) == QS_ERR_MISMATCH);

    Doc f("fig6.qs");
    int member = -1;
    REQUIRE(qs_member(f.p, "I", "D1", QS_METRIC_POINTWISE, 0, 1.0, nullptr, &member, &value) == QS_OK);
    CHECK(member == 1);
    CHECK(value == 1.0);
    int truncated = -1;
    REQUIRE(qs_thorough(f.p, "D1", "D1", nullptr, &holds, &truncated) == QS_OK);
    CHECK(holds == 1);
}

TEST_CASE("constructors") {
    Doc q("fig5.qs");
    qs_options o;
    qs_options_init(&o);
    o.prune = 1;
    REQUIRE(qs_quotient(q.p, "s", "t", "q", &o) == QS_OK);
    REQUIRE(qs_compose(q.p, "t", "q", "tq") == QS_OK);
    int holds = -1;
    REQUIRE(qs_refine(q.p, "tq", "s", &holds, nullptr) == QS_OK);
    CHECK(holds == 1);
    const size_t n = qs_system_count(q.p);
    CHECK(qs_compose(q.p, "t", "q", "tq") == QS_OK);
    CHECK(qs_system_count(q.p) == n);
    REQUIRE(qs_translate(q.p, "s", "nu", "snu", &o) == QS_OK);
    REQUIRE(qs_refine(q.p, "snu", "s", &holds, nullptr) == QS_OK);
    CHECK(holds == 1);
    CHECK(qs_translate(q.p, "s", "lts", "sl", &o) == QS_ERR_CAPABILITY);
    CHECK(qs_translate(q.p, "s", "petri", "sl", &o) == QS_ERR_USAGE);
    REQUIRE(qs_prune(q.p, "q", "qp") == QS_OK);
    REQUIRE(qs_conjoin(q.p, "s", "t", "st") == QS_OK);
    REQUIRE(qs_disjoin(q.p, "s", "t", "s_or_t") == QS_OK);
    REQUIRE(qs_refine(q.p, "s", "s_or_t", &holds, nullptr) == QS_OK);
    CHECK(holds == 1);
}

TEST_CASE("capability and budget errors") {
    const char* sets = "structure { kind set; alphabet a, b; sync cap; }\n"
                       "system x : aa { init s; tran s = { {({a}, s)} }; }\n";
    qs_document* doc = nullptr;
    REQUIRE(qs_parse(sets, std::strlen(sets), QS_FORMAT_TEXT, &doc) == QS_OK);
    CHECK(qs_quotient(doc, "x", "x", "q", nullptr) == QS_ERR_CAPABILITY);
    CHECK(qs_set_sync(doc, "plus") == QS_ERR_CAPABILITY);
    qs_document_free(doc);

    Doc q("fig5.qs");
    qs_options o;
    qs_options_init(&o);
    o.postra_limit = 1;
    CHECK(qs_quotient(q.p, "s", "t", "q", &o) == QS_ERR_BUDGET);
    CHECK(std::strlen(qs_last_error()) > 0);
}

TEST_CASE("manifest") {
    std::ifstream in(data("checks.json"));
    std::stringstream buf;
    buf << in.rdbuf();
    int passed = -1;
    char* report = nullptr;
    REQUIRE(qs_run_manifest(buf.str().c_str(), QSPEC_DATA_DIR, nullptr, &passed, &report) == QS_OK);
    const auto r = nlohmann::json::parse(take(report));
    CHECK(passed == 1);
    CHECK(r.at("failed") == 0);
    CHECK(r.at("passed") == 9);

    const char* wrong = R"({"spec": "grants.qs", "checks": [{"op": "refine", "operands": ["xprime", "x"], "expect": true}]})";
    REQUIRE(qs_run_manifest(wrong, QSPEC_DATA_DIR, nullptr, &passed, nullptr) == QS_OK);
    CHECK(passed == 0);
    CHECK(qs_run_manifest("{", QSPEC_DATA_DIR, nullptr, &passed, nullptr) == QS_ERR_PARSE);
}
