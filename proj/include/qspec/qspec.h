/* C interface to the qspec library. */
#ifndef QSPEC_QSPEC_H
#define QSPEC_QSPEC_H

#include <stddef.h>

#if defined(_WIN32)
#define QS_API __declspec(dllexport)
#else
#define QS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qs_document qs_document;

typedef enum qs_status {
    QS_OK = 0,
    QS_ERR_USAGE = 1,
    QS_ERR_PARSE = 2,
    QS_ERR_VALIDATION = 3,
    QS_ERR_NOT_FOUND = 4,
    QS_ERR_MISMATCH = 5,
    QS_ERR_CAPABILITY = 6,
    QS_ERR_BUDGET = 7,
    QS_ERR_IO = 8,
    QS_ERR_INTERNAL = 9
} qs_status;

typedef enum qs_format { QS_FORMAT_TEXT = 0, QS_FORMAT_JSON = 1 } qs_format;

typedef enum qs_metric { QS_METRIC_DISCRETE = 0, QS_METRIC_POINTWISE = 1, QS_METRIC_DISCOUNTING = 2 } qs_metric;

typedef struct qs_options {
    size_t budget;        /* state budget for bd, quotient and enumeration */
    size_t max_states;    /* implementation size for the bounded oracles */
    size_t postra_limit;  /* largest postra set expanded by quotient */
    double tol;
    int split_divisor;
    int prune;            /* prune inconsistent states after quotient */
} qs_options;

/* Message of the last failed call on this thread, or "" */
QS_API const char* qs_last_error(void);
QS_API const char* qs_status_name(qs_status status);

QS_API void qs_options_init(qs_options* options);

QS_API qs_status qs_parse(const char* text, size_t length, qs_format format, qs_document** out);
QS_API qs_status qs_load(const char* path, qs_document** out);
QS_API void qs_document_free(qs_document* doc);
QS_API qs_status qs_serialize(const qs_document* doc, qs_format format, char** out);
QS_API void qs_string_free(char* s);

QS_API size_t qs_system_count(const qs_document* doc);
/* Borrowed pointer valid until the document changes. */
QS_API const char* qs_system_name(const qs_document* doc, size_t index);
QS_API qs_status qs_set_sync(qs_document* doc, const char* sync);

/* Verdict queries write 1 or 0 to *holds. Reports are JSON strings owned by the caller. */
QS_API qs_status qs_refine(const qs_document* doc, const char* left, const char* right, int* holds, char** report);
QS_API qs_status qs_thorough(const qs_document* doc, const char* left, const char* right, const qs_options* options,
                             int* holds, int* truncated);
QS_API qs_status qs_distance(const qs_document* doc, const char* left, const char* right, qs_metric metric,
                             double lambda, const qs_options* options, double* value, char** report);
QS_API qs_status qs_thorough_distance(const qs_document* doc, const char* left, const char* right, qs_metric metric,
                                      double lambda, const qs_options* options, double* value, int* truncated);
QS_API qs_status qs_model_check(const qs_document* doc, const char* implementation, const char* formula, int* holds);
QS_API qs_status qs_member(const qs_document* doc, const char* implementation, const char* spec, qs_metric metric,
                           double lambda, double alpha, const qs_options* options, int* member, double* distance);

/* Constructors add the result to the document under result_name, replacing any system of that name. */
QS_API qs_status qs_compose(qs_document* doc, const char* left, const char* right, const char* result_name);
QS_API qs_status qs_conjoin(qs_document* doc, const char* left, const char* right, const char* result_name);
QS_API qs_status qs_disjoin(qs_document* doc, const char* left, const char* right, const char* result_name);
QS_API qs_status qs_quotient(qs_document* doc, const char* dividend, const char* divisor, const char* result_name,
                             const qs_options* options);
QS_API qs_status qs_prune(qs_document* doc, const char* name, const char* result_name);
/* target is one of "lts", "dmts", "aa", "nu". */
QS_API qs_status qs_translate(qs_document* doc, const char* name, const char* target, const char* result_name,
                              const qs_options* options);

/* Runs a JSON check manifest. Relative spec paths resolve against base_dir. */
QS_API qs_status qs_run_manifest(const char* manifest_json, const char* base_dir, const qs_options* options,
                                 int* all_passed, char** report);

#ifdef __cplusplus
}
#endif

#endif
