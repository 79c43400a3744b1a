#ifndef PCLASS_PCLASS_H
#define PCLASS_PCLASS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef PCLASS_BUILDING
#    define PCLASS_API __declspec(dllexport)
#  else
#    define PCLASS_API __declspec(dllimport)
#  endif
#else
#  define PCLASS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pclass_status {
  PCLASS_OK = 0,
  PCLASS_INVALID_INPUT,
  PCLASS_DOMAIN,
  PCLASS_NEGATIVE_SPECTRUM,
  PCLASS_HYPOTHESIS,
  PCLASS_DEGENERATE,
  PCLASS_SEARCH_FAILED,
  PCLASS_PARSE,
  PCLASS_UNKNOWN_CHECK,
  PCLASS_UNSATISFIABLE,
  PCLASS_INTERNAL
} pclass_status;

typedef struct pclass_operator pclass_operator;
typedef struct pclass_state pclass_state;
typedef struct pclass_function pclass_function;
typedef struct pclass_report pclass_report;

/* Message of the last failing call on this thread; "" after success. */
PCLASS_API const char* pclass_last_error(void);
PCLASS_API const char* pclass_status_name(pclass_status status);
PCLASS_API const char* pclass_version(void);
PCLASS_API int pclass_schema_version(void);
/* Comma-separated list of check names. */
PCLASS_API const char* pclass_check_names(void);

/* Strings returned through char** are owned by the caller. */
PCLASS_API void pclass_string_free(char* s);

/* Operators: row-major dim x dim entries, symmetric within 1e-12. */
PCLASS_API pclass_status pclass_operator_create(size_t dim, const double* row_major, pclass_operator** out);
PCLASS_API pclass_status pclass_operator_from_json(const char* json, pclass_operator** out);
/* Eigenvalues uniform in [m, M], random orthogonal conjugation. */
PCLASS_API pclass_status pclass_operator_random(double m, double M, size_t dim, uint64_t seed, pclass_operator** out);
PCLASS_API void pclass_operator_free(pclass_operator* op);
PCLASS_API size_t pclass_operator_dim(const pclass_operator* op);
/* Writes dim ascending eigenvalues. */
PCLASS_API pclass_status pclass_operator_eigenvalues(const pclass_operator* op, double* out);
PCLASS_API pclass_status pclass_operator_to_json(const pclass_operator* op, char** out);

PCLASS_API pclass_status pclass_state_create(size_t dim, const double* coords, pclass_state** out);
PCLASS_API pclass_status pclass_state_from_json(const char* json, pclass_state** out);
PCLASS_API pclass_status pclass_state_random(size_t dim, uint64_t seed, int unit, pclass_state** out);
PCLASS_API void pclass_state_free(pclass_state* x);

/* spec like "power:0.5", "qcap:1", "ln", "recip", "affine:a,b", "pwl:...". */
PCLASS_API pclass_status pclass_function_parse(const char* spec, double m, double M, pclass_function** out);
PCLASS_API pclass_status pclass_function_eval(const pclass_function* f, double t, double* out);
PCLASS_API void pclass_function_free(pclass_function* f);

PCLASS_API pclass_status pclass_check_jensen(const pclass_operator* c, const pclass_state* x, const pclass_function* f,
                                             pclass_report** out);
PCLASS_API pclass_status pclass_check_maccarthy(const pclass_operator* c, const pclass_state* x, double r,
                                                pclass_report** out);
/* weights may be NULL for uniform weights; otherwise they are rescaled to sum to 1. */
PCLASS_API pclass_status pclass_check_mean_chain(size_t n, const double* values, const double* weights, double r,
                                                 pclass_report** out);
PCLASS_API pclass_status pclass_jensen_ratio(const pclass_operator* c, const pclass_state* x, const pclass_function* f,
                                             double* out);
/* JSON object {lambda, lhs, rhs, margin, refuted}. */
PCLASS_API pclass_status pclass_refute_lambda(double lambda, char** out_json);

/* Generic entry points by check name; instances and options are JSON objects. */
PCLASS_API pclass_status pclass_verify_instance(const char* check, const char* instance_json, pclass_report** out);
PCLASS_API pclass_status pclass_verify_random(const char* check, const char* options_json, uint64_t seed,
                                              uint64_t trial, pclass_report** out);
/* config keys: family, param_lo, param_hi, dim_min, dim_max, window, restarts, steps, step_scale, seed. */
PCLASS_API pclass_status pclass_sharpness(const char* config_json, char** out_json);

PCLASS_API int pclass_report_holds(const pclass_report* r);
PCLASS_API int pclass_report_hypotheses_certified(const pclass_report* r);
PCLASS_API size_t pclass_report_chain_size(const pclass_report* r);
PCLASS_API double pclass_report_chain_value(const pclass_report* r, size_t i);
PCLASS_API const char* pclass_report_chain_label(const pclass_report* r, size_t i);
PCLASS_API double pclass_report_max_violation(const pclass_report* r);
PCLASS_API pclass_status pclass_report_to_json(const pclass_report* r, char** out);
PCLASS_API void pclass_report_free(pclass_report* r);

#ifdef __cplusplus
}
#endif

#endif
