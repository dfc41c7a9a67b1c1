#ifndef LTLTRACE_H
#define LTLTRACE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define LT_TASK_LTL 0

#define LT_TASK_PROP 1

typedef enum LtStatus {
  LT_STATUS_OK = 0,
  LT_STATUS_NULL_POINTER = 1,
  LT_STATUS_INVALID_UTF8 = 2,
  LT_STATUS_INVALID_ARGUMENT = 3,
  LT_STATUS_PARSE = 4,
  LT_STATUS_UNSATISFIABLE = 5,
  LT_STATUS_TIMEOUT = 6,
  LT_STATUS_PANIC = 7,
} LtStatus;

typedef enum LtVerdict {
  LT_VERDICT_HOLDS = 0,
  LT_VERDICT_VIOLATED = 1,
  LT_VERDICT_INVALID = 2,
} LtVerdict;

typedef enum LtClass {
  LT_CLASS_SYNTACTIC = 0,
  LT_CLASS_SEMANTIC_ONLY = 1,
  LT_CLASS_INCORRECT = 2,
  LT_CLASS_INVALID = 3,
} LtClass;

// A parsed formula.
typedef struct LtFormula LtFormula;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses `text` as an LTL (`LT_TASK_LTL`) or propositional
// (`LT_TASK_PROP`) formula in prefix notation.
//
// # Safety
// `text` must be a NUL-terminated string and `out_formula` writable.
enum LtStatus lt_formula_parse(const char *text, uint32_t task, struct LtFormula **out_formula);

// # Safety
// `formula` must come from [`lt_formula_parse`] and not be used afterwards.
void lt_formula_free(struct LtFormula *formula);

// Number of tree nodes, or 0 for a null handle.
//
// # Safety
// `formula` must be null or a live handle.
size_t lt_formula_size(const struct LtFormula *formula);

// The formula in prefix notation.
//
// # Safety
// `formula` must be a live handle and `out_text` writable.
enum LtStatus lt_formula_to_string(const struct LtFormula *formula, char **out_text);

// Computes a trace (LTL) or a partial assignment (propositional).
// `timeout_ms` of 0 means no limit and is ignored for propositional
// formulas.
//
// # Safety
// `formula` must be a live handle and `out_answer` writable.
enum LtStatus lt_solve(const struct LtFormula *formula, uint64_t timeout_ms, char **out_answer);

// Checks a candidate trace or assignment. An unparsable candidate yields
// `Invalid` with status `Ok`; the reason is left in [`lt_last_error`].
//
// # Safety
// `formula` must be a live handle, `candidate` NUL-terminated and
// `out_verdict` writable.
enum LtStatus lt_check(struct LtFormula *formula,
                       const char *candidate,
                       enum LtVerdict *out_verdict);

// Evaluation class of a model output. `reference` may be null.
//
// # Safety
// `formula` must be a live handle, `output` NUL-terminated, `reference`
// null or NUL-terminated and `out_class` writable.
enum LtStatus lt_classify(const struct LtFormula *formula,
                          const char *output,
                          const char *reference,
                          enum LtClass *out_class);

// The message of the last failed call on this thread, or null. Free the
// copy with [`lt_string_free`].
char *lt_last_error(void);

// # Safety
// `s` must be null or a string returned by this library.
void lt_string_free(char *s);

// Library version; static, do not free.
const char *lt_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LTLTRACE_H */
