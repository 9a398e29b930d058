#ifndef WKB_CECH_H
#define WKB_CECH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define WKB_OK 0

// A required pointer argument was null.
#define WKB_ERR_NULL 1

// Input text was not UTF-8, not valid JSON, or not a valid object.
#define WKB_ERR_PARSE 2

// The computation rejected its input (e.g. `NotInvertible`).
#define WKB_ERR_DOMAIN 3

// An enumeration hit its candidate budget.
#define WKB_ERR_BUDGET 4

// Internal failure; the message carries the panic payload.
#define WKB_ERR_PANIC 5

typedef struct WkbCrossedModuleHandle WkbCrossedModuleHandle;

typedef struct WkbDescentHandle WkbDescentHandle;

typedef struct WkbNerveHandle WkbNerveHandle;

// A total symbol `sum_j p_j(x, u) tau^j` with its known window.
typedef struct WkbSymbolHandle WkbSymbolHandle;

// Outcome of [`wkb_bridge_verify`].
typedef struct WkbBridgeSummary {
  size_t group_order;
  size_t center_order;
  size_t crossed_classes;
  size_t classical_classes;
  // 1 when both maps are mutually inverse bijections.
  int verified;
} WkbBridgeSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Kind of the calling thread's last error, or null if none.
const char *wkb_last_error_kind(void);

// Message of the calling thread's last error, or null if none.
const char *wkb_last_error_message(void);

void wkb_clear_error(void);

// Library version, a static string.
const char *wkb_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void wkb_string_free(char *s);

// Parses the symbol JSON wire form.
//
// # Safety
// `json_text` must be a nul-terminated string; `out` must be writable.
int wkb_symbol_from_json(const char *json_text, struct WkbSymbolHandle **out);

// # Safety
// `s` must be a live handle; `out` must be writable.
int wkb_symbol_to_json(const struct WkbSymbolHandle *s, char **out);

// Human-readable form, e.g. `[x0*u0]τ^1 + [1]τ^0 + O(τ^-5)`.
//
// # Safety
// `s` must be a live handle; `out` must be writable.
int wkb_symbol_display(const struct WkbSymbolHandle *s, char **out);

// # Safety
// `s` must come from this library and not have been freed. Null is ignored.
void wkb_symbol_free(struct WkbSymbolHandle *s);

// Star product `a ★ b`.
//
// # Safety
// `a`, `b` must be live handles; `out` must be writable.
int wkb_symbol_star(const struct WkbSymbolHandle *a,
                    const struct WkbSymbolHandle *b,
                    struct WkbSymbolHandle **out);

// Two-sided inverse; `NotInvertible` when the principal symbol is not a
// unit.
//
// # Safety
// `a` must be a live handle; `out` must be writable.
int wkb_symbol_invert(const struct WkbSymbolHandle *a, struct WkbSymbolHandle **out);

// Formal adjoint with respect to `dx`.
//
// # Safety
// `a` must be a live handle; `out` must be writable.
int wkb_symbol_adjoint(const struct WkbSymbolHandle *a, struct WkbSymbolHandle **out);

// Writes 1 when `a` and `b` agree on their common window, else 0.
//
// # Safety
// `a`, `b` must be live handles; `out` must be writable.
int wkb_symbol_equal(const struct WkbSymbolHandle *a, const struct WkbSymbolHandle *b, int *out);

// Crossed module fixture: `kind` is one of `g0`, `g1`, `central`,
// `collapse`; `group` a group name such as `S3`, `Q8`, `Z4`.
//
// # Safety
// `kind`, `group` must be nul-terminated strings; `out` must be writable.
int wkb_crossed_fixture(const char *kind, const char *group, struct WkbCrossedModuleHandle **out);

// # Safety
// `json_text` must be a nul-terminated string; `out` must be writable.
int wkb_crossed_from_json(const char *json_text, struct WkbCrossedModuleHandle **out);

// Number of violated crossed-module axioms (0 for a valid module).
//
// # Safety
// `cm` must be a live handle; `out` must be writable.
int wkb_crossed_violations(const struct WkbCrossedModuleHandle *cm, size_t *out);

// # Safety
// `cm` must come from this library and not have been freed. Null is ignored.
void wkb_crossed_free(struct WkbCrossedModuleHandle *cm);

// Nerve fixture: `point`, `interval`, `circle`, `sphere`, `ball`.
//
// # Safety
// `name` must be a nul-terminated string; `out` must be writable.
int wkb_nerve_by_name(const char *name, struct WkbNerveHandle **out);

// # Safety
// `json_text` must be a nul-terminated string; `out` must be writable.
int wkb_nerve_from_json(const char *json_text, struct WkbNerveHandle **out);

// # Safety
// `n` must come from this library and not have been freed. Null is ignored.
void wkb_nerve_free(struct WkbNerveHandle *n);

// Number of classes of `H^degree(nerve; cm)` for degree 0 or 1, within
// `budget` candidates (0 selects the default).
//
// # Safety
// `cm`, `nerve` must be live handles; `out` must be writable.
int wkb_cohomology_classes(const struct WkbCrossedModuleHandle *cm,
                           const struct WkbNerveHandle *nerve,
                           uint32_t degree,
                           uint64_t budget,
                           size_t *out);

// Compares `H^1` of the central crossed module of `group` with classical
// `H^2` of its center.
//
// # Safety
// `group` must be a nul-terminated string, `nerve` a live handle, `out`
// writable.
int wkb_bridge_verify(const char *group,
                      const struct WkbNerveHandle *nerve,
                      uint64_t budget,
                      struct WkbBridgeSummary *out);

// Parses the descent-datum JSON (nerve plus `"i,j"` / `"i,j,k"` keyed
// operators).
//
// # Safety
// `json_text` must be a nul-terminated string; `out` must be writable.
int wkb_descent_from_json(const char *json_text, struct WkbDescentHandle **out);

// # Safety
// `d` must come from this library and not have been freed. Null is ignored.
void wkb_descent_free(struct WkbDescentHandle *d);

// Checks the descent relations to `depth`; writes 1 if all hold. The
// full per-simplex report goes to `report_json` when it is not null.
//
// # Safety
// `d` must be a live handle; `valid` writable; `report_json` null or
// writable.
int wkb_descent_validate(const struct WkbDescentHandle *d,
                         size_t depth,
                         int *valid,
                         char **report_json);

// Characteristic class as a JSON array of τ-series, one per triangle in
// nerve order.
//
// # Safety
// `d` must be a live handle; `out` must be writable.
int wkb_descent_extract_class(const struct WkbDescentHandle *d, size_t depth, char **out);

// Runs the command-line front end on `argv` (without the program name)
// and returns its exit status (0, 1 domain error, 2 malformed input), or
// a negated `WKB_ERR_*` code when the arguments cannot be read. The JSON
// report is stored in `report` when it is not null.
//
// # Safety
// `argv` must hold `argc` nul-terminated strings; `report` null or
// writable.
int wkb_run(size_t argc, const char *const *argv, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WKB_CECH_H */
