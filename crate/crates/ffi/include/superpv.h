#ifndef SUPERPV_H
#define SUPERPV_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SpvStatus {
  SPV_STATUS_OK = 0,
  SPV_STATUS_NULL_POINTER = 1,
  SPV_STATUS_INVALID_UTF8 = 2,
  SPV_STATUS_PARSE_ERROR = 3,
  SPV_STATUS_INVALID_SPEC = 4,
  SPV_STATUS_RING_MISMATCH = 5,
  SPV_STATUS_NOT_INVERTIBLE = 6,
  SPV_STATUS_VALIDATION_ERROR = 7,
  SPV_STATUS_PANIC = 8,
  SPV_STATUS_OTHER = 9,
} SpvStatus;

// An element of an [`SpvRing`]; keeps its ring alive.
typedef struct SpvElem SpvElem;

// A supercommutative ring.
typedef struct SpvRing SpvRing;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer
// stays valid until the next failing call on this thread.
const char *spv_last_error(void);

// Builds a ring from comma-separated name lists. `poly` entries are
// `name:even` or `name:odd`. Any list may be empty or NULL.
//
// # Safety
// String arguments must be NULL or valid NUL-terminated strings; `out`
// must be writable.
enum SpvStatus spv_ring_new(const char *body,
                            const char *odd,
                            const char *poly,
                            struct SpvRing **out);

// # Safety
// `ring` must be NULL or a handle from [`spv_ring_new`] not yet freed.
void spv_ring_free(struct SpvRing *ring);

// Parses an element such as `"t^2*th1 + 1/(t+1)"`.
//
// # Safety
// `ring` must be a live handle, `src` a NUL-terminated string and `out`
// writable.
enum SpvStatus spv_elem_parse(const struct SpvRing *ring, const char *src, struct SpvElem **out);

// # Safety
// `elem` must be NULL or a live element handle.
void spv_elem_free(struct SpvElem *elem);

// # Safety
// `a`, `b` must be live handles over the same ring; `out` writable.
enum SpvStatus spv_elem_add(const struct SpvElem *a, const struct SpvElem *b, struct SpvElem **out);

// Supercommutative product `a·b`.
//
// # Safety
// `a`, `b` must be live handles over the same ring; `out` writable.
enum SpvStatus spv_elem_mul(const struct SpvElem *a, const struct SpvElem *b, struct SpvElem **out);

// Inverse of an even element with invertible body.
//
// # Safety
// `a` must be a live handle; `out` writable.
enum SpvStatus spv_elem_invert(const struct SpvElem *a, struct SpvElem **out);

// The element with every odd generator set to zero.
//
// # Safety
// `a` must be a live handle; `out` writable.
enum SpvStatus spv_elem_body(const struct SpvElem *a, struct SpvElem **out);

// Writes 1 to `out` when `a` and `b` are equal, else 0.
//
// # Safety
// `a`, `b` must be live handles; `out` writable.
enum SpvStatus spv_elem_equal(const struct SpvElem *a, const struct SpvElem *b, int *out);

// Canonical text of an element; free with [`spv_string_free`].
//
// # Safety
// `a` must be a live handle; `out` writable.
enum SpvStatus spv_elem_to_string(const struct SpvElem *a, char **out);

// Runs a TOML problem and returns its JSONL report. `exit` receives 0 if
// every task passed, 1 if some verdict failed and 2 if some task's
// inputs were invalid. An invalid problem file is reported through the
// status code instead.
//
// # Safety
// `toml` must be a NUL-terminated string; `out` and `exit` writable.
enum SpvStatus spv_run_config(const char *toml, bool parallel, char **out, int *exit);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void spv_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPERPV_H */
