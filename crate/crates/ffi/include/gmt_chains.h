#ifndef GMT_CHAINS_H
#define GMT_CHAINS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum GmtStatus {
  GMT_STATUS_OK = 0,
  // A required pointer argument was null.
  GMT_STATUS_NULL_ARGUMENT = 1,
  // Unreadable input: malformed JSON, rational or UTF-8.
  GMT_STATUS_PARSE = 2,
  // A precondition of the operation failed; see `gmt_last_error_kind`.
  GMT_STATUS_PRECONDITION = 3,
  // A panic was caught at the boundary.
  GMT_STATUS_INTERNAL = 4,
} GmtStatus;

// Opaque chain handle. Release with `gmt_chain_free`.
typedef struct GmtChain GmtChain;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *gmt_version(void);

// Message of the last failure on this thread, or null. Valid until the
// next failing call on the same thread.
const char *gmt_last_error_message(void);

// Error kind of the last failure on this thread (e.g. "NonRegularValue"),
// or null.
const char *gmt_last_error_kind(void);

// Parses a chain document.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum GmtStatus gmt_chain_from_json(const char *json, struct GmtChain **out);

// Renders a chain document; release the string with `gmt_string_free`.
//
// # Safety
// `chain` must be a live handle and `out` a valid pointer.
enum GmtStatus gmt_chain_to_json(const struct GmtChain *chain, char **out);

// # Safety
// `s` must come from `gmt_chain_to_json` and not be freed twice.
void gmt_string_free(char *s);

// # Safety
// `chain` must be null or a live handle; it is invalid afterwards.
void gmt_chain_free(struct GmtChain *chain);

// Dimension of the chain, or `SIZE_MAX` for a null handle.
//
// # Safety
// `chain` must be null or a live handle.
size_t gmt_chain_dim(const struct GmtChain *chain);

// Number of cells with a nonzero coefficient, or `SIZE_MAX` for a null handle.
//
// # Safety
// `chain` must be null or a live handle.
size_t gmt_chain_term_count(const struct GmtChain *chain);

// # Safety
// `chain` must be a live handle and `out` a valid pointer.
enum GmtStatus gmt_chain_boundary(const struct GmtChain *chain, struct GmtChain **out);

// Sum of two chains on the same complex over the same group.
//
// # Safety
// `a` and `b` must be live handles and `out` a valid pointer.
enum GmtStatus gmt_chain_add(const struct GmtChain *a,
                             const struct GmtChain *b,
                             struct GmtChain **out);

// Slice along `{f = level}` for `f(x) = gradient · x + constant`.
// `gradient` is comma-separated; all numbers are rationals like "1/2".
// A null `constant` means zero.
//
// # Safety
// String arguments must be NUL-terminated, `chain` live, `out` valid.
enum GmtStatus gmt_chain_slice(const struct GmtChain *chain,
                               const char *gradient,
                               const char *constant,
                               const char *level,
                               struct GmtChain **out);

// Reduction of an integer chain mod `d`.
//
// # Safety
// `chain` must be a live handle and `out` a valid pointer.
enum GmtStatus gmt_chain_reduce_mod(const struct GmtChain *chain,
                                    uint64_t d,
                                    struct GmtChain **out);

// # Safety
// `chain` must be a live handle and `out` a valid pointer.
enum GmtStatus gmt_chain_mass(const struct GmtChain *chain, double *out);

// Flat norm over the chain's own complex.
//
// # Safety
// `chain` must be a live handle and `out` a valid pointer.
enum GmtStatus gmt_chain_flat_norm(const struct GmtChain *chain, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GMT_CHAINS_H */
