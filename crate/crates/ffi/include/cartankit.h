#ifndef CARTANKIT_H
#define CARTANKIT_H

/* Generated by cbindgen from cartankit-ffi; edit the Rust source instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every fallible call.
typedef enum {
  CK_STATUS_OK = 0,
  // A pointer argument was NULL or a buffer was too small.
  CK_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  CK_STATUS_INVALID_UTF8 = 2,
  // Structurally invalid input (bad JSON, wrong dimensions, bad index).
  CK_STATUS_INVALID_ARGUMENT = 3,
  // Operands live in different triple spaces.
  CK_STATUS_SPACE_MISMATCH = 4,
  // The operation is undefined for the given factor kind.
  CK_STATUS_UNSUPPORTED = 5,
  // Input failed a mathematical validation.
  CK_STATUS_VALIDATION_FAILED = 6,
  // A point left the domain of the operation.
  CK_STATUS_DOMAIN_ERROR = 7,
  // A singular or near-singular configuration was hit.
  CK_STATUS_SINGULAR = 8,
  // An iteration or factorization did not converge.
  CK_STATUS_NUMERICAL_FAILURE = 9,
  // A panic was caught at the FFI boundary.
  CK_STATUS_INTERNAL_PANIC = 10,
} ck_status;

// Opaque element handle.
typedef struct ck_element ck_element;

// Opaque triple space handle.
typedef struct ck_space ck_space;

// Opaque result of the Wolff construction for a fixed-point-free map.
typedef struct ck_wolff ck_wolff;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copy the last error message of this thread into `buf` (truncated to
// `cap − 1` bytes, always NUL-terminated when `cap > 0`). Returns the full
// message length in bytes.
size_t ck_last_error_message(char *buf, size_t cap);

// Release a string returned by the library.
//
// # Safety
// `s` must have been returned by this library and not freed before.
void ck_string_free(char *s);

// Parse a triple space from its JSON description, e.g.
// `{"factors":[{"kind":"rect","rows":2,"cols":2},{"kind":"spin","n":4}]}`.
ck_status ck_space_from_json(const char *json, ck_space **out);

// Ambient coordinate dimension of the space.
ck_status ck_space_total_dim(const ck_space *space, size_t *out);

// Rank of the space (sum of the factor ranks).
ck_status ck_space_rank(const ck_space *space, size_t *out);

// Release a space handle.
//
// # Safety
// `space` must have been created by this library and not freed before.
void ck_space_free(ck_space *space);

// Build an element from `2 * total_dim` interleaved re/im coordinates.
ck_status ck_element_from_coords(const ck_space *space,
                                 const double *coords,
                                 size_t len,
                                 ck_element **out);

// Parse an element from its JSON form.
ck_status ck_element_from_json(const char *json, ck_element **out);

// Serialize an element to JSON; release the result with `ck_string_free`.
// Returns NULL when `element` is NULL.
char *ck_element_to_json(const ck_element *element);

// Copy the interleaved re/im coordinates into `buf` (`len ≥ 2 * total_dim`).
ck_status ck_element_coords(const ck_element *element, double *buf, size_t len);

// The triple (spectral) norm of the element.
ck_status ck_element_jb_norm(const ck_element *element, double *out);

// Release an element handle.
//
// # Safety
// `element` must have been created by this library and not freed before.
void ck_element_free(ck_element *element);

// `{a, b, c}`.
ck_status ck_triple_product(const ck_element *a,
                            const ck_element *b,
                            const ck_element *c,
                            ck_element **out);

// Kobayashi distance `tanh⁻¹‖g₋ₓ(y)‖` between two interior points.
ck_status ck_kobayashi_distance(const ck_element *x, const ck_element *y, double *out);

// The Möbius transformation `g_a(z)`.
ck_status ck_mobius_apply(const ck_element *a, const ck_element *z, ck_element **out);

// Spectral coefficients of `z`, descending. Writes up to `cap` values into
// `buf` and stores the full count in `written`.
ck_status ck_spectral_coefficients(const ck_element *z, double *buf, size_t cap, size_t *written);

// Run the Wolff construction for the holomorphic self-map described by
// `map_json` on the given space; fails when the map has an interior fixed
// point. The expression format matches the CLI:
// `{"type":"mobius","a":<element>}`, `{"type":"scalar_scale","alpha":0.9}`,
// `{"type":"compose","outer":…,"inner":…}`, `{"type":"direct_sum","parts":[…]}`,
// `{"type":"constant","c":<element>}`, `{"type":"linear_isometry","matrix":[…]}`.
ck_status ck_wolff_run(const char *map_json, const ck_space *space, ck_wolff **out);

// The Wolff point ξ on the boundary.
ck_status ck_wolff_xi(const ck_wolff *w, ck_element **out);

// Number of boundary frame members (and σ values).
ck_status ck_wolff_frame_len(const ck_wolff *w, size_t *out);

// Copy the σ values (their maximum is 1 by normalization).
ck_status ck_wolff_sigmas(const ck_wolff *w, double *buf, size_t len);

// Strict membership of `x` in the horoball `S₀(ξ, λ)` of the construction:
// writes 1 when `‖B^{-1/2}(x − c(λ))‖ < 1 − tol`, else 0.
ck_status ck_wolff_horoball_contains(const ck_wolff *w,
                                     double lambda,
                                     const ck_element *x,
                                     double tol,
                                     int *out);

// Release a Wolff handle.
//
// # Safety
// `w` must have been created by this library and not freed before.
void ck_wolff_free(ck_wolff *w);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CARTANKIT_H */
