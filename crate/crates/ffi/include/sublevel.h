#ifndef SUBLEVEL_H
#define SUBLEVEL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SblStatus {
  SBL_STATUS_OK = 0,
  SBL_STATUS_NULL_POINTER = 1,
  SBL_STATUS_INVALID_UTF8 = 2,
  SBL_STATUS_PARSE_ERROR = 3,
  SBL_STATUS_INVALID_ARGUMENT = 4,
  SBL_STATUS_EVALUATION_ERROR = 5,
  SBL_STATUS_TOO_LARGE = 6,
  SBL_STATUS_PANIC = 7,
} SblStatus;

/**
 * Parsed expression.
 */
typedef struct SblExpr SblExpr;

/**
 * Parsed operator recipe.
 */
typedef struct SblRecipe SblRecipe;

/**
 * Parsed d-tree.
 */
typedef struct SblTree SblTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or NULL. Valid until the
 * next call into this library on the same thread.
 */
const char *sbl_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void sbl_string_free(char *s);

/**
 * Parse `text` over variables `x1..x{dim}`; the result is simplified.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum SblStatus sbl_expr_parse(const char *text, size_t dim, struct SblExpr **out);

/**
 * # Safety
 * `e` must be NULL or a handle from this library, not freed before.
 */
void sbl_expr_free(struct SblExpr *e);

/**
 * # Safety
 * `e` must be a live handle and `out` writable.
 */
enum SblStatus sbl_expr_to_string(const struct SblExpr *e, char **out);

/**
 * Evaluate at `x[0..len]`.
 *
 * # Safety
 * `e` must be a live handle, `x` must point to `len` doubles, `out` writable.
 */
enum SblStatus sbl_expr_eval(const struct SblExpr *e, const double *x, size_t len, double *out);

/**
 * `∂e/∂x_i`, `i` starting at 1.
 *
 * # Safety
 * `e` must be a live handle and `out` writable.
 */
enum SblStatus sbl_expr_diff(const struct SblExpr *e, size_t i, struct SblExpr **out);

/**
 * Writes 1 if `e` is identically zero, 0 if not, -1 if undecided.
 *
 * # Safety
 * `e` must be a live handle and `verdict` writable.
 */
enum SblStatus sbl_expr_zero_test(const struct SblExpr *e,
                                  size_t trials,
                                  uint64_t seed,
                                  int32_t *verdict);

/**
 * Parse a tree such as `((3,2),(1,3))`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum SblStatus sbl_tree_parse(const char *text, struct SblTree **out);

/**
 * # Safety
 * `g` must be NULL or a handle from this library, not freed before.
 */
void sbl_tree_free(struct SblTree *g);

/**
 * `#G`, `G^(1..m)` into `leaf_counts[0..m]`, depth and vertex count.
 * Any output pointer other than `leaf_counts` may be NULL.
 *
 * # Safety
 * `g` must be a live handle; `leaf_counts` must hold `m` entries.
 */
enum SblStatus sbl_tree_stats(const struct SblTree *g,
                              size_t m,
                              size_t *order,
                              size_t *leaf_counts,
                              size_t *depth,
                              size_t *vertex_count);

/**
 * # Safety
 * `g` must be a live handle and `out` writable.
 */
enum SblStatus sbl_tree_to_dot(const struct SblTree *g, char **out);

/**
 * Parse a recipe such as `det[1,2](det[1](id),det[2](id))`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum SblStatus sbl_recipe_parse(const char *text, struct SblRecipe **out);

/**
 * # Safety
 * `r` must be NULL or a handle from this library, not freed before.
 */
void sbl_recipe_free(struct SblRecipe *r);

/**
 * `LF` in dimension `d`.
 *
 * # Safety
 * `r`, `f` must be live handles and `out` writable.
 */
enum SblStatus sbl_recipe_apply(const struct SblRecipe *r,
                                const struct SblExpr *f,
                                size_t d,
                                struct SblExpr **out);

/**
 * Type `(α, β)`; `beta` must hold `d` entries.
 *
 * # Safety
 * `r` must be a live handle, `alpha` writable, `beta` `d` entries long.
 */
enum SblStatus sbl_recipe_type(const struct SblRecipe *r, size_t d, size_t *alpha, size_t *beta);

/**
 * Khovanskii bound as a decimal string (it can exceed 64 bits).
 *
 * # Safety
 * `betas` must hold `d` entries and `out` be writable.
 */
enum SblStatus sbl_khovanskii_bound(size_t d,
                                    size_t r,
                                    size_t alpha,
                                    const size_t *betas,
                                    char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBLEVEL_H */
