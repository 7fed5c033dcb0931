/* C interface of the blockmatch motion estimation toolkit. */

#ifndef BLOCKMATCH_H
#define BLOCKMATCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Block distortion measure selector.
 */
typedef enum BmCostKind {
  BmCostMad = 0,
  BmCostMse = 1,
} BmCostKind;

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum BmStatus {
  BmOk = 0,
  BmErrNullPointer = 1,
  BmErrInvalidArgument = 2,
  BmErrDimensions = 3,
  BmErrUnknownAlgorithm = 4,
  BmErrOutOfBounds = 5,
} BmStatus;

/**
 * Opaque per-frame motion field handle.
 */
typedef struct BmField BmField;

/**
 * Opaque 8-bit luma frame handle.
 */
typedef struct BmFrame BmFrame;

/**
 * Search parameters; obtain defaults from `bm_config_default`.
 */
typedef struct BmConfig {
  uint32_t block_size;
  int32_t search_range;
  enum BmCostKind cost_kind;
} BmConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *bm_version(void);

/**
 * Default configuration: 16x16 blocks, +/-7 window, MAD.
 */
struct BmConfig bm_config_default(void);

/**
 * Creates a frame from a row-major luma plane of `width * height` bytes.
 *
 * # Safety
 * `luma` must point to at least `luma_len` readable bytes and `out` must be
 * a valid pointer. The returned handle is released with `bm_frame_free`.
 */
enum BmStatus bm_frame_create(uint32_t width,
                              uint32_t height,
                              const uint8_t *luma,
                              uintptr_t luma_len,
                              struct BmFrame **out);

/**
 * Releases a frame handle; a NULL handle is ignored.
 *
 * # Safety
 * `frame` must be NULL or a pointer returned by `bm_frame_create` that has
 * not been freed yet.
 */
void bm_frame_free(struct BmFrame *frame);

/**
 * Runs the named search algorithm (for example "dcds", "cds", "fs") over
 * every block of `current` against `reference`.
 *
 * # Safety
 * `alg_id` must be a NUL-terminated string; `current`, `reference`, `cfg`
 * and `out` must be valid pointers. The returned handle is released with
 * `bm_field_free`.
 */
enum BmStatus bm_estimate_frame(const char *alg_id,
                                const struct BmFrame *current,
                                const struct BmFrame *reference,
                                const struct BmConfig *cfg,
                                struct BmField **out);

/**
 * Block-grid width of a motion field.
 *
 * # Safety
 * `field` must be a live handle from `bm_estimate_frame`.
 */
uint32_t bm_field_cols(const struct BmField *field);

/**
 * Block-grid height of a motion field.
 *
 * # Safety
 * `field` must be a live handle from `bm_estimate_frame`.
 */
uint32_t bm_field_rows(const struct BmField *field);

/**
 * Reads one block's vector, raw distortion and search-point count. Any of
 * the out-pointers may be NULL to skip that value.
 *
 * # Safety
 * `field` must be a live handle; non-NULL out-pointers must be valid.
 */
enum BmStatus bm_field_block(const struct BmField *field,
                             uint32_t col,
                             uint32_t row,
                             int32_t *dx,
                             int32_t *dy,
                             double *cost,
                             uint32_t *nsp);

/**
 * Releases a motion-field handle; a NULL handle is ignored.
 *
 * # Safety
 * `field` must be NULL or a pointer returned by `bm_estimate_frame` that
 * has not been freed yet.
 */
void bm_field_free(struct BmField *field);

/**
 * Fills `out_counts` with the ideal-surface search-point map of the named
 * algorithm: `(range+1)^2` entries when `quarter` is nonzero (rows dy
 * ascending from 0), `(2*range+1)^2` entries otherwise (rows from
 * -range). `out_len` must match exactly.
 *
 * # Safety
 * `alg_id` must be a NUL-terminated string and `out_counts` must point to
 * `out_len` writable entries.
 */
enum BmStatus bm_ideal_nsp_map(const char *alg_id,
                               int32_t range,
                               uint32_t quarter,
                               uint32_t *out_counts,
                               uintptr_t out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BLOCKMATCH_H */
