#ifndef FROGLAB_H
#define FROGLAB_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FrogStatus {
  FROG_STATUS_OK = 0,
  FROG_STATUS_NULL_POINTER = 1,
  FROG_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Destination not reached within the horizon.
   */
  FROG_STATUS_NOT_REACHED = 3,
  /**
   * Exact search refused: instance above the exactness cap.
   */
  FROG_STATUS_CAP_EXCEEDED = 4,
  /**
   * Caller buffer too small; the required length was written.
   */
  FROG_STATUS_BUFFER_TOO_SMALL = 5,
  FROG_STATUS_PANIC = 6,
} FrogStatus;

/**
 * Opaque percolation field handle.
 */
typedef struct FrogSiteField FrogSiteField;

/**
 * Opaque walk field handle.
 */
typedef struct FrogWalkField FrogWalkField;

/**
 * Summary of one passage-time computation.
 */
typedef struct FrogPassage {
  uint64_t value;
  uint32_t hops;
  uint32_t max_jump;
  uint32_t frontier_radius;
} FrogPassage;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code.
 */
const char *froglab_status_message(enum FrogStatus status);

const char *froglab_version(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum FrogStatus froglab_walkfield_new(uint64_t master_seed,
                                      uint64_t replica,
                                      uint32_t dim,
                                      struct FrogWalkField **out);

/**
 * # Safety
 * `field` must come from [`froglab_walkfield_new`] and not be used again.
 */
void froglab_walkfield_free(struct FrogWalkField *field);

/**
 * Position of the walk started at `site` after `j` steps, written to
 * `out` (`d` values).
 *
 * # Safety
 * `site` and `out` must point to `d` values.
 */
enum FrogStatus froglab_walk_position(const struct FrogWalkField *field,
                                      const int32_t *site,
                                      uint64_t j,
                                      int32_t *out);

/**
 * `t(from, to)` if at most `horizon`, else `NotReached`.
 *
 * # Safety
 * `from` and `to` must point to `d` values; `out` must be valid for writes.
 */
enum FrogStatus froglab_hitting_time(const struct FrogWalkField *field,
                                     const int32_t *from,
                                     const int32_t *to,
                                     uint64_t horizon,
                                     uint64_t *out);

/**
 * `T(source, destination)` with the frogs at `mask` (`mask_len` sites,
 * `d` values each) removed. `horizon_cap = 0` selects the default cap.
 *
 * # Safety
 * Site pointers must point to `d` values, `mask` to `mask_len * d`
 * values (or be null when `mask_len = 0`); `out` must be valid for writes.
 */
enum FrogStatus froglab_passage_time(const struct FrogWalkField *field,
                                     const int32_t *source,
                                     const int32_t *destination,
                                     const int32_t *mask,
                                     size_t mask_len,
                                     uint64_t horizon_cap,
                                     struct FrogPassage *out);

/**
 * Genealogy of `T(source, destination)` as `len * d` coordinates. When
 * `capacity` (in sites) is too small, only `len` is written and
 * `BufferTooSmall` returned.
 *
 * # Safety
 * `buf` must hold `capacity * d` values; `len` must be valid for writes.
 */
enum FrogStatus froglab_genealogy(const struct FrogWalkField *field,
                                  const int32_t *source,
                                  const int32_t *destination,
                                  uint64_t horizon_cap,
                                  int32_t *buf,
                                  size_t capacity,
                                  size_t *len);

/**
 * `T_1(u, v)`.
 *
 * # Safety
 * `u` and `v` must point to `d` values; `out` must be valid for writes.
 */
enum FrogStatus froglab_t1(const struct FrogWalkField *field,
                           const int32_t *u,
                           const int32_t *v,
                           uint64_t horizon_cap,
                           uint64_t *out);

/**
 * `T_2(u, v)`.
 *
 * # Safety
 * `u` and `v` must point to `d` values; `out` must be valid for writes.
 */
enum FrogStatus froglab_t2(const struct FrogWalkField *field,
                           const int32_t *u,
                           const int32_t *v,
                           uint64_t horizon_cap,
                           uint64_t *out);

/**
 * `F_m` for displacement `x`, with `m` and the term count.
 *
 * # Safety
 * `x` must point to `d` values; out-pointers must be valid for writes.
 */
enum FrogStatus froglab_spatial_average(const struct FrogWalkField *field,
                                        const int32_t *x,
                                        uint64_t horizon_cap,
                                        double *value,
                                        uint32_t *m,
                                        size_t *terms);

/**
 * I.i.d. Bernoulli(`p`) field on `B(radius)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FrogStatus froglab_sitefield_independent(uint64_t seed,
                                              uint32_t dim,
                                              uint32_t radius,
                                              double p,
                                              struct FrogSiteField **out);

/**
 * `M`-dependent field on `B(radius)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FrogStatus froglab_sitefield_m_dependent(uint64_t seed,
                                              uint32_t dim,
                                              uint32_t radius,
                                              uint32_t m,
                                              double p,
                                              struct FrogSiteField **out);

/**
 * # Safety
 * `field` must come from a `froglab_sitefield_*` constructor and not be
 * used again.
 */
void froglab_sitefield_free(struct FrogSiteField *field);

/**
 * Indicator at `site`; 0 outside the field's box.
 *
 * # Safety
 * `site` must point to `d` values; `out` must be valid for writes.
 */
enum FrogStatus froglab_sitefield_get(const struct FrogSiteField *field,
                                      const int32_t *site,
                                      uint8_t *out);

/**
 * `X_L` under the default exactness caps.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FrogStatus froglab_max_path_weight(const struct FrogSiteField *field,
                                        uint32_t radius,
                                        uint32_t *out);

/**
 * `N_L` under the default exactness caps.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum FrogStatus froglab_max_animal_weight(const struct FrogSiteField *field,
                                          uint32_t size_bound,
                                          uint32_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FROGLAB_H */
