#ifndef CLOUDLAB_H
#define CLOUDLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CloudlabStatus {
  CLOUDLAB_STATUS_OK = 0,
  CLOUDLAB_STATUS_NULL_POINTER = 1,
  CLOUDLAB_STATUS_INVALID_UTF8 = 2,
  CLOUDLAB_STATUS_PARSE = 3,
  CLOUDLAB_STATUS_UNKNOWN_DATASET = 4,
  CLOUDLAB_STATUS_UNKNOWN_VERTEX = 5,
  CLOUDLAB_STATUS_LIMIT_EXCEEDED = 6,
  CLOUDLAB_STATUS_INVALID_ARGUMENT = 7,
  CLOUDLAB_STATUS_NO_REPRESENTATION = 8,
  CLOUDLAB_STATUS_PANIC = 9,
} CloudlabStatus;

typedef enum CloudlabKind {
  CLOUDLAB_KIND_I = 1,
  CLOUDLAB_KIND_II = 2,
  CLOUDLAB_KIND_III = 3,
} CloudlabKind;

typedef enum CloudlabRelation {
  CLOUDLAB_RELATION_NO_STATE_WITH_A_TRUE = 0,
  CLOUDLAB_RELATION_TIFS = 1,
  CLOUDLAB_RELATION_TITS = 2,
  CLOUDLAB_RELATION_EQUIVALENT = 3,
  CLOUDLAB_RELATION_OPPOSITE = 4,
  CLOUDLAB_RELATION_INDEPENDENT = 5,
  CLOUDLAB_RELATION_VALUE_INDEFINITE = 6,
} CloudlabRelation;

/**
 * Opaque cloud handle, with the file's vectors if it had any.
 */
typedef struct CloudlabCloud CloudlabCloud;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or an empty string. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *cloudlab_last_error(void);

/**
 * Library version as a static string.
 */
const char *cloudlab_version(void);

/**
 * Parses cloud-format text into a new handle.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out` must be writable.
 */
enum CloudlabStatus cloudlab_cloud_parse(const char *source, struct CloudlabCloud **out);

/**
 * Loads a built-in cloud, e.g. `"firefly"` or `"hh10(x=1/4)"`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum CloudlabStatus cloudlab_cloud_from_dataset(const char *spec, struct CloudlabCloud **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `h` must come from this library and not be used afterwards.
 */
void cloudlab_cloud_free(struct CloudlabCloud *h);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t cloudlab_cloud_vertex_count(const struct CloudlabCloud *h);

/**
 * Context count, or 0 for a null handle.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t cloudlab_cloud_context_count(const struct CloudlabCloud *h);

/**
 * Number of type-II states. The state cap is read from
 * `CLOUDLAB_STATE_CAP`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum CloudlabStatus cloudlab_count_states(const struct CloudlabCloud *h, uint64_t *out);

/**
 * Relation between vertices `a` and `b`.
 *
 * # Safety
 * `h` must be a live handle; `a`, `b` NUL-terminated; `out` writable.
 */
enum CloudlabStatus cloudlab_classify_pair(const struct CloudlabCloud *h,
                                           const char *a,
                                           const char *b,
                                           enum CloudlabKind kind,
                                           enum CloudlabRelation *out);

/**
 * Writes true iff the cloud has no type-II state.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum CloudlabStatus cloudlab_ks_check(const struct CloudlabCloud *h, bool *out);

/**
 * Chromatic number of the skeleton.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum CloudlabStatus cloudlab_chromatic_number(const struct CloudlabCloud *h, size_t *out);

/**
 * Number of violations of the handle's vectors against its orthogonality.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum CloudlabStatus cloudlab_verify_representation(const struct CloudlabCloud *h, size_t *out);

/**
 * The cloud (and vectors) in the file format. Release with
 * `cloudlab_string_free`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum CloudlabStatus cloudlab_cloud_serialize(const struct CloudlabCloud *h, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void cloudlab_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CLOUDLAB_H */
