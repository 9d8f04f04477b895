#ifndef BHHT_H
#define BHHT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BhhtStatus {
  BHHT_STATUS_OK = 0,
  BHHT_STATUS_NULL_POINTER = 1,
  BHHT_STATUS_INVALID_UTF8 = 2,
  // Parse failure or an instance that does not validate.
  BHHT_STATUS_INVALID_INPUT = 3,
  BHHT_STATUS_OUT_OF_SCOPE = 4,
  BHHT_STATUS_INTERNAL = 5,
  BHHT_STATUS_PANIC = 6,
} BhhtStatus;

// Opaque instance handle.
typedef struct BhhtInstance BhhtInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses an instance document and validates it.
// `json` must be a NUL-terminated string; `out` must be writable.
enum BhhtStatus bhht_instance_from_json(const char *json, struct BhhtInstance **out);

// Releases a handle. NULL is ignored.
// `handle` must come from this library and not be used afterwards.
void bhht_instance_free(struct BhhtInstance *handle);

// Serializes the instance back to a document; free the result with
// `bhht_string_free`.
// `handle` must be a live handle; `out` must be writable.
enum BhhtStatus bhht_instance_to_json(const struct BhhtInstance *handle, char **out);

// Reduced orbifold Euler characteristic.
// `handle` must be a live handle; `out` must be writable.
enum BhhtStatus bhht_reduced_euler(const struct BhhtInstance *handle, int64_t *out);

// Both sides of the duality and whether they agree.
// `handle` must be a live handle; the three outputs must be writable.
enum BhhtStatus bhht_verify_duality(const struct BhhtInstance *handle,
                                    int64_t *lhs,
                                    int64_t *rhs,
                                    bool *equal);

// The dual instance as a new handle.
// `handle` must be a live handle; `out` must be writable.
enum BhhtStatus bhht_dual(const struct BhhtInstance *handle, struct BhhtInstance **out);

// Order of the diagonal group `G`.
// `handle` must be a live handle; `out` must be writable.
enum BhhtStatus bhht_group_order(const struct BhhtInstance *handle, uint64_t *out);

// Message for the last failed call on this thread, or NULL. The caller
// owns the string.
char *bhht_last_error(void);

// Releases a string returned by this library. NULL is ignored.
// `s` must come from this library and not be used afterwards.
void bhht_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BHHT_H */
