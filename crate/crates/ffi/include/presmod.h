#ifndef PRESMOD_H
#define PRESMOD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Route choice for [`presmod_poset_cohomology`].
 */
typedef enum PresmodRoute {
  PRESMOD_ROUTE_AUTO = 0,
  PRESMOD_ROUTE_ORDER_COMPLEX = 1,
  PRESMOD_ROUTE_ALTERNATING = 2,
} PresmodRoute;

/**
 * Result of every call.
 */
typedef enum PresmodStatus {
  PRESMOD_STATUS_OK = 0,
  /**
   * A required pointer was null.
   */
  PRESMOD_STATUS_NULL_ARGUMENT = 1,
  /**
   * Input text was not valid UTF-8.
   */
  PRESMOD_STATUS_INVALID_UTF8 = 2,
  /**
   * Input text does not follow its format.
   */
  PRESMOD_STATUS_PARSE_ERROR = 3,
  /**
   * Input parses but violates an invariant, or the computation rejected it.
   */
  PRESMOD_STATUS_INVALID_INPUT = 4,
  /**
   * An index or option was out of range.
   */
  PRESMOD_STATUS_OUT_OF_RANGE = 5,
  /**
   * The library panicked; this is a bug.
   */
  PRESMOD_STATUS_INTERNAL = 6,
} PresmodStatus;

/**
 * A computed barcode.
 */
typedef struct PresmodBarcode PresmodBarcode;

/**
 * A parsed annotated matrix.
 */
typedef struct PresmodMatrix PresmodMatrix;

/**
 * One bar. `death` is meaningful only when `infinite` is false.
 */
typedef struct PresmodBar {
  size_t degree;
  size_t birth;
  size_t death;
  bool infinite;
} PresmodBar;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *presmod_last_error(void);

/**
 * Parses an annotated matrix in ANNMAT format.
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out` a writable pointer.
 */
enum PresmodStatus presmod_matrix_parse(const char *source, struct PresmodMatrix **out);

/**
 * Number of rows and columns of a matrix.
 *
 * # Safety
 * `matrix` must come from [`presmod_matrix_parse`]; `rows` and `cols` may
 * be null.
 */
enum PresmodStatus presmod_matrix_shape(const struct PresmodMatrix *matrix,
                                        size_t *rows,
                                        size_t *cols);

/**
 * Releases a matrix. Null is ignored.
 *
 * # Safety
 * `matrix` must be null or come from [`presmod_matrix_parse`] and not have
 * been freed.
 */
void presmod_matrix_free(struct PresmodMatrix *matrix);

/**
 * Homology of the pair `f0`, `g0` after repairing it into a complex,
 * with bars labelled by `degree`.
 *
 * # Safety
 * `f0` and `g0` must be live matrix handles and `out` a writable pointer.
 */
enum PresmodStatus presmod_pair_homology(const struct PresmodMatrix *f0,
                                         const struct PresmodMatrix *g0,
                                         size_t degree,
                                         bool keep_empty,
                                         struct PresmodBarcode **out);

/**
 * Persistent homology in dimension `dim` of a tower in TOWER format, or of
 * a cosheaf over a tower when the text is in COSHEAF format.
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out` a writable pointer.
 */
enum PresmodStatus presmod_tower_homology(const char *source,
                                          size_t dim,
                                          bool keep_empty,
                                          struct PresmodBarcode **out);

/**
 * Persistent sheaf cohomology in degree `degree` of a sheaf in SHEAF
 * format. `default_field` applies when the text names no field.
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out` a writable pointer.
 */
enum PresmodStatus presmod_sheaf_cohomology(const char *source,
                                            uint32_t default_field,
                                            size_t degree,
                                            size_t threads,
                                            bool keep_empty,
                                            struct PresmodBarcode **out);

/**
 * Persistent sheaf cohomology over a finite poset in POSET format.
 * `chain_limit` bounds the size of the order complex.
 *
 * # Safety
 * `source` must be a NUL-terminated string and `out` a writable pointer.
 */
enum PresmodStatus presmod_poset_cohomology(const char *source,
                                            uint32_t default_field,
                                            size_t degree,
                                            enum PresmodRoute route,
                                            uint64_t chain_limit,
                                            bool keep_empty,
                                            struct PresmodBarcode **out);

/**
 * Number of bars, counted with multiplicity. Null gives 0.
 *
 * # Safety
 * `barcode` must be null or a live barcode handle.
 */
size_t presmod_barcode_len(const struct PresmodBarcode *barcode);

/**
 * Writes bar `index` (bars are sorted by degree, birth, death) to `out`.
 *
 * # Safety
 * `barcode` must be a live barcode handle and `out` a writable pointer.
 */
enum PresmodStatus presmod_barcode_get(const struct PresmodBarcode *barcode,
                                       size_t index,
                                       struct PresmodBar *out);

/**
 * The barcode as text, one `degree birth death` line per bar. Release the
 * string with [`presmod_string_free`]. Returns null for a null handle.
 *
 * # Safety
 * `barcode` must be null or a live barcode handle.
 */
char *presmod_barcode_to_string(const struct PresmodBarcode *barcode);

/**
 * Releases a barcode. Null is ignored.
 *
 * # Safety
 * `barcode` must be null or a live barcode handle.
 */
void presmod_barcode_free(struct PresmodBarcode *barcode);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or come from [`presmod_barcode_to_string`].
 */
void presmod_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRESMOD_H */
