#ifndef SO3BRAID_H
#define SO3BRAID_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum So3bStatus {
  SO3B_STATUS_OK = 0,
  SO3B_STATUS_NULL_POINTER = 1,
  SO3B_STATUS_INVALID_UTF8 = 2,
  SO3B_STATUS_INVALID_INPUT = 3,
  SO3B_STATUS_NUMERICAL = 4,
  SO3B_STATUS_DISAGREEMENT = 5,
  SO3B_STATUS_INCONCLUSIVE = 6,
  SO3B_STATUS_BUFFER_TOO_SMALL = 7,
  SO3B_STATUS_PANIC = 8,
} So3bStatus;

/**
 * A piecewise-geodesic path in SO(3).
 */
typedef struct So3bPath So3bPath;

/**
 * A braid word on `n` strands.
 */
typedef struct So3bWord So3bWord;

/**
 * A class of the three-strand sphere braid quotient: the permutation as
 * images of 1, 2, 3 and the exponent sum mod 4.
 */
typedef struct So3bSphereClass {
  uint8_t perm[3];
  uint8_t esum_mod4;
} So3bSphereClass;

/**
 * Result of classifying a closed path. Classes are 0 (trivial) or 1.
 */
typedef struct So3bReport {
  uint8_t homotopy_class;
  uint8_t lift_class;
  bool agreement;
  int64_t exponent_sum;
  uint8_t exponent_sum_mod4;
  double pole[3];
  size_t samples;
  size_t braid_len;
} So3bReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null if none has
 * failed. Successful calls leave it untouched. The pointer is valid until
 * the next failing call on the same thread.
 */
const char *so3b_last_error(void);

/**
 * Library version as a static string.
 */
const char *so3b_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void so3b_string_free(char *s);

/**
 * Builds a word from `len` signed generator indices (`k` is `σk`, `-k` its
 * inverse).
 *
 * # Safety
 * `letters` must point to `len` readable values (or be null when `len` is
 * 0); `out` must be writable.
 */
enum So3bStatus so3b_word_new(size_t strands,
                              const int32_t *letters,
                              size_t len,
                              struct So3bWord **out);

/**
 * Parses a whitespace-separated word such as `"1 -2 1"`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum So3bStatus so3b_word_parse(size_t strands, const char *text, struct So3bWord **out);

/**
 * # Safety
 * `word` must be null or a handle from this library, freed once.
 */
void so3b_word_free(struct So3bWord *word);

/**
 * # Safety
 * `word` must be a live handle.
 */
size_t so3b_word_len(const struct So3bWord *word);

/**
 * # Safety
 * `word` must be a live handle.
 */
size_t so3b_word_strands(const struct So3bWord *word);

/**
 * Copies the signed letters into `buf`. `out_len` always receives the word
 * length; a short buffer yields `BUFFER_TOO_SMALL` and nothing is copied.
 *
 * # Safety
 * `word` must be a live handle, `buf` writable for `cap` values (or null
 * when `cap` is 0), `out_len` writable.
 */
enum So3bStatus so3b_word_letters(const struct So3bWord *word,
                                  int32_t *buf,
                                  size_t cap,
                                  size_t *out_len);

/**
 * Word as text, to be freed with `so3b_string_free`.
 *
 * # Safety
 * `word` must be a live handle.
 */
char *so3b_word_to_string(const struct So3bWord *word);

/**
 * Equality in the braid group, decided exactly.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` writable.
 */
enum So3bStatus so3b_word_equal(const struct So3bWord *a, const struct So3bWord *b, bool *out);

/**
 * Class of a three-strand word in the sphere braid quotient.
 *
 * # Safety
 * `word` must be a live handle; `out` writable.
 */
enum So3bStatus so3b_word_sphere_class(const struct So3bWord *word, struct So3bSphereClass *out);

/**
 * Shortest representative of the word's class in the quotient, as a new
 * handle.
 *
 * # Safety
 * `word` must be a live handle; `out` writable.
 */
enum So3bStatus so3b_word_canonical(const struct So3bWord *word, struct So3bWord **out);

/**
 * Searches for a rewriting certificate from `a` to `b` and returns it as
 * JSON. A search that gives up yields `INCONCLUSIVE`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` writable.
 */
enum So3bStatus so3b_certify_equal(const struct So3bWord *a, const struct So3bWord *b, char **out);

/**
 * Replays a JSON certificate and reports whether every step is legal. When
 * it is not, the offending step is described by `so3b_last_error`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out_valid` writable.
 */
enum So3bStatus so3b_certificate_check(const char *json, bool *out_valid);

/**
 * Builds a path from `count` segments: `axes` holds `3 * count` axis
 * components and `angles` the rotation angles in radians.
 *
 * # Safety
 * `axes` and `angles` must be readable for the stated lengths; `out`
 * writable.
 */
enum So3bStatus so3b_path_from_segments(const double *axes,
                                        const double *angles,
                                        size_t count,
                                        struct So3bPath **out);

/**
 * Reads a path from its JSON file format (segments or orientation samples).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` writable.
 */
enum So3bStatus so3b_path_from_json(const char *json, struct So3bPath **out);

/**
 * # Safety
 * `path` must be null or a handle from this library, freed once.
 */
void so3b_path_free(struct So3bPath *path);

/**
 * Concatenation `a` then `b`, as a new handle.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` writable.
 */
enum So3bStatus so3b_path_then(const struct So3bPath *a,
                               const struct So3bPath *b,
                               struct So3bPath **out);

/**
 * Pure braid word traced out by a closed path, as a new handle.
 *
 * # Safety
 * `path` must be a live handle; `out` writable.
 */
enum So3bStatus so3b_path_braid(const struct So3bPath *path, struct So3bWord **out);

/**
 * Classifies a closed path in pi_1(SO(3)). On `DISAGREEMENT` the report is
 * still filled in.
 *
 * # Safety
 * `path` must be a live handle; `out` writable.
 */
enum So3bStatus so3b_path_classify(const struct So3bPath *path, struct So3bReport *out);

/**
 * Full classification report as JSON.
 *
 * # Safety
 * `path` must be a live handle; `out` writable.
 */
enum So3bStatus so3b_path_classify_json(const struct So3bPath *path, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SO3BRAID_H */
