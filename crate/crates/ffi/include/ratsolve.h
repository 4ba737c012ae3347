/* C ABI for the ratsolve exact game solvers. */

#pragma once

/* Generated with cbindgen:0.29.4 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible call.
typedef enum RsStatus {
  // The call succeeded.
  RS_STATUS_OK = 0,
  // A required pointer argument was NULL.
  RS_STATUS_NULL_ARGUMENT = 1,
  // A text argument was not valid UTF-8.
  RS_STATUS_INVALID_UTF8 = 2,
  // The instance text was rejected; the message carries line and column.
  RS_STATUS_PARSE_ERROR = 3,
  // The requested operation needs a section the instance lacks.
  RS_STATUS_MISSING_SECTION = 4,
  // A scalar argument was out of range.
  RS_STATUS_INVALID_ARGUMENT = 5,
  // An internal invariant failed; the library state is still usable.
  RS_STATUS_INTERNAL_PANIC = 6,
} RsStatus;

// Solution concept selector; pass one of these values as the `concept`
// argument of [`rs_solve`].
typedef enum RsConcept {
  // Belief-free rationalizability.
  RS_CONCEPT_BELIEF_FREE = 0,
  // Rationalizability under the instance's first-order restriction.
  RS_CONCEPT_RESTRICTED = 1,
  // Interim correlated rationalizability on the instance's structure.
  RS_CONCEPT_INTERIM = 2,
} RsConcept;

// A parsed instance: an environment plus optional restriction and
// structure sections.
typedef struct RsInstance RsInstance;

// A solved correspondence, self-contained for reporting and queries.
typedef struct RsSolution RsSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread, or an empty
// string after a success. The pointer stays valid until the next library
// call on the same thread; do not free it.
const char *rs_last_error_message(void);

// The library version as a static string; do not free it.
const char *rs_version(void);

// Parses instance text into a handle. On success `*out` owns the
// instance; release it with [`rs_instance_free`].
enum RsStatus rs_instance_parse(const char *text, struct RsInstance **out);

// Releases an instance handle. NULL is ignored.
void rs_instance_free(struct RsInstance *instance);

// Solves the instance under a concept. `selector` must be an
// [`RsConcept`] value; the restricted concept treats a missing
// restriction section as unrestricted, while the interim concept requires
// a structure section. On success `*out` owns the solution; release it
// with [`rs_solution_free`].
enum RsStatus rs_solve(const struct RsInstance *instance,
                       int32_t selector,
                       struct RsSolution **out);

// Releases a solution handle. NULL is ignored.
void rs_solution_free(struct RsSolution *solution);

// Stores the number of elimination rounds the solve needed in `*out`.
enum RsStatus rs_solution_rounds(const struct RsSolution *solution, size_t *out);

// Stores in `*out` whether `action` survives for `player` (1 or 2) at
// `payoff_type`. `signal` must be 0 unless the solution is interim, in
// which case it selects the signal. All indices are zero-based.
enum RsStatus rs_solution_is_rationalizable(const struct RsSolution *solution,
                                            int32_t player,
                                            size_t payoff_type,
                                            size_t signal,
                                            size_t action,
                                            bool *out);

// Renders the solution report (the same text the command-line `solve`
// prints), optionally with the round trace and the justifying
// conjectures. On success `*out` owns the string; release it with
// [`rs_string_free`].
enum RsStatus rs_solution_report(const struct RsSolution *solution,
                                 bool trace,
                                 bool witnesses,
                                 char **out);

// Runs the rationalizability union check against `samples` seeded random
// structures plus the canonical one (the same computation as the
// command-line `check union`). Stores the rendered report in `*report`
// (release with [`rs_string_free`]) and whether the identity held in
// `*holds`.
enum RsStatus rs_check_union(const struct RsInstance *instance,
                             size_t samples,
                             uint64_t seed,
                             char **report,
                             bool *holds);

// Releases a string produced by this library. NULL is ignored.
void rs_string_free(char *text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus
