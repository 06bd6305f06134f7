/* C API for the skill-discovery training library.
 *
 * All entry points return a discs_status code; DISCS_OK is zero. On failure,
 * discs_last_error() returns a thread-local message describing what went
 * wrong. Handles are opaque and must be released with the matching
 * *_destroy call.
 */
#ifndef DISCS_CAPI_H
#define DISCS_CAPI_H

#include <stdint.h>

#if defined(_WIN32)
#define DISCS_API __declspec(dllexport)
#else
#define DISCS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum discs_status {
  DISCS_OK = 0,
  DISCS_ERR_INVALID_ARG = 1,
  DISCS_ERR_CONFIG = 2,
  DISCS_ERR_IO = 3,
  DISCS_ERR_NUMERIC = 4,
  DISCS_ERR_INTERNAL = 5
} discs_status;

typedef struct discs_config discs_config;
typedef struct discs_trainer discs_trainer;

DISCS_API const char* discs_version(void);

/* Thread-local message for the most recent failure on this thread. */
DISCS_API const char* discs_last_error(void);

/* --- Configuration ------------------------------------------------------ */

DISCS_API discs_status discs_config_create(discs_config** out);
DISCS_API discs_status discs_config_load_file(discs_config* cfg, const char* path);
DISCS_API discs_status discs_config_set(discs_config* cfg, const char* key,
                                        const char* value);
/* Canonical `key = value` text; caller frees with discs_string_free. */
DISCS_API discs_status discs_config_serialize(const discs_config* cfg, char** out_text);
DISCS_API void discs_config_destroy(discs_config* cfg);

DISCS_API void discs_string_free(char* text);

/* --- Training ----------------------------------------------------------- */

/* out_dir may be NULL or empty to suppress artifact files. */
DISCS_API discs_status discs_trainer_create(const discs_config* cfg, const char* out_dir,
                                            discs_trainer** out);
DISCS_API discs_status discs_trainer_resume(const char* checkpoint_path,
                                            const char* out_dir, discs_trainer** out);
/* Trains to the configured total_steps (override first with
 * discs_trainer_set_total_steps). Writes curves, heatmaps, and the final
 * checkpoint into out_dir. */
DISCS_API discs_status discs_trainer_run(discs_trainer* trainer);
DISCS_API discs_status discs_trainer_set_total_steps(discs_trainer* trainer,
                                                     int64_t total_steps);
DISCS_API discs_status discs_trainer_save(const discs_trainer* trainer, const char* path);
DISCS_API int64_t discs_trainer_step(const discs_trainer* trainer);
DISCS_API void discs_trainer_destroy(discs_trainer* trainer);

/* --- Evaluation and self-tests ------------------------------------------ */

/* Deterministic skill rollouts from a checkpoint. n_skills <= 0 uses the
 * config default. Reports the occupied-cells count through out_occupied
 * when non-NULL. */
DISCS_API discs_status discs_evaluate(const char* checkpoint_path, int n_skills,
                                      const char* out_dir, int* out_occupied);

/* Runs the property suites, printing one line per suite to stdout.
 * Returns DISCS_OK only if every suite passes. */
DISCS_API discs_status discs_selftest(void);

#ifdef __cplusplus
}
#endif

#endif /* DISCS_CAPI_H */
