/* C interface to the precut simulation library.
 *
 * Every function returns a precut_status; on failure a message is available
 * from precut_last_error() until the next call on the same thread. Handles
 * are opaque and must be released with the matching destroy function.
 * Points are passed as packed xyz triples of doubles.
 */
#ifndef PRECUT_PRECUT_H
#define PRECUT_PRECUT_H

#include <stddef.h>
#include <stdint.h>

#if defined(PRECUT_BUILDING_LIBRARY)
#define PRECUT_API __attribute__((visibility("default")))
#else
#define PRECUT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum precut_status {
  PRECUT_OK = 0,
  PRECUT_E_INVALID_ARGUMENT = 1,
  PRECUT_E_DEGENERATE_INPUT = 2,
  PRECUT_E_INSUFFICIENT_DATA = 3,
  PRECUT_E_NO_FREE_SPACE = 4,
  PRECUT_E_SINGULAR = 5,
  PRECUT_E_DOMAIN = 6,
  PRECUT_E_PARSE = 7,
  PRECUT_E_NON_FINITE = 8,
  PRECUT_E_IO = 9,
  PRECUT_E_INTERNAL = 100
} precut_status;

typedef struct precut_config precut_config;
typedef struct precut_scene precut_scene;

PRECUT_API const char* precut_last_error(void);
PRECUT_API const char* precut_status_name(int status);

/* Configuration: namespaced `key = value` settings with published defaults. */
PRECUT_API int precut_config_create(precut_config** out);
PRECUT_API void precut_config_destroy(precut_config* cfg);
PRECUT_API int precut_config_load(precut_config* cfg, const char* path);
PRECUT_API int precut_config_set(precut_config* cfg, const char* key, const char* value);
/* Copies the value (NUL-terminated) into buf when it fits; *needed receives
 * the required size including the terminator. buf may be NULL to query. */
PRECUT_API int precut_config_get(const precut_config* cfg, const char* key, char* buf,
                                 size_t buf_len, size_t* needed);
PRECUT_API int precut_config_key_count(const precut_config* cfg, size_t* count);
PRECUT_API int precut_config_key_name(const precut_config* cfg, size_t index, char* buf,
                                      size_t buf_len, size_t* needed);

/* Scenes. */
PRECUT_API int precut_scene_generate(const precut_config* cfg, uint64_t seed, precut_scene** out);
PRECUT_API int precut_scene_load(const char* path, precut_scene** out);
/* Writes the scene CSV and, for generated scenes, the `<path>.truth` sidecar. */
PRECUT_API int precut_scene_save(const precut_scene* scene, const char* path);
PRECUT_API int precut_scene_counts(const precut_scene* scene, size_t* n_points, size_t* n_stem);
PRECUT_API void precut_scene_destroy(precut_scene* scene);

PRECUT_API int precut_validate_scene(const char* path, size_t* n_points, size_t* n_stem,
                                     size_t* n_other);

typedef struct precut_run_summary {
  int completed;              /* 1 when the loop ran to the configured duration */
  int transitioned;           /* 1 when the bimanual phase was entered */
  int stem_detected;
  double transition_time;     /* NaN without transition */
  double final_roi_dist;
  double final_theta;
  double final_force_along_nc;
  double final_pos_err_orth;
  double final_align_angle;
  size_t visible_at_first_detection;
  size_t visible_at_transition;
  size_t visible_final;
  size_t trace_rows;
} precut_run_summary;

/* Runs the closed loop and writes trace.csv, metrics.txt and scene snapshots
 * into the configured output directory. Output is written even when the run
 * faults; the status then reports the fault. summary may be NULL. */
PRECUT_API int precut_run(const precut_config* cfg, precut_run_summary* summary);

/* Geometry helpers. */
PRECUT_API int precut_fibonacci_lattice(int n, const double center[3], double radius,
                                        double* out_xyz);
PRECUT_API int precut_nearest_lattice_index(int n, const double center[3], double radius,
                                            const double query[3], int* out_index);
/* Index of the candidate maximizing the minimum distance to the obstacles;
 * ties go to the lowest index. */
PRECUT_API int precut_free_space_target(const double* candidates_xyz, size_t n_candidates,
                                        const double* obstacles_xyz, size_t n_obstacles,
                                        size_t* out_index);

#ifdef __cplusplus
}
#endif

#endif /* PRECUT_PRECUT_H */
