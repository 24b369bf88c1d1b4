/* Pano 360-degree video streaming simulator - C API.
 *
 * All functions return pano_status; PANO_OK is 0. On failure the thread-local
 * message from pano_last_error() describes the problem. Objects returned
 * through out-parameters are owned by the caller and released with the
 * matching *_free function.
 */
#ifndef PANO_PANO_H_
#define PANO_PANO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PANO_API __declspec(dllexport)
#else
#define PANO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pano_status {
  PANO_OK = 0,
  PANO_ERR_IO = 1,
  PANO_ERR_PARSE = 2,
  PANO_ERR_INVARIANT = 3,
  PANO_ERR_INVALID_ARG = 4,
  PANO_ERR_INTERNAL = 5,
} pano_status;

PANO_API const char* pano_status_name(pano_status status);
PANO_API const char* pano_last_error(void);
PANO_API const char* pano_version(void);

typedef struct pano_video pano_video;
typedef struct pano_viewpoint_trace pano_viewpoint_trace;
typedef struct pano_network_trace pano_network_trace;
typedef struct pano_jnd_model pano_jnd_model;
typedef struct pano_tiling pano_tiling;
typedef struct pano_manifest pano_manifest;
typedef struct pano_session_result pano_session_result;

/* ---- synthetic scenes ---- */

typedef struct pano_scene_options {
  const char* archetype;      /* tracked-object | night-scene | mixed-dof */
  double duration_s;          /* <= 0 keeps the default (30 s) */
  double base_rate_bps;       /* <= 0 keeps the default */
  double base_error;          /* <= 0 keeps the default */
  double object_speed_yaw;    /* deg/s; NAN/unset via pano_scene_options_init */
  double track_fraction;      /* < 0 keeps the default */
  double network_mean_bps;    /* <= 0 keeps the default */
} pano_scene_options;

PANO_API void pano_scene_options_init(pano_scene_options* opts);

PANO_API pano_status pano_video_generate(const pano_scene_options* opts, uint64_t seed,
                                         pano_video** out);
PANO_API pano_status pano_viewpoint_generate(const pano_scene_options* opts, uint64_t seed,
                                             pano_viewpoint_trace** out);
PANO_API pano_status pano_network_generate(const pano_scene_options* opts, uint64_t seed,
                                           pano_network_trace** out);

/* ---- loading and saving ---- */

PANO_API pano_status pano_video_load(const char* csv_path, pano_video** out);
PANO_API pano_status pano_video_save(const pano_video* video, const char* csv_path);
PANO_API void pano_video_free(pano_video* video);
PANO_API int pano_video_num_chunks(const pano_video* video);

PANO_API pano_status pano_viewpoint_load(const char* csv_path, pano_viewpoint_trace** out);
PANO_API pano_status pano_viewpoint_save(const pano_viewpoint_trace* trace, const char* csv_path);
PANO_API void pano_viewpoint_free(pano_viewpoint_trace* trace);

PANO_API pano_status pano_network_load(const char* csv_path, pano_network_trace** out);
PANO_API pano_status pano_network_save(const pano_network_trace* trace, const char* csv_path);
PANO_API void pano_network_free(pano_network_trace* trace);

PANO_API pano_status pano_jnd_default(pano_jnd_model** out);
PANO_API pano_status pano_jnd_load(const char* config_path, pano_jnd_model** out);
PANO_API void pano_jnd_free(pano_jnd_model* model);

/* ---- offline preparation ---- */

/* Efficiency scores averaged over the history traces, grouped into n_tiles
 * rectangles (static tiling), and a manifest with an n-representative
 * lookup table. */
PANO_API pano_status pano_prepare(const pano_video* video,
                                  const pano_viewpoint_trace* const* traces, size_t num_traces,
                                  const pano_jnd_model* jnd, int n_tiles, int table_n,
                                  pano_tiling** out_tiling, pano_manifest** out_manifest);

PANO_API pano_status pano_tiling_save_csv(const pano_tiling* tiling, const char* path);
PANO_API int pano_tiling_num_tiles(const pano_tiling* tiling);
PANO_API void pano_tiling_free(pano_tiling* tiling);

PANO_API pano_status pano_manifest_save(const pano_manifest* manifest, const char* path);
PANO_API pano_status pano_manifest_load(const char* path, pano_manifest** out);
PANO_API pano_status pano_manifest_dump_json(const pano_manifest* manifest, const char* path);
PANO_API size_t pano_manifest_size_bytes(const pano_manifest* manifest);
PANO_API size_t pano_manifest_table_bytes(const pano_manifest* manifest);
PANO_API void pano_manifest_free(pano_manifest* manifest);

/* ---- simulation ---- */

typedef enum pano_scheme {
  PANO_SCHEME_PANO = 0,
  PANO_SCHEME_VIEWPORT_UNIFORM = 1,
  PANO_SCHEME_WHOLE_SPHERE = 2,
} pano_scheme;

typedef struct pano_session_options {
  pano_scheme scheme;
  double target_buffer_s;  /* <= 0 keeps the default (2 s) */
  uint64_t seed;
} pano_session_options;

PANO_API void pano_session_options_init(pano_session_options* opts);

/* manifest may be NULL for the baseline schemes. */
PANO_API pano_status pano_run_session(const pano_video* video,
                                      const pano_viewpoint_trace* viewpoint,
                                      const pano_network_trace* network,
                                      const pano_manifest* manifest, const pano_jnd_model* jnd,
                                      const pano_session_options* opts,
                                      pano_session_result** out);

PANO_API double pano_session_mean_pspnr_db(const pano_session_result* r);
PANO_API double pano_session_sphere_pspnr_db(const pano_session_result* r);
PANO_API double pano_session_buffering_ratio(const pano_session_result* r);
PANO_API double pano_session_mean_bandwidth_bps(const pano_session_result* r);
PANO_API double pano_session_stall_s(const pano_session_result* r);
PANO_API int pano_session_mos(const pano_session_result* r);
PANO_API int pano_session_aborted(const pano_session_result* r);
PANO_API void pano_session_result_free(pano_session_result* r);

/* Appends one row per (scheme, session); writes results.csv and a decision
 * log per session when decision_log_dir is non-NULL. */
PANO_API pano_status pano_simulate_matrix(const pano_video* video,
                                          const pano_viewpoint_trace* const* viewpoints,
                                          size_t num_viewpoints,
                                          const pano_network_trace* const* networks,
                                          size_t num_networks, const pano_manifest* manifest,
                                          const pano_jnd_model* jnd,
                                          const pano_scheme* schemes, size_t num_schemes,
                                          const pano_session_options* opts, int workers,
                                          const char* results_csv_path,
                                          const char* decision_log_dir);

/* Aggregates results.csv into summary.csv. */
PANO_API pano_status pano_report(const char* results_csv_path, const char* summary_csv_path);

/* Full-link summaries plus matched-quality bandwidth deltas (bisecting each
 * scheme's link cap down to the weakest scheme's PSPNR). Writes one CSV. */
PANO_API pano_status pano_compare(const pano_video* video,
                                  const pano_viewpoint_trace* const* viewpoints,
                                  size_t num_viewpoints,
                                  const pano_network_trace* const* networks, size_t num_networks,
                                  const pano_manifest* manifest, const pano_jnd_model* jnd,
                                  const pano_scheme* schemes, size_t num_schemes,
                                  const pano_session_options* opts, const char* report_csv_path);

#ifdef __cplusplus
}
#endif

#endif /* PANO_PANO_H_ */
