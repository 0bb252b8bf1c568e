/* sensejam — OFDM WLAN-sensing spoofing and jamming simulator.
 *
 * C interface over the simulation core. All objects are opaque handles owned
 * by the library; functions returning pointers yield NULL on failure, and
 * sj_last_error() / sj_last_status() report the cause for the calling thread.
 */
#ifndef SENSEJAM_H
#define SENSEJAM_H

#include <stddef.h>
#include <stdint.h>

#if defined _WIN32
#define SENSEJAM_API __declspec(dllexport)
#else
#define SENSEJAM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sj_status {
    SJ_OK = 0,
    SJ_ERROR = 1,          /* unspecified failure */
    SJ_ERR_CONFIG = 2,     /* invalid scenario or configuration */
    SJ_ERR_INFEASIBLE = 3, /* jamming strategy cannot be realized */
    SJ_ERR_IO = 4          /* file read/write failure */
} sj_status;

typedef struct sj_scenario sj_scenario;
typedef struct sj_snapshot sj_snapshot;
typedef struct sj_sweep sj_sweep;

SENSEJAM_API const char* sj_version(void);
SENSEJAM_API const char* sj_last_error(void);
SENSEJAM_API sj_status sj_last_status(void);

/* ---- scenario ---------------------------------------------------------- */
SENSEJAM_API sj_scenario* sj_scenario_load_file(const char* path);
SENSEJAM_API sj_scenario* sj_scenario_parse(const char* json_text);
SENSEJAM_API sj_scenario* sj_scenario_default(void);
SENSEJAM_API void sj_scenario_free(sj_scenario* scenario);

/* ---- single sensing measurement instance -------------------------------- */
SENSEJAM_API sj_snapshot* sj_snapshot_run(const sj_scenario* scenario, uint64_t seed);
/* Writes rdm.f32 (+ .json sidecar) and snapshot.json into out_dir. */
SENSEJAM_API sj_status sj_snapshot_export(const sj_snapshot* snapshot, const char* out_dir);
SENSEJAM_API int sj_snapshot_detection_count(const sj_snapshot* snapshot);
SENSEJAM_API const char* sj_snapshot_locked_to(const sj_snapshot* snapshot);
SENSEJAM_API double sj_snapshot_cfo_estimate_hz(const sj_snapshot* snapshot);
SENSEJAM_API int sj_snapshot_jam_infeasible(const sj_snapshot* snapshot);
SENSEJAM_API void sj_snapshot_rdm_dims(const sj_snapshot* snapshot, int* q, int* m);
SENSEJAM_API void sj_snapshot_free(sj_snapshot* snapshot);

/* ---- Monte Carlo sweeps -------------------------------------------------- */
typedef enum sj_sweep_kind {
    SJ_SWEEP_CFO = 0,
    SJ_SWEEP_JSR = 1,
    SJ_SWEEP_MDR_DR = 2,
    SJ_SWEEP_OVERCROWD = 3
} sj_sweep_kind;

typedef struct sj_sweep_options {
    int trials;            /* <= 0: default 500 */
    uint64_t base_seed;
    int threads;           /* <= 0: hardware concurrency */
    int export_trials;     /* nonzero: also write per-trial outcomes */
    const char* spacing;   /* "312k" or "78k"; CFO sweep only, NULL: 78k */
} sj_sweep_options;

SENSEJAM_API sj_sweep* sj_sweep_run(const sj_scenario* scenario, sj_sweep_kind kind,
                                    const sj_sweep_options* options);
/* Writes metrics.jsonl, a plot-ready CSV and optional trials.jsonl. */
SENSEJAM_API sj_status sj_sweep_export(const sj_sweep* sweep, const char* out_dir);
SENSEJAM_API int sj_sweep_point_count(const sj_sweep* sweep);

typedef struct sj_point_metrics {
    double x;
    char series[32];
    int trials;
    double pd_real, pd_real_lo, pd_real_hi;
    double pd_artificial, pd_artificial_lo, pd_artificial_hi;
    double mdr_real;
    double dr_artificial;
    double mean_detection_count;
} sj_point_metrics;

SENSEJAM_API sj_status sj_sweep_point(const sj_sweep* sweep, int index, sj_point_metrics* out);
SENSEJAM_API void sj_sweep_free(sj_sweep* sweep);

#ifdef __cplusplus
}
#endif

#endif /* SENSEJAM_H */
