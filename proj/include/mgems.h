/*
 * mgems — C API for the adaptive multi-objective microgrid EMS core.
 *
 * All functions return MGEMS_OK (0) on success or a negative status code;
 * mgems_last_error() describes the most recent failure on the calling
 * thread. Objects created through the *_create/_load/_generate functions
 * are owned by the caller and released with the matching *_free function.
 * Handles are opaque; a handle may be used from one thread at a time.
 */

#ifndef MGEMS_H
#define MGEMS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#ifdef MGEMS_BUILD
#define MGEMS_API __declspec(dllexport)
#else
#define MGEMS_API __declspec(dllimport)
#endif
#else
#define MGEMS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mgems_status {
    MGEMS_OK = 0,
    MGEMS_ERROR_INVALID_ARGUMENT = -1,
    MGEMS_ERROR_IO = -2,
    MGEMS_ERROR_PARSE = -3,
    MGEMS_ERROR_RUNTIME = -4
} mgems_status;

typedef struct mgems_config mgems_config;     /* run configuration */
typedef struct mgems_profile mgems_profile;   /* telemetry profile */
typedef struct mgems_baseline mgems_baseline; /* no-optimizer dispatch record */
typedef struct mgems_result mgems_result;     /* optimized-run result + summary */

MGEMS_API const char* mgems_version(void);

/* Message for the most recent error on this thread; empty string if none. */
MGEMS_API const char* mgems_last_error(void);

/* Release a string returned through a char** out-parameter. */
MGEMS_API void mgems_string_free(char* s);

/* --- configuration ------------------------------------------------------ */

MGEMS_API mgems_status mgems_config_create(mgems_config** out);
MGEMS_API mgems_status mgems_config_load(const char* path, mgems_config** out);
MGEMS_API mgems_status mgems_config_set_seed(mgems_config* cfg, uint64_t seed);
MGEMS_API mgems_status mgems_config_set_paced(mgems_config* cfg, int paced);
MGEMS_API void mgems_config_free(mgems_config* cfg);

/* --- telemetry profiles -------------------------------------------------- */

MGEMS_API mgems_status mgems_profile_load(const char* path, mgems_profile** out);

/* shape: "day", "cloudy" or "night". */
MGEMS_API mgems_status mgems_profile_synth(const char* shape, long ticks, double tick_seconds,
                                           uint64_t seed, mgems_profile** out);
MGEMS_API mgems_status mgems_profile_save(const mgems_profile* profile, const char* path);
MGEMS_API long mgems_profile_rows(const mgems_profile* profile);

/* Loader warnings (sanity findings) as one newline-separated string. */
MGEMS_API mgems_status mgems_profile_warnings(const mgems_profile* profile, char** out);
MGEMS_API void mgems_profile_free(mgems_profile* profile);

/* --- baseline arm -------------------------------------------------------- */

MGEMS_API mgems_status mgems_baseline_generate(const mgems_profile* profile,
                                               const mgems_config* cfg, mgems_baseline** out);
MGEMS_API mgems_status mgems_baseline_load(const char* path, mgems_baseline** out);
MGEMS_API mgems_status mgems_baseline_save(const mgems_baseline* baseline, const char* path);
MGEMS_API void mgems_baseline_free(mgems_baseline* baseline);

/* --- optimized runs ------------------------------------------------------ */

/*
 * Replay the profile through the optimizing EMS against the given baseline.
 * Writes report.csv, fronts.csv, indicators.csv and summary.json into
 * out_dir (created if needed). out_dir may be NULL to skip file output.
 */
MGEMS_API mgems_status mgems_run(const mgems_profile* profile, const mgems_baseline* baseline,
                                 const mgems_config* cfg, const char* out_dir,
                                 mgems_result** out);

/* Generate the baseline and run the optimized arm against it. */
MGEMS_API mgems_status mgems_compare(const mgems_profile* profile, const mgems_config* cfg,
                                     const char* out_dir, mgems_result** out);

MGEMS_API mgems_status mgems_result_summary_json(const mgems_result* result, char** out_json);
MGEMS_API long mgems_result_ticks(const mgems_result* result);
MGEMS_API void mgems_result_free(mgems_result* result);

/* --- indicators ---------------------------------------------------------- */

/*
 * Recompute per-tick quality indicators from a front-dump CSV. Writes a CSV
 * when out_csv is non-NULL and returns a JSON summary of the means.
 */
MGEMS_API mgems_status mgems_front_indicators(const char* front_csv, const char* out_csv,
                                              uint64_t seed, char** out_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MGEMS_H */
