#ifndef RTBBO_RTBBO_H
#define RTBBO_RTBBO_H

#include <stddef.h>
#include <stdint.h>

#if defined(RTBBO_BUILDING_LIBRARY)
#define RTBBO_API __attribute__((visibility("default")))
#else
#define RTBBO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rtbbo_status {
  RTBBO_OK = 0,
  RTBBO_ERR_INVALID_ARGUMENT = 1,
  RTBBO_ERR_CAPACITY = 2,
  RTBBO_ERR_CONFIG = 3,
  RTBBO_ERR_IO = 4,
  RTBBO_ERR_INTERNAL = 5
} rtbbo_status;

/* Message of the last failed call on this thread ("" if none). */
RTBBO_API const char* rtbbo_last_error(void);
RTBBO_API const char* rtbbo_version(void);
/* Releases strings returned through char** out parameters. */
RTBBO_API void rtbbo_string_free(char* s);

/* ---- experiment configuration ---- */

typedef struct rtbbo_config rtbbo_config;

/* Defaults for an env ("synthetic", "wireless") and method name. */
RTBBO_API rtbbo_status rtbbo_config_new(const char* env, const char* method,
                                        rtbbo_config** out);
/* Loads a JSON config file. env/method may be NULL, in which case the file's
 * values (or synthetic / rtbbo_mr) apply; non-NULL arguments take precedence. */
RTBBO_API rtbbo_status rtbbo_config_load(const char* path, const char* env,
                                         const char* method, rtbbo_config** out);
/* Applies the keys of a JSON object on top of the config. */
RTBBO_API rtbbo_status rtbbo_config_merge_json(rtbbo_config* cfg, const char* json);
RTBBO_API rtbbo_status rtbbo_config_to_json(const rtbbo_config* cfg, char** out);
RTBBO_API void rtbbo_config_free(rtbbo_config* cfg);

/* Runs all trials and writes cycles.csv, summary.json, config.json (and
 * snapshots.jsonl for wireless runs with snapshots enabled) into out_dir. */
RTBBO_API rtbbo_status rtbbo_run(const rtbbo_config* cfg, const char* out_dir);
/* Runs every method valid for the configured env, one subdirectory each,
 * plus a combined out_dir/summary.json. */
RTBBO_API rtbbo_status rtbbo_sweep(const rtbbo_config* cfg, const char* out_dir);
/* Text table for the summary.json in dir. */
RTBBO_API rtbbo_status rtbbo_report(const char* dir, char** out);

/* ---- Ising models and solvers ---- */

typedef struct rtbbo_ising rtbbo_ising;

/* couplings: n*n row-major (symmetrized, diagonal ignored) or NULL;
 * fields: n values or NULL. */
RTBBO_API rtbbo_status rtbbo_ising_new(size_t n, const double* couplings,
                                       const double* fields, double offset,
                                       rtbbo_ising** out);
RTBBO_API rtbbo_status rtbbo_ising_load(const char* path, rtbbo_ising** out);
RTBBO_API void rtbbo_ising_free(rtbbo_ising* model);
RTBBO_API size_t rtbbo_ising_size(const rtbbo_ising* model);
/* spins: n values in {-1, +1}. */
RTBBO_API rtbbo_status rtbbo_ising_energy(const rtbbo_ising* model, const int8_t* spins,
                                          size_t n, double* energy);
RTBBO_API rtbbo_status rtbbo_ising_brute_force(const rtbbo_ising* model, int8_t* spins,
                                               size_t n, double* energy);

typedef struct rtbbo_sb_config {
  int32_t steps;
  double a0;
  double c0;  /* <= 0: derived from the model scale */
  double eta; /* <= 0: same as c0 */
  double dt;
  uint64_t seed;
  int32_t restarts;
  double c0_gain;     /* numerator of the derived c0 */
  int32_t field_spin; /* nonzero: fields couple to an extra free spin */
} rtbbo_sb_config;

RTBBO_API void rtbbo_sb_config_default(rtbbo_sb_config* cfg);
RTBBO_API rtbbo_status rtbbo_sb_solve(const rtbbo_ising* model, const rtbbo_sb_config* cfg,
                                      int8_t* spins, size_t n, double* energy);

#ifdef __cplusplus
}
#endif

#endif
