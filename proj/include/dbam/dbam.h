/*
 * Copyright 2026 The dbamsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DBAM_DBAM_H_
#define DBAM_DBAM_H_

/*
 * C interface to the D-BAM search engine.
 *
 * All objects are opaque handles created by a dbam_*_create / _load / _build
 * call and released with the matching _destroy. Every fallible function
 * returns a dbam_status; on failure dbam_last_error() returns a message for
 * the calling thread, valid until that thread's next API call. Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with dbam_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DBAM_BUILDING_LIBRARY)
#    define DBAM_API __declspec(dllexport)
#  else
#    define DBAM_API __declspec(dllimport)
#  endif
#else
#  define DBAM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

#define DBAM_ABI_VERSION 1

typedef enum dbam_status {
  DBAM_OK = 0,
  DBAM_ERR_INVALID_ARGUMENT = 1,
  DBAM_ERR_CONFIG = 2,
  DBAM_ERR_PARSE = 3,
  DBAM_ERR_IO = 4,
  DBAM_ERR_CAPACITY = 5,
  DBAM_ERR_MISMATCH = 6,
  DBAM_ERR_EMPTY_SPECTRUM = 7,
  DBAM_ERR_INTERNAL = 8
} dbam_status;

typedef struct dbam_config dbam_config;
typedef struct dbam_spectra dbam_spectra;
typedef struct dbam_library dbam_library;
typedef struct dbam_results dbam_results;
typedef struct dbam_sweep_result dbam_sweep_result;

DBAM_API int dbam_abi_version(void);
DBAM_API const char* dbam_status_string(dbam_status status);
DBAM_API const char* dbam_last_error(void);
DBAM_API void dbam_string_free(char* s);

/* ---- configuration ------------------------------------------------------ */

/* Default configuration. */
DBAM_API dbam_status dbam_config_create(dbam_config** out);
/* Strict JSON parse; unknown keys are rejected. */
DBAM_API dbam_status dbam_config_from_json(const char* json, dbam_config** out);
DBAM_API dbam_status dbam_config_to_json(const dbam_config* cfg, char** out);
DBAM_API void dbam_config_destroy(dbam_config* cfg);

/* ---- spectra ------------------------------------------------------------ */

/* Parses and preprocesses an MGF file. Spectra with no surviving peaks are
 * skipped and counted in *skipped (may be NULL). */
DBAM_API dbam_status dbam_spectra_load_mgf(const dbam_config* cfg,
                                           const char* path,
                                           dbam_spectra** out,
                                           size_t* skipped);
/* Synthetic references or perturbed queries from the config's synth block. */
DBAM_API dbam_status dbam_spectra_synth_references(const dbam_config* cfg,
                                                   dbam_spectra** out);
DBAM_API dbam_status dbam_spectra_synth_queries(const dbam_config* cfg,
                                                dbam_spectra** out);
DBAM_API size_t dbam_spectra_count(const dbam_spectra* s);
/* JSON dump of the binned spectra, one object per spectrum. */
DBAM_API dbam_status dbam_spectra_to_json(const dbam_spectra* s, char** out);
DBAM_API void dbam_spectra_destroy(dbam_spectra* s);

/* ---- library ------------------------------------------------------------ */

typedef struct dbam_library_info {
  size_t references;
  uint32_t dimension;
  uint32_t pf;
  uint32_t num_ids;
  uint32_t num_levels;
  uint64_t seed;
  int has_raw;
} dbam_library_info;

typedef struct dbam_layout_info {
  size_t folds_per_hv;
  uint64_t strings_used;
  uint64_t strings_available;
} dbam_layout_info;

/* Encodes and packs with the config's encoder parameters and dbam.pf. */
DBAM_API dbam_status dbam_library_build(const dbam_config* cfg,
                                        const dbam_spectra* spectra,
                                        int keep_raw, dbam_library** out);
/* raw_path may be NULL or empty to skip the hypervector sidecar. */
DBAM_API dbam_status dbam_library_save(const dbam_library* lib,
                                       const char* path, const char* raw_path);
DBAM_API dbam_status dbam_library_load(const char* path, const char* raw_path,
                                       dbam_library** out);
DBAM_API dbam_status dbam_library_get_info(const dbam_library* lib,
                                           dbam_library_info* out);
/* Places the library on the config's array geometry. Fails with
 * DBAM_ERR_CAPACITY when it does not fit; *out is filled either way. */
DBAM_API dbam_status dbam_library_layout(const dbam_library* lib,
                                         const dbam_config* cfg,
                                         dbam_layout_info* out);
DBAM_API void dbam_library_destroy(dbam_library* lib);

/* ---- search ------------------------------------------------------------- */

typedef struct dbam_hit {
  const char* reference_id; /* owned by the results handle */
  uint64_t score;
  int64_t oracle_similarity; /* -1 when the oracle was not run */
} dbam_hit;

typedef struct dbam_counters {
  uint64_t sensing_reads;
  uint64_t wordline_activations;
  uint64_t subsets_evaluated;
} dbam_counters;

/* Scores every query against the library. The library's encoder parameters
 * must match the config (dimension, seed, pf). With oracle != 0 the library
 * must carry raw hypervectors. */
DBAM_API dbam_status dbam_search(const dbam_config* cfg,
                                 const dbam_library* lib,
                                 const dbam_spectra* queries, int oracle,
                                 dbam_results** out);
DBAM_API size_t dbam_results_query_count(const dbam_results* r);
DBAM_API const char* dbam_results_query_id(const dbam_results* r, size_t q);
DBAM_API size_t dbam_results_hit_count(const dbam_results* r, size_t q);
DBAM_API dbam_status dbam_results_get_hit(const dbam_results* r, size_t q,
                                          size_t rank, dbam_hit* out);
DBAM_API dbam_status dbam_results_get_counters(const dbam_results* r, size_t q,
                                               dbam_counters* out);
/* *out = 1 when the top-ranked hit equals the oracle's top-ranked reference.
 * Fails unless the search ran with the oracle. */
DBAM_API dbam_status dbam_results_oracle_agrees(const dbam_results* r, size_t q,
                                                int* out);
DBAM_API dbam_status dbam_results_write_csv(const dbam_results* r,
                                            const char* path);
DBAM_API dbam_status dbam_results_write_json(const dbam_results* r,
                                             const char* path);
DBAM_API void dbam_results_destroy(dbam_results* r);

/* ---- sweep -------------------------------------------------------------- */

typedef struct dbam_sweep_row {
  double alpha;
  uint32_t m;
  uint32_t pf;
  double recall_at_1;
  double recall_at_k;
  uint64_t identification_count;
  uint64_t total_queries;
  uint64_t dbam_reads;
  uint64_t mlc_reads;
  double read_ratio;
  double speedup;
} dbam_sweep_row;

/* Runs the config's sweep grid on the synthetic benchmark (one fresh
 * benchmark per trial), or on the MGF files in paths.mgf / paths.queries
 * when no synth block is configured. */
DBAM_API dbam_status dbam_sweep_run(const dbam_config* cfg,
                                    dbam_sweep_result** out);
DBAM_API size_t dbam_sweep_row_count(const dbam_sweep_result* s);
DBAM_API dbam_status dbam_sweep_get_row(const dbam_sweep_result* s, size_t i,
                                        dbam_sweep_row* out);
DBAM_API dbam_status dbam_sweep_write_csv(const dbam_sweep_result* s,
                                          const char* path);
DBAM_API dbam_status dbam_sweep_write_heatmap(const dbam_sweep_result* s,
                                              const char* path);
DBAM_API void dbam_sweep_destroy(dbam_sweep_result* s);

/* ---- read-operation model ------------------------------------------------ */

typedef struct dbam_bench_report {
  uint32_t dimension;
  uint32_t pf;
  uint32_t m;
  dbam_counters dbam;      /* per reference */
  dbam_counters baseline;  /* per reference, conventional MLC read-out */
  double measured_ratio;   /* baseline reads / D-BAM reads */
  double predicted_speedup;
  uint64_t references;
  uint64_t parallel_references;
  double dbam_latency_s;
  double dbam_energy_j;
  double baseline_latency_s;
  double baseline_energy_j;
  double z_scale_k;
} dbam_bench_report;

/* Read counts and cost estimates for `references` stored vectors under the
 * config's dimension, pf, m, geometry and cost parameters. */
DBAM_API dbam_status dbam_bench(const dbam_config* cfg, uint64_t references,
                                dbam_bench_report* out);

DBAM_API double dbam_speedup(uint32_t m, uint32_t pf);

#ifdef __cplusplus
}
#endif

#endif /* DBAM_DBAM_H_ */
