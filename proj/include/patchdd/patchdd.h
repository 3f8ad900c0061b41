/*
 * (C) Copyright 2026 The patchdd authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#ifndef PATCHDD_H
#define PATCHDD_H

#include <stddef.h>
#include <stdint.h>

#if defined(PATCHDD_BUILDING_LIBRARY)
#define PDD_API __attribute__((visibility("default")))
#else
#define PDD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pdd_status {
  PDD_OK = 0,
  PDD_ERR_CONFIG = 1,         /* invalid configuration or arguments */
  PDD_ERR_NOT_CONVERGED = 2,  /* a solver did not reach its tolerance */
  PDD_ERR_IO = 3,
  PDD_ERR_NUMERIC = 4,        /* singular or indefinite system */
  PDD_ERR_INTERNAL = 5
} pdd_status;

typedef struct pdd_config pdd_config;
typedef struct pdd_result pdd_result;

/* Message of the last failed call on this thread; never NULL. */
PDD_API const char* pdd_last_error(void);
PDD_API const char* pdd_version(void);
/* Caps the worker threads used inside a run; n <= 0 restores the default. */
PDD_API void pdd_set_threads(int n);

PDD_API pdd_status pdd_config_load(const char* path, pdd_config** out);
PDD_API pdd_status pdd_config_from_json(const char* text, pdd_config** out);
PDD_API void pdd_config_free(pdd_config* cfg);
PDD_API pdd_status pdd_config_set_seed(pdd_config* cfg, uint64_t seed);
PDD_API pdd_status pdd_config_set_output_dir(pdd_config* cfg, const char* dir);
PDD_API pdd_status pdd_config_set_reference(pdd_config* cfg, const char* path);
/* Resolved configuration as JSON; release with pdd_string_free. */
PDD_API pdd_status pdd_config_to_json(const pdd_config* cfg, char** out);
/* 16 hex digits plus terminator. */
PDD_API pdd_status pdd_config_hash(const pdd_config* cfg, char out[17]);
PDD_API void pdd_string_free(char* s);

/* Runs the iterations and writes the artifacts to the output directory. A
   result is returned (and must be freed) for PDD_OK and PDD_ERR_NOT_CONVERGED. */
PDD_API pdd_status pdd_run(const pdd_config* cfg, pdd_result** out);
PDD_API void pdd_result_free(pdd_result* res);
PDD_API size_t pdd_result_iterations(const pdd_result* res);
PDD_API int pdd_result_converged(const pdd_result* res);
/* Row k (1-based iteration) of the history; NaN error without a reference. */
PDD_API pdd_status pdd_result_row(const pdd_result* res, size_t k, double* rho, double* error);

/* Builds the reference solution; writes reference.json to the output directory. */
PDD_API pdd_status pdd_reference(const pdd_config* cfg, size_t* samples);
/* sweep_json: {"rho": [..., "aitken"], "eps_cv": [...]}; writes sweep.csv. */
PDD_API pdd_status pdd_sweep(const pdd_config* cfg, const char* sweep_json, int jobs);
/* Error indicator of solution a against solution b. */
PDD_API pdd_status pdd_compare(const pdd_config* cfg, const char* a, const char* b, double* error);

#ifdef __cplusplus
}
#endif

#endif /* PATCHDD_H */
