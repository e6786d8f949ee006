/* Copyright 2026 trajkit contributors
 *
 * Licensed under the Apache License, Version 2.0 <LICENSE or
 * https://www.apache.org/licenses/LICENSE-2.0>. This file may not be
 * copied, modified, or distributed except according to those terms.
 */

/* C interface to the trajkit engine. The engine handle wraps one pipeline
 * configuration; commands read the configured input files and write CSV/JSON
 * result tables. Status codes double as the CLI exit codes. All handle
 * functions are thread-compatible: distinct handles may be used from
 * distinct threads, a single handle must not be shared concurrently.
 */

#ifndef TRAJKIT_H
#define TRAJKIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tk_status {
  TK_OK = 0,
  TK_ERR_USAGE = 1,         /* bad arguments to an API call */
  TK_ERR_MISSING_INPUT = 2, /* a configured input file does not exist */
  TK_ERR_VALIDATION = 3,    /* inputs parsed but violate the data contract */
  TK_ERR_INTERNAL = 4       /* invariant breach; report a bug */
} tk_status;

typedef struct tk_engine tk_engine;

const char* tk_version(void);

/* Engine lifecycle. A fresh engine carries the built-in default
 * configuration. */
tk_engine* tk_engine_new(void);
void tk_engine_free(tk_engine* engine);

/* Replace the configuration from a JSON file. */
tk_status tk_engine_load_config(tk_engine* engine, const char* path);

/* Override a single field by dotted key, e.g. "movement.split_deg". */
tk_status tk_engine_set(tk_engine* engine, const char* key, const char* value);

/* Apply TRAJKIT_* environment overrides on top of the current config. */
tk_status tk_engine_apply_env(tk_engine* engine);

/* Run "simulate", "features", "stats", "classify", "importance" or
 * "report". Outputs land in the configured output directory. */
tk_status tk_engine_run(tk_engine* engine, const char* command);

/* Message for the last failing call on this engine; empty string if the
 * last call succeeded. Owned by the engine. */
const char* tk_engine_error(const tk_engine* engine);

/* Hash of the effective configuration, as stamped into output files.
 * Owned by the engine; stable until the next configuration change. */
const char* tk_engine_config_hash(tk_engine* engine);

/* Current configuration serialized as JSON. Owned by the engine; valid
 * until the next call on the same engine. */
const char* tk_engine_config_json(tk_engine* engine);

/* ---- stateless numeric entry points ---------------------------------- */

/* SampEn(m, r, N) with r = r_factor * std(series). *is_defined is 0 when
 * the series is too short or has no template matches (then *value is NaN). */
tk_status tk_sample_entropy(const double* series, size_t n, int m,
                            double r_factor, double* value, int* is_defined);

/* Heavy-tailed location/scale fit of positive samples. */
tk_status tk_levy_fit(const double* samples, size_t n, double* mu, double* c,
                      double* log_likelihood);

/* Two-sided rank-sum test; *exact is 1 when the enumeration path was used. */
tk_status tk_wilcoxon_rank_sum(const double* a, size_t n_a, const double* b,
                               size_t n_b, double* statistic, double* z,
                               double* p_two_sided, int* exact);

/* 95% normal-approximation half-width for a proportion. */
tk_status tk_wald_ci_halfwidth(double p_hat, size_t n, double* halfwidth);

/* Heading deviation at (x2, y2), degrees in [0, 180]. */
tk_status tk_direction_change_angle(double x1, double y1, double x2, double y2,
                                    double x3, double y3, double* degrees);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TRAJKIT_H */
