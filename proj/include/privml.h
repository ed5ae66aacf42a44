/*
 * Copyright 2026 The Privml Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the privml differential-privacy workbench. All state lives
 * behind opaque handles; every call returns a status code and the last error
 * message is kept per thread. Handles are single-thread objects; distinct
 * handles may be used from distinct threads freely.
 */

#ifndef PRIVML_H
#define PRIVML_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum privml_status {
  PRIVML_OK = 0,
  PRIVML_ERR_INVALID_ARGUMENT = 1,
  PRIVML_ERR_PARSE = 2,
  PRIVML_ERR_IO = 3,
  PRIVML_ERR_BUDGET_EXHAUSTED = 4,
  PRIVML_ERR_INTERNAL = 5
} privml_status;

/* Library version string, e.g. "0.1.0". */
const char* privml_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* privml_last_error(void);

/* ----- experiment configuration ----- */

typedef struct privml_config privml_config;

/* Parses a "key = value" config file. */
privml_status privml_config_load(const char* path, privml_config** out);

/* Starts from an empty configuration. */
privml_status privml_config_create(privml_config** out);

/* Sets one key, overriding the file value. */
privml_status privml_config_set(privml_config* cfg, const char* key,
                                const char* value);

/* Full validation for an experiment kind: "selection", "roc" or "sweep". */
privml_status privml_config_validate(const privml_config* cfg,
                                     const char* kind);

void privml_config_free(privml_config* cfg);

/* ----- datasets ----- */

typedef struct privml_dataset privml_dataset;

/* Reads the sparse text format ("<label> <idx>:1 ...", optional
 * "#features N" header). */
privml_status privml_dataset_load(const char* path, privml_dataset** out);

privml_status privml_dataset_save(const privml_dataset* d, const char* path);

/* Label-correlated synthetic data; see the synth CLI subcommand. */
privml_status privml_dataset_synthesize(uint64_t num_tuples,
                                        uint64_t num_features,
                                        uint64_t num_predictive,
                                        double flip_prob, uint64_t max_ones,
                                        uint64_t seed, privml_dataset** out);

size_t privml_dataset_num_tuples(const privml_dataset* d);
size_t privml_dataset_num_features(const privml_dataset* d);
size_t privml_dataset_max_ones(const privml_dataset* d);

void privml_dataset_free(privml_dataset* d);

/* ----- Naive Bayes models ----- */

typedef struct privml_model privml_model;

/* Trains on the whole dataset. epsilon > 0 buys that much differential
 * privacy for the released counts; epsilon of 0 trains exactly. */
privml_status privml_model_train(const privml_dataset* d, double epsilon,
                                 double smoothing, uint64_t seed,
                                 privml_model** out);

privml_status privml_model_save(const privml_model* m, const char* path);
privml_status privml_model_load(const char* path, privml_model** out);

/* Fraction of tuples whose thresholded prediction matches the label. */
privml_status privml_model_accuracy(const privml_model* m,
                                    const privml_dataset* d, double* out);

void privml_model_free(privml_model* m);

/* ----- experiment runners -----
 *
 * Each runs the configured experiment and writes report.json plus CSV/dat
 * tables into out_dir (created when missing).
 */

privml_status privml_run_selection(const privml_config* cfg,
                                   const char* out_dir);
privml_status privml_run_roc(const privml_config* cfg, const char* out_dir);
privml_status privml_run_sweep(const privml_config* cfg, const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PRIVML_H */
