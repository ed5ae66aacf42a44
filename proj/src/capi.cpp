//
// Copyright 2026 The Privml Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "privml.h"

#include <limits>
#include <string>

#include "privml/classifier.hpp"
#include "privml/dataset.hpp"
#include "privml/dp.hpp"
#include "privml/harness.hpp"

namespace {

thread_local std::string g_last_error = "";

privml_status fail(privml_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Runs the body, translating C++ failures into status codes.
template <typename Fn>
privml_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const privml::BudgetExhaustedError& e) {
    return fail(PRIVML_ERR_BUDGET_EXHAUSTED, e.what());
  } catch (const privml::ConfigError& e) {
    return fail(PRIVML_ERR_PARSE, e.what());
  } catch (const privml::ParseError& e) {
    return fail(PRIVML_ERR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PRIVML_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(PRIVML_ERR_IO, e.what());
  } catch (...) {
    return fail(PRIVML_ERR_INTERNAL, "unknown failure");
  }
}

}  // namespace

struct privml_config {
  privml::ExperimentConfig cfg;
};

struct privml_dataset {
  privml::SparseDataset data;
};

struct privml_model {
  privml::NaiveBayesModel model;
};

extern "C" {

const char* privml_version(void) { return "0.1.0"; }

const char* privml_last_error(void) { return g_last_error.c_str(); }

privml_status privml_config_load(const char* path, privml_config** out) {
  if (!path || !out) return fail(PRIVML_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto* handle = new privml_config{privml::ExperimentConfig::from_file(path)};
    *out = handle;
    return PRIVML_OK;
  });
}

privml_status privml_config_create(privml_config** out) {
  if (!out) return fail(PRIVML_ERR_INVALID_ARGUMENT, "null argument");
  *out = new privml_config{};
  return PRIVML_OK;
}

privml_status privml_config_set(privml_config* cfg, const char* key,
                                const char* value) {
  if (!cfg || !key || !value) {
    return fail(PRIVML_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    cfg->cfg.set(key, value);
    return PRIVML_OK;
  });
}

privml_status privml_config_validate(const privml_config* cfg, const char* kind) {
  if (!cfg || !kind) return fail(PRIVML_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    cfg->cfg.validate(kind);
    return PRIVML_OK;
  });
}

void privml_config_free(privml_config* cfg) { delete cfg; }

privml_status privml_dataset_load(const char* path, privml_dataset** out) {
  if (!path || !out) return fail(PRIVML_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto* handle = new privml_dataset{privml::load_sparse(path)};
    *out = handle;
    return PRIVML_OK;
  });
}

privml_status privml_dataset_save(const privml_dataset* d, const char* path) {
  if (!d || !path) return fail(PRIVML_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    privml::save_sparse(d->data, path);
    return PRIVML_OK;
  });
}

privml_status privml_dataset_synthesize(uint64_t num_tuples,
                                        uint64_t num_features,
                                        uint64_t num_predictive,
                                        double flip_prob, uint64_t max_ones,
                                        uint64_t seed, privml_dataset** out) {
  if (!out) return fail(PRIVML_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto* handle = new privml_dataset{privml::generate_synthetic(
        num_tuples, num_features, num_predictive, flip_prob, max_ones, seed)};
    *out = handle;
    return PRIVML_OK;
  });
}

size_t privml_dataset_num_tuples(const privml_dataset* d) {
  return d ? d->data.size() : 0;
}

size_t privml_dataset_num_features(const privml_dataset* d) {
  return d ? d->data.num_features : 0;
}

size_t privml_dataset_max_ones(const privml_dataset* d) {
  return d ? d->data.max_ones_per_tuple : 0;
}

void privml_dataset_free(privml_dataset* d) { delete d; }

privml_status privml_model_train(const privml_dataset* d, double epsilon,
                                 double smoothing, uint64_t seed,
                                 privml_model** out) {
  if (!d || !out) return fail(PRIVML_ERR_INVALID_ARGUMENT, "null argument");
  if (epsilon < 0.0) {
    return fail(PRIVML_ERR_INVALID_ARGUMENT, "epsilon must be non-negative");
  }
  return guarded([&] {
    privml::PrivacyBudget budget(
        epsilon > 0.0 ? epsilon : std::numeric_limits<double>::infinity());
    privml::Rng rng(privml::derive_seed(seed, 0x7a11));
    auto* handle = new privml_model{
        privml::nb_train(d->data, epsilon, budget, rng, smoothing)};
    *out = handle;
    return PRIVML_OK;
  });
}

privml_status privml_model_save(const privml_model* m, const char* path) {
  if (!m || !path) return fail(PRIVML_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    privml::nb_save(m->model, path);
    return PRIVML_OK;
  });
}

privml_status privml_model_load(const char* path, privml_model** out) {
  if (!path || !out) return fail(PRIVML_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto* handle = new privml_model{privml::nb_load(path)};
    *out = handle;
    return PRIVML_OK;
  });
}

privml_status privml_model_accuracy(const privml_model* m,
                                    const privml_dataset* d, double* out) {
  if (!m || !d || !out) return fail(PRIVML_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = privml::evaluate_accuracy(m->model, d->data);
    return PRIVML_OK;
  });
}

void privml_model_free(privml_model* m) { delete m; }

privml_status privml_run_selection(const privml_config* cfg, const char* out_dir) {
  if (!cfg || !out_dir) return fail(PRIVML_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    privml::emit_outputs(privml::run_selection_experiment(cfg->cfg), out_dir);
    return PRIVML_OK;
  });
}

privml_status privml_run_roc(const privml_config* cfg, const char* out_dir) {
  if (!cfg || !out_dir) return fail(PRIVML_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    privml::emit_outputs(privml::run_roc_experiment(cfg->cfg), out_dir);
    return PRIVML_OK;
  });
}

privml_status privml_run_sweep(const privml_config* cfg, const char* out_dir) {
  if (!cfg || !out_dir) return fail(PRIVML_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    privml::emit_outputs(privml::run_sweep(cfg->cfg), out_dir);
    return PRIVML_OK;
  });
}

}  // extern "C"
