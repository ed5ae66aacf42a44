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

// Command-line driver for the privml workbench. Everything goes through the
// public C API in privml.h; this file owns only argument parsing and output.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "privml.h"

namespace {

// Exit codes: 0 success, 2 configuration problem, 3 budget exhausted.
int exit_code_for(privml_status status) {
  switch (status) {
    case PRIVML_OK: return 0;
    case PRIVML_ERR_BUDGET_EXHAUSTED: return 3;
    case PRIVML_ERR_INTERNAL: return 1;
    default: return 2;
  }
}

int report(privml_status status) {
  if (status != PRIVML_OK) {
    std::fprintf(stderr, "privml: %s\n", privml_last_error());
  }
  return exit_code_for(status);
}

struct ConfigHandle {
  privml_config* ptr = nullptr;
  ~ConfigHandle() { privml_config_free(ptr); }
};

struct DatasetHandle {
  privml_dataset* ptr = nullptr;
  ~DatasetHandle() { privml_dataset_free(ptr); }
};

struct ModelHandle {
  privml_model* ptr = nullptr;
  ~ModelHandle() { privml_model_free(ptr); }
};

privml_status build_config(const std::string& config_path,
                           const std::vector<std::string>& overrides,
                           ConfigHandle& out) {
  privml_status status = config_path.empty()
                             ? privml_config_create(&out.ptr)
                             : privml_config_load(config_path.c_str(), &out.ptr);
  if (status != PRIVML_OK) return status;
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "privml: --set expects key=value, got \"%s\"\n",
                   kv.c_str());
      return PRIVML_ERR_PARSE;
    }
    status = privml_config_set(out.ptr, kv.substr(0, eq).c_str(),
                               kv.substr(eq + 1).c_str());
    if (status != PRIVML_OK) return status;
  }
  return PRIVML_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"privml: differentially private feature selection, Naive Bayes "
               "and ROC-curve workbench"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";

  const auto add_common = [&](CLI::App* cmd, bool needs_out) {
    cmd->add_option("--config", config_path, "experiment config file");
    cmd->add_option("--set", overrides, "override one config key (key=value)");
    if (needs_out) cmd->add_option("--out", out_dir, "output directory");
  };

  auto* validate_cmd =
      app.add_subcommand("validate", "check a config without running it");
  add_common(validate_cmd, false);
  std::string validate_kind = "selection";
  validate_cmd->add_option("--kind", validate_kind,
                           "experiment kind: selection, roc or sweep");

  auto* select_cmd =
      app.add_subcommand("select", "run the private selection + training pipeline");
  add_common(select_cmd, true);

  auto* roc_cmd =
      app.add_subcommand("roc", "run the private ROC evaluation pipeline");
  add_common(roc_cmd, true);

  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  add_common(sweep_cmd, true);

  auto* synth_cmd =
      app.add_subcommand("synth", "write a synthetic sparse dataset");
  std::string synth_out = "synthetic.txt";
  std::uint64_t synth_tuples = 1000, synth_features = 500, synth_predictive = 20;
  std::uint64_t synth_s = 20, synth_seed = 42;
  double synth_flip = 0.2;
  synth_cmd->add_option("--out", synth_out, "output dataset path");
  synth_cmd->add_option("--tuples", synth_tuples, "number of tuples");
  synth_cmd->add_option("--features", synth_features, "number of features");
  synth_cmd->add_option("--predictive", synth_predictive,
                        "number of label-correlated features");
  synth_cmd->add_option("--flip-prob", synth_flip,
                        "label flip probability of predictive features");
  synth_cmd->add_option("--s", synth_s, "max active features per tuple");
  synth_cmd->add_option("--seed", synth_seed, "generator seed");

  auto* train_cmd =
      app.add_subcommand("train", "train a (private) Naive Bayes model");
  std::string train_data, train_model_out = "model.json";
  double train_eps = 0.0, train_smoothing = 1.0;
  std::uint64_t train_seed = 42;
  train_cmd->add_option("--data", train_data, "training dataset")->required();
  train_cmd->add_option("--model", train_model_out, "model output path");
  train_cmd->add_option("--epsilon", train_eps,
                        "privacy budget for training (0 = exact)");
  train_cmd->add_option("--smoothing", train_smoothing, "add-smoothing constant");
  train_cmd->add_option("--seed", train_seed, "noise seed");

  auto* eval_cmd =
      app.add_subcommand("evaluate", "measure model accuracy on a dataset");
  std::string eval_data, eval_model;
  eval_cmd->add_option("--data", eval_data, "evaluation dataset")->required();
  eval_cmd->add_option("--model", eval_model, "model file")->required();

  CLI11_PARSE(app, argc, argv);

  if (validate_cmd->parsed()) {
    ConfigHandle cfg;
    privml_status status = build_config(config_path, overrides, cfg);
    if (status == PRIVML_OK) {
      status = privml_config_validate(cfg.ptr, validate_kind.c_str());
    }
    if (status == PRIVML_OK) std::printf("config ok\n");
    return report(status);
  }

  if (select_cmd->parsed() || roc_cmd->parsed() || sweep_cmd->parsed()) {
    ConfigHandle cfg;
    privml_status status = build_config(config_path, overrides, cfg);
    if (status == PRIVML_OK) {
      if (select_cmd->parsed()) {
        status = privml_run_selection(cfg.ptr, out_dir.c_str());
      } else if (roc_cmd->parsed()) {
        status = privml_run_roc(cfg.ptr, out_dir.c_str());
      } else {
        status = privml_run_sweep(cfg.ptr, out_dir.c_str());
      }
    }
    if (status == PRIVML_OK) {
      std::printf("report written to %s/report.json\n", out_dir.c_str());
    }
    return report(status);
  }

  if (synth_cmd->parsed()) {
    DatasetHandle data;
    privml_status status =
        privml_dataset_synthesize(synth_tuples, synth_features, synth_predictive,
                                  synth_flip, synth_s, synth_seed, &data.ptr);
    if (status == PRIVML_OK) {
      status = privml_dataset_save(data.ptr, synth_out.c_str());
    }
    if (status == PRIVML_OK) {
      std::printf("wrote %llu tuples x %llu features to %s\n",
                  static_cast<unsigned long long>(privml_dataset_num_tuples(data.ptr)),
                  static_cast<unsigned long long>(privml_dataset_num_features(data.ptr)),
                  synth_out.c_str());
    }
    return report(status);
  }

  if (train_cmd->parsed()) {
    DatasetHandle data;
    privml_status status = privml_dataset_load(train_data.c_str(), &data.ptr);
    ModelHandle model;
    if (status == PRIVML_OK) {
      status = privml_model_train(data.ptr, train_eps, train_smoothing,
                                  train_seed, &model.ptr);
    }
    if (status == PRIVML_OK) {
      status = privml_model_save(model.ptr, train_model_out.c_str());
    }
    if (status == PRIVML_OK) {
      std::printf("model written to %s\n", train_model_out.c_str());
    }
    return report(status);
  }

  if (eval_cmd->parsed()) {
    DatasetHandle data;
    privml_status status = privml_dataset_load(eval_data.c_str(), &data.ptr);
    ModelHandle model;
    if (status == PRIVML_OK) {
      status = privml_model_load(eval_model.c_str(), &model.ptr);
    }
    double accuracy = 0.0;
    if (status == PRIVML_OK) {
      status = privml_model_accuracy(model.ptr, data.ptr, &accuracy);
    }
    if (status == PRIVML_OK) std::printf("accuracy %.6f\n", accuracy);
    return report(status);
  }

  return 0;
}
