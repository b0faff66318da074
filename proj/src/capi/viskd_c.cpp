/*
 * Copyright (c) 2026 The viskd Authors
 *
 * Licensed under the Apache License, Version 2.0;
 * You may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an 'AS IS' BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "viskd/viskd.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "common/error.hpp"
#include "common/log.hpp"
#include "data/prepared.hpp"
#include "evaluation/report.hpp"
#include "model/checkpoint.hpp"
#include "pipeline/stages.hpp"
#include "training/trainer.hpp"

struct vk_config {
  viskd::pipeline::RunConfig value;
};
struct vk_cohort {
  std::vector<viskd::data::PatientRecord> records;
};
struct vk_dataset {
  viskd::data::PreparedData value;
};
struct vk_model {
  viskd::model::Model value;
};
struct vk_report {
  viskd::eval::MetricsReport value;
};

namespace {

using viskd::Error;
using viskd::ErrorKind;

thread_local std::string g_last_error;

vk_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return VK_ERR_CONFIG;
    case ErrorKind::kData: return VK_ERR_DATA;
    case ErrorKind::kDivergence: return VK_ERR_DIVERGENCE;
    case ErrorKind::kMissingArtifact: return VK_ERR_MISSING_ARTIFACT;
    case ErrorKind::kContract: return VK_ERR_CONTRACT;
    case ErrorKind::kInternal: return VK_ERR_INTERNAL;
  }
  return VK_ERR_INTERNAL;
}

vk_status fail(vk_status s, const std::string& message) {
  g_last_error = message;
  return s;
}

template <class F>
vk_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return VK_OK;
  } catch (const Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(VK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(VK_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define VK_REQUIRE(cond, what) \
  if (!(cond)) return fail(VK_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* vk_last_error(void) { return g_last_error.c_str(); }

const char* vk_version(void) { return "1.0.0"; }

void vk_string_free(char* s) { std::free(s); }

void vk_set_quiet(int quiet) { viskd::log::set_quiet(quiet != 0); }

vk_status vk_config_default(vk_config** out) {
  VK_REQUIRE(out, "vk_config_default: out is NULL");
  return guarded([&] {
    auto c = std::make_unique<vk_config>();
    c->value.resolve();
    *out = c.release();
  });
}

vk_status vk_config_parse(const char* text, const char* source, vk_config** out) {
  VK_REQUIRE(text && out, "vk_config_parse: NULL argument");
  return guarded([&] {
    auto c = std::make_unique<vk_config>();
    c->value = viskd::pipeline::parse_run_config(text, source ? source : "config");
    *out = c.release();
  });
}

vk_status vk_config_load(const char* path, vk_config** out) {
  VK_REQUIRE(path && out, "vk_config_load: NULL argument");
  return guarded([&] {
    auto c = std::make_unique<vk_config>();
    c->value = viskd::pipeline::load_run_config(path);
    *out = c.release();
  });
}

vk_status vk_config_set_seed(vk_config* config, uint64_t seed) {
  VK_REQUIRE(config, "vk_config_set_seed: config is NULL");
  return guarded([&] {
    viskd::pipeline::RunConfig c = config->value;
    c.seed = seed;
    c.resolve();
    config->value = c;
  });
}

vk_status vk_config_set_output_dir(vk_config* config, const char* dir) {
  VK_REQUIRE(config && dir, "vk_config_set_output_dir: NULL argument");
  return guarded([&] {
    viskd::pipeline::RunConfig c = config->value;
    c.paths.out = dir;
    c.resolve();
    config->value = c;
  });
}

vk_status vk_config_set(vk_config* config, const char* key, const char* json_value) {
  VK_REQUIRE(config && key && json_value, "vk_config_set: NULL argument");
  return guarded([&] {
    nlohmann::json j = viskd::pipeline::run_config_to_json(config->value);
    nlohmann::json value;
    try {
      value = nlohmann::json::parse(json_value);
    } catch (const nlohmann::json::parse_error& e) {
      viskd::throw_config(std::string("value for '") + key + "' is not valid JSON: " + e.what());
    }
    const std::string k = key;
    const auto dot = k.find('.');
    if (dot == std::string::npos) {
      j[k] = value;
    } else {
      j[k.substr(0, dot)][k.substr(dot + 1)] = value;
    }
    config->value = viskd::pipeline::parse_run_config(j.dump(2), std::string("--set ") + key);
  });
}

vk_status vk_config_to_json(const vk_config* config, char** out) {
  VK_REQUIRE(config && out, "vk_config_to_json: NULL argument");
  return guarded([&] { *out = copy_string(viskd::pipeline::serialize_run_config(config->value)); });
}

void vk_config_free(vk_config* config) { delete config; }

#define VK_STAGE(fn, impl)                               \
  vk_status fn(const vk_config* config) {                \
    VK_REQUIRE(config, #fn ": config is NULL");          \
    return guarded([&] { impl(config->value); });        \
  }

VK_STAGE(vk_run_generate, viskd::pipeline::run_generate)
VK_STAGE(vk_run_preprocess, viskd::pipeline::run_preprocess)
VK_STAGE(vk_run_pretrain, viskd::pipeline::run_pretrain)
VK_STAGE(vk_run_train, viskd::pipeline::run_train)
VK_STAGE(vk_run_evaluate, viskd::pipeline::run_evaluate)
VK_STAGE(vk_run_explain, viskd::pipeline::run_explain)
VK_STAGE(vk_run_ablate, viskd::pipeline::run_ablate)

#undef VK_STAGE

vk_status vk_cohort_generate(const vk_config* config, vk_cohort** out) {
  VK_REQUIRE(config && out, "vk_cohort_generate: NULL argument");
  return guarded([&] {
    auto c = std::make_unique<vk_cohort>();
    c->records = viskd::data::generate_synthetic_cohort(config->value.generator());
    *out = c.release();
  });
}

vk_status vk_cohort_load(const char* path, vk_cohort** out) {
  VK_REQUIRE(path && out, "vk_cohort_load: NULL argument");
  return guarded([&] {
    auto c = std::make_unique<vk_cohort>();
    c->records = viskd::data::load_cohort(path);
    *out = c.release();
  });
}

vk_status vk_cohort_save(const vk_cohort* cohort, const char* path) {
  VK_REQUIRE(cohort && path, "vk_cohort_save: NULL argument");
  return guarded([&] { viskd::data::save_cohort(path, cohort->records); });
}

size_t vk_cohort_size(const vk_cohort* cohort) { return cohort ? cohort->records.size() : 0; }

void vk_cohort_free(vk_cohort* cohort) { delete cohort; }

vk_status vk_dataset_prepare(const vk_cohort* cohort, const vk_config* config, vk_dataset** out) {
  VK_REQUIRE(cohort && config && out, "vk_dataset_prepare: NULL argument");
  return guarded([&] {
    auto d = std::make_unique<vk_dataset>();
    d->value = viskd::data::prepare_cohort(cohort->records, config->value.data.split_fractions,
                                           config->value.seed);
    *out = d.release();
  });
}

vk_status vk_dataset_load(const char* dir, vk_dataset** out) {
  VK_REQUIRE(dir && out, "vk_dataset_load: NULL argument");
  return guarded([&] {
    auto d = std::make_unique<vk_dataset>();
    d->value = viskd::data::load_prepared(dir);
    *out = d.release();
  });
}

vk_status vk_dataset_save(const vk_dataset* dataset, const char* dir) {
  VK_REQUIRE(dataset && dir, "vk_dataset_save: NULL argument");
  return guarded([&] { viskd::data::save_prepared(dataset->value, dir); });
}

size_t vk_dataset_size(const vk_dataset* dataset) { return dataset ? dataset->value.size() : 0; }

vk_status vk_dataset_split_fingerprint(const vk_dataset* dataset, char** out) {
  VK_REQUIRE(dataset && out, "vk_dataset_split_fingerprint: NULL argument");
  return guarded([&] { *out = copy_string(dataset->value.split.fingerprint()); });
}

void vk_dataset_free(vk_dataset* dataset) { delete dataset; }

vk_status vk_pretrain(const vk_dataset* dataset, const vk_config* config, vk_model** out) {
  VK_REQUIRE(dataset && config && out, "vk_pretrain: NULL argument");
  return guarded([&] {
    auto m = std::make_unique<vk_model>();
    m->value = viskd::train::pretrain_mae(dataset->value, config->value.model, config->value.training).model;
    *out = m.release();
  });
}

vk_status vk_build_teacher(const vk_model* mae, const vk_config* config, const vk_dataset* dataset,
                           vk_model** out) {
  VK_REQUIRE(mae && config && out, "vk_build_teacher: NULL argument");
  return guarded([&] {
    auto m = std::make_unique<vk_model>();
    m->value = viskd::train::build_teacher(mae->value, config->value.training,
                                           dataset ? &dataset->value : nullptr);
    *out = m.release();
  });
}

vk_status vk_train_student(const vk_dataset* dataset, const vk_model* teacher, const vk_model* mae,
                           const vk_config* config, vk_model** out) {
  VK_REQUIRE(dataset && config && out, "vk_train_student: NULL argument");
  return guarded([&] {
    auto m = std::make_unique<vk_model>();
    m->value = viskd::train::train_student(dataset->value, teacher ? &teacher->value : nullptr,
                                           mae ? &mae->value : nullptr, config->value.training,
                                           config->value.model)
                   .model;
    *out = m.release();
  });
}

vk_status vk_model_save(const vk_model* model, const char* path) {
  VK_REQUIRE(model && path, "vk_model_save: NULL argument");
  return guarded([&] { viskd::model::save_checkpoint(model->value, path); });
}

vk_status vk_model_load(const char* path, vk_model** out) {
  VK_REQUIRE(path && out, "vk_model_load: NULL argument");
  return guarded([&] {
    auto m = std::make_unique<vk_model>();
    m->value = viskd::model::load_checkpoint(path);
    *out = m.release();
  });
}

const char* vk_model_stage(const vk_model* model) {
  return model ? viskd::model::to_string(model->value.stage) : "";
}

vk_status vk_model_fingerprint(const vk_model* model, char** out) {
  VK_REQUIRE(model && out, "vk_model_fingerprint: NULL argument");
  return guarded([&] { *out = copy_string(viskd::model::parameter_fingerprint(model->value)); });
}

vk_status vk_model_predict(const vk_model* model, const vk_dataset* dataset, double* out, size_t n) {
  VK_REQUIRE(model && dataset && out, "vk_model_predict: NULL argument");
  VK_REQUIRE(n == dataset->value.size(), "vk_model_predict: n must equal the dataset size");
  return guarded([&] {
    const auto& d = dataset->value;
    const auto p = viskd::model::predict(model->value, d.vis, d.static_full, d.static_scorefree);
    std::copy(p.prob_positive.begin(), p.prob_positive.end(), out);
  });
}

void vk_model_free(vk_model* model) { delete model; }

vk_status vk_evaluate(const vk_model* model, const vk_dataset* dataset, const vk_config* config,
                      vk_report** out) {
  VK_REQUIRE(model && dataset && config && out, "vk_evaluate: NULL argument");
  return guarded([&] {
    auto r = std::make_unique<vk_report>();
    const auto& c = config->value;
    r->value = viskd::eval::evaluate_model(model->value, dataset->value, c.evaluation, c.seed,
                                           viskd::model::to_string(model->value.stage), c.training.mt_enabled)
                   .report;
    *out = r.release();
  });
}

vk_status vk_report_to_json(const vk_report* report, char** out) {
  VK_REQUIRE(report && out, "vk_report_to_json: NULL argument");
  return guarded([&] { *out = copy_string(viskd::eval::report_to_json(report->value).dump(2) + "\n"); });
}

vk_status vk_report_to_csv(const vk_report* report, char** out) {
  VK_REQUIRE(report && out, "vk_report_to_csv: NULL argument");
  return guarded([&] {
    *out = copy_string(viskd::eval::report_csv_header() + viskd::eval::report_csv_row(report->value));
  });
}

vk_status vk_report_metric(const vk_report* report, const char* column, double* point, double* low,
                           double* high) {
  VK_REQUIRE(report && column, "vk_report_metric: NULL argument");
  const auto& columns = viskd::eval::kReportColumns;
  VK_REQUIRE(std::find(columns.begin(), columns.end(), std::string_view(column)) != columns.end(),
             std::string("vk_report_metric: unknown column '") + column + "'");
  return guarded([&] {
    const auto& m = report->value.metric(column);
    if (!m.point) viskd::throw_data(viskd::ErrorReason::kUndefinedMetric, std::string(column) + " is undefined");
    if (point) *point = *m.point;
    if (low) *low = m.low.value_or(*m.point);
    if (high) *high = m.high.value_or(*m.point);
  });
}

double vk_report_threshold(const vk_report* report) { return report ? report->value.threshold : 0.0; }

void vk_report_free(vk_report* report) { delete report; }

}  // extern "C"
