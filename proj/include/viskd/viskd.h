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

#ifndef VISKD_VISKD_H_
#define VISKD_VISKD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(VISKD_BUILDING_LIBRARY)
#define VK_API __attribute__((visibility("default")))
#else
#define VK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values 2 to 5 equal the command-line exit codes. */
typedef enum vk_status {
  VK_OK = 0,
  VK_ERR_INTERNAL = 1,
  VK_ERR_CONFIG = 2,
  VK_ERR_DATA = 3,
  VK_ERR_DIVERGENCE = 4,
  VK_ERR_MISSING_ARTIFACT = 5,
  VK_ERR_CONTRACT = 6,
  VK_ERR_INVALID_ARGUMENT = 7
} vk_status;

typedef struct vk_config vk_config;   /* resolved run configuration */
typedef struct vk_cohort vk_cohort;   /* raw patient records */
typedef struct vk_dataset vk_dataset; /* preprocessed, split cohort */
typedef struct vk_model vk_model;     /* mae, teacher or student checkpoint */
typedef struct vk_report vk_report;   /* metrics report with intervals */

/* Message of the last failed call on this thread; never NULL. */
VK_API const char* vk_last_error(void);
VK_API const char* vk_version(void);
/* Frees strings returned through char** out-parameters. */
VK_API void vk_string_free(char* s);
/* Silences informational logging; warnings are still printed. */
VK_API void vk_set_quiet(int quiet);

/* Configuration. */
VK_API vk_status vk_config_default(vk_config** out);
VK_API vk_status vk_config_parse(const char* text, const char* source, vk_config** out);
VK_API vk_status vk_config_load(const char* path, vk_config** out);
VK_API vk_status vk_config_set_seed(vk_config* config, uint64_t seed);
VK_API vk_status vk_config_set_output_dir(vk_config* config, const char* dir);
/* Sets a value by dotted key, e.g. "training.learning_rate", from JSON text. */
VK_API vk_status vk_config_set(vk_config* config, const char* key, const char* json_value);
VK_API vk_status vk_config_to_json(const vk_config* config, char** out);
VK_API void vk_config_free(vk_config* config);

/* Artifact-level stages, reading and writing under the output directory. */
VK_API vk_status vk_run_generate(const vk_config* config);
VK_API vk_status vk_run_preprocess(const vk_config* config);
VK_API vk_status vk_run_pretrain(const vk_config* config);
VK_API vk_status vk_run_train(const vk_config* config);
VK_API vk_status vk_run_evaluate(const vk_config* config);
VK_API vk_status vk_run_explain(const vk_config* config);
VK_API vk_status vk_run_ablate(const vk_config* config);

/* In-memory pipeline. */
VK_API vk_status vk_cohort_generate(const vk_config* config, vk_cohort** out);
VK_API vk_status vk_cohort_load(const char* path, vk_cohort** out);
VK_API vk_status vk_cohort_save(const vk_cohort* cohort, const char* path);
VK_API size_t vk_cohort_size(const vk_cohort* cohort);
VK_API void vk_cohort_free(vk_cohort* cohort);

VK_API vk_status vk_dataset_prepare(const vk_cohort* cohort, const vk_config* config, vk_dataset** out);
VK_API vk_status vk_dataset_load(const char* dir, vk_dataset** out);
VK_API vk_status vk_dataset_save(const vk_dataset* dataset, const char* dir);
VK_API size_t vk_dataset_size(const vk_dataset* dataset);
/* Writes the split's hex fingerprint. */
VK_API vk_status vk_dataset_split_fingerprint(const vk_dataset* dataset, char** out);
VK_API void vk_dataset_free(vk_dataset* dataset);

VK_API vk_status vk_pretrain(const vk_dataset* dataset, const vk_config* config, vk_model** out);
/* `dataset` may be NULL unless teacher fine-tuning is enabled. */
VK_API vk_status vk_build_teacher(const vk_model* mae, const vk_config* config, const vk_dataset* dataset,
                                  vk_model** out);
/* `teacher` may be NULL when distillation is off; `mae` when warm start is off. */
VK_API vk_status vk_train_student(const vk_dataset* dataset, const vk_model* teacher, const vk_model* mae,
                                  const vk_config* config, vk_model** out);
VK_API vk_status vk_model_save(const vk_model* model, const char* path);
VK_API vk_status vk_model_load(const char* path, vk_model** out);
/* "mae", "teacher" or "student"; static storage. */
VK_API const char* vk_model_stage(const vk_model* model);
VK_API vk_status vk_model_fingerprint(const vk_model* model, char** out);
/* Positive-class probabilities for every dataset row; `out` holds `n` values. */
VK_API vk_status vk_model_predict(const vk_model* model, const vk_dataset* dataset, double* out, size_t n);
VK_API void vk_model_free(vk_model* model);

VK_API vk_status vk_evaluate(const vk_model* model, const vk_dataset* dataset, const vk_config* config,
                             vk_report** out);
VK_API vk_status vk_report_to_json(const vk_report* report, char** out);
VK_API vk_status vk_report_to_csv(const vk_report* report, char** out);
/* Point estimate and interval of a column ("AUROC", "R2", ...).
   VK_ERR_DATA when the metric is undefined. */
VK_API vk_status vk_report_metric(const vk_report* report, const char* column, double* point, double* low,
                                  double* high);
VK_API double vk_report_threshold(const vk_report* report);
VK_API void vk_report_free(vk_report* report);

#ifdef __cplusplus
}
#endif

#endif /* VISKD_VISKD_H_ */
