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

/* Compiled as C to keep the public header C-compatible. */
#include <stdio.h>
#include <string.h>

#include "viskd/viskd.h"

int main(void) {
  vk_config* config = NULL;
  char* json = NULL;
  if (vk_config_default(&config) != VK_OK) return 1;
  if (vk_config_set_seed(config, 7) != VK_OK) return 1;
  if (vk_config_to_json(config, &json) != VK_OK) return 1;
  const int ok = strstr(json, "\"seed\": 7") != NULL;
  vk_string_free(json);
  vk_config_free(config);
  if (vk_config_parse("{", "inline", &config) != VK_ERR_CONFIG) return 1;
  if (!ok) {
    fprintf(stderr, "seed missing from serialized config\n");
    return 1;
  }
  printf("viskd %s\n", vk_version());
  return 0;
}
