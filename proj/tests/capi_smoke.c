/*
 * Copyright 2026 The cpdyn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* The header must compile as C11 and the library must link from C. */

#include <cpdyn/cpdyn.h>
#include <stdio.h>

int main(void) {
  cpdyn_subspace* v = NULL;
  int dim_v = 0, dim_v0 = 0, dim_domain = 0;
  if (cpdyn_subspace_full(2, 2, &v) != CPDYN_OK) {
    fprintf(stderr, "%s\n", cpdyn_last_error());
    return 1;
  }
  if (cpdyn_subspace_dims(v, &dim_v, &dim_v0, &dim_domain) != CPDYN_OK) return 1;
  cpdyn_subspace_free(v);
  printf("cpdyn %s: dim V0 = %d\n", cpdyn_version(), dim_v0);
  return dim_v0 == 12 ? 0 : 1;
}
