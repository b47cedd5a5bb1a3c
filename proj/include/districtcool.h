/* Copyright 2026 districtcool contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API for the district cooling energy-management library.  All functions
 * return a dc_status code; JSON reports are written into caller-provided
 * buffers and truncated (NUL-terminated) when too small.
 */

#ifndef DISTRICTCOOL_H
#define DISTRICTCOOL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dc_status {
  DC_OK = 0,
  DC_ERR_VALIDATION = 1,
  DC_ERR_SOLVER = 2,
  DC_ERR_IO = 3
} dc_status;

/* Opaque handle holding a parsed, validated scenario. */
typedef struct dc_scenario dc_scenario;

/* Loads and validates a scenario file.  Returns NULL on failure; the cause
 * is available via dc_last_error and *status when non-NULL. */
dc_scenario* dc_scenario_load(const char* path, dc_status* status);

void dc_scenario_free(dc_scenario* sc);

/* Overrides an algorithm parameter.  Keys: "alpha", "power", "threshold",
 * "max_iterations", "seed", "threads".  The value is parsed from text. */
dc_status dc_scenario_set_option(dc_scenario* sc, const char* key,
                                 const char* value);

/* Validates a scenario file and writes a JSON report (checks, violations). */
dc_status dc_validate(const char* path, char* report_json, size_t capacity);

/* Runs a scenario in "distributed" or "centralized" mode, writing the
 * artifact files into out_dir and a copy of summary.json into the buffer. */
dc_status dc_run(dc_scenario* sc, const char* mode, const char* out_dir,
                 char* summary_json, size_t capacity);

/* Compares two run directories; writes a JSON diff report. */
dc_status dc_compare(const char* dir_a, const char* dir_b, char* report_json,
                     size_t capacity);

/* Message for the most recent failure on this thread ("" when none). */
const char* dc_last_error(void);

#ifdef __cplusplus
}
#endif

#endif
