#ifndef SASAKIAN_SASAKIAN_H
#define SASAKIAN_SASAKIAN_H

/* C interface to the verification engine. Handles are opaque; every call
 * that can fail returns a status and leaves a message for
 * sasakian_last_error() on the calling thread. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sasakian_status {
  SASAKIAN_OK = 0,
  SASAKIAN_E_INVALID_ARGUMENT,
  SASAKIAN_E_DIMENSION_MISMATCH,
  SASAKIAN_E_NON_FINITE,
  SASAKIAN_E_DUAL_DIVISION_BY_ZERO,
  SASAKIAN_E_OUTSIDE_DOMAIN,
  SASAKIAN_E_NOT_DIFFERENTIABLE,
  SASAKIAN_E_SINGULAR_METRIC,
  SASAKIAN_E_UNSUPPORTED_VALENCE,
  SASAKIAN_E_RANK_DEFICIENT,
  SASAKIAN_E_ILL_CONDITIONED,
  SASAKIAN_E_NOT_TANGENT,
  SASAKIAN_E_NOT_SASAKIAN,
  SASAKIAN_E_PARSE,
  SASAKIAN_E_CONFIG,
  SASAKIAN_E_ALL_EXCLUDED,
  SASAKIAN_E_INTERNAL
} sasakian_status;

typedef struct sasakian_config sasakian_config;
typedef struct sasakian_report sasakian_report;

const char* sasakian_version(void);
const char* sasakian_status_name(sasakian_status status);
/* Message of the last failed call on this thread; empty if none. */
const char* sasakian_last_error(void);

sasakian_status sasakian_config_load(const char* path, sasakian_config** out);
sasakian_status sasakian_config_parse(const char* yaml, sasakian_config** out);
sasakian_status sasakian_config_set_seed(sasakian_config* config, uint64_t seed);
sasakian_status sasakian_config_set_strict(sasakian_config* config, int strict);
/* Replaces the check selection; names may be groups or single checks.
 * count == 0 selects nothing. */
sasakian_status sasakian_config_set_checks(sasakian_config* config, const char* const* names, size_t count);
void sasakian_config_free(sasakian_config* config);

sasakian_status sasakian_run(const sasakian_config* config, sasakian_report** out);
/* Strings are owned by the report and live until it is freed. */
const char* sasakian_report_json(sasakian_report* report, int include_timestamp);
const char* sasakian_report_text(sasakian_report* report);
/* 0 when nothing failed, 2 when a check failed or was refuted. */
int sasakian_report_exit_code(const sasakian_report* report);
size_t sasakian_report_check_count(const sasakian_report* report);
void sasakian_report_free(sasakian_report* report);

#ifdef __cplusplus
}
#endif

#endif
