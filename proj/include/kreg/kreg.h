/* C interface to the kreg kernel-regularization library. */
#ifndef KREG_KREG_H
#define KREG_KREG_H

#include <stddef.h>
#include <stdint.h>

#if defined(KREG_BUILDING_LIBRARY)
#define KREG_API __attribute__((visibility("default")))
#else
#define KREG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; the nonzero ones double as process exit codes. */
typedef enum kreg_status {
  KREG_OK = 0,
  KREG_CHECK_FAILURE = 1,
  KREG_CONFIG_ERROR = 2,
  KREG_NUMERICAL_FAILURE = 3,
  KREG_INVALID_ARGUMENT = 4,
  KREG_INTERNAL_ERROR = 5
} kreg_status;

typedef struct kreg_config kreg_config;
typedef struct kreg_report kreg_report;
typedef struct kreg_kernel kreg_kernel;

KREG_API const char* kreg_version(void);

/* Message of the last failed call on this thread; never NULL. */
KREG_API const char* kreg_last_error(void);

/* Parses and validates a JSON configuration. On KREG_CONFIG_ERROR, *out is
   still set so the individual errors can be listed; free it either way. */
KREG_API kreg_status kreg_config_parse(const char* text, kreg_config** out);
KREG_API void kreg_config_free(kreg_config* config);
KREG_API size_t kreg_config_error_count(const kreg_config* config);
/* Key path and message of error i; NULL when i is out of range. */
KREG_API const char* kreg_config_error_path(const kreg_config* config, size_t i);
KREG_API const char* kreg_config_error_message(const kreg_config* config, size_t i);
KREG_API kreg_status kreg_config_set_seed(kreg_config* config, uint64_t seed);
/* Canonical JSON of a valid configuration, owned by the handle. */
KREG_API const char* kreg_config_json(const kreg_config* config);
/* "solve", "verify", "gram" or "probe"; NULL for an invalid configuration. */
KREG_API const char* kreg_config_mode(const kreg_config* config);
/* output.json and output.csv paths; empty strings when unset. */
KREG_API const char* kreg_config_output_json(const kreg_config* config);
KREG_API const char* kreg_config_output_csv(const kreg_config* config);

/* Runs a valid configuration. *out receives a report even when the run
   itself fails; the return value is the report's status. */
KREG_API kreg_status kreg_run(const kreg_config* config, kreg_report** out);
KREG_API void kreg_report_free(kreg_report* report);
/* Strings owned by the handle, valid until it is freed. */
KREG_API const char* kreg_report_json(const kreg_report* report);
KREG_API const char* kreg_report_csv(const kreg_report* report);
KREG_API int kreg_report_all_passed(const kreg_report* report);
KREG_API int kreg_report_exit_code(const kreg_report* report);

/* family: "gaussian" (param = width), "polynomial" (param = offset,
   degree given separately) or "linear". */
KREG_API kreg_status kreg_kernel_create(const char* family, int input_dim, double param, int degree, kreg_kernel** out);
KREG_API void kreg_kernel_free(kreg_kernel* kernel);
KREG_API kreg_status kreg_kernel_eval(const kreg_kernel* kernel, const double* x, const double* y, double* out);

#ifdef __cplusplus
}
#endif

#endif
