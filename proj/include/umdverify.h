/* Copyright 2026 The umd-verify Authors
 * Licensed under the Apache License, Version 2.0
 *
 * C interface to the umd-verify validation engine. All functions are
 * thread-safe as long as each handle is confined to one thread. Strings
 * returned as char* are owned by the caller (umdv_string_free); strings
 * returned as const char* stay valid until the owning handle is freed.
 */

#ifndef UMDVERIFY_H
#define UMDVERIFY_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Error codes for functions returning int. */
#define UMDV_OK 0
#define UMDV_ERR_ARGUMENT 1 /* bad handle, key or value */
#define UMDV_ERR_CONFIG 2   /* unparsable product or test definitions */
#define UMDV_ERR_RUNTIME 3  /* environment or I/O failure */

typedef struct umdv_run umdv_run;
typedef struct umdv_report umdv_report;
typedef struct umdv_rc_summary umdv_rc_summary;

const char* umdv_version(void);

/* Message for the last failure on the calling thread; never NULL. */
const char* umdv_last_error(void);

/* Create a run from a product definition file. NULL on error. */
umdv_run* umdv_run_new(const char* product_file);
void umdv_run_free(umdv_run* run);

/* Keys: "release", "os", "mode" (live|mock), "workdir",
 * "timeout" (seconds per check), "tests_file". */
int umdv_run_set(umdv_run* run, const char* key, const char* value);

/* The first repository added is the candidate under verification; any
 * further ones are the production/base repositories. */
int umdv_run_add_repository(umdv_run* run, const char* url);

/* Execute the validation workflow. NULL on error. */
umdv_report* umdv_validate(umdv_run* run);

void umdv_report_free(umdv_report* report);

/* "OK", "WARNING" or "FAIL". */
const char* umdv_report_verdict(const umdv_report* report);

/* 0 for OK, 1 for WARNING, 2 for FAIL. */
int umdv_report_exit_code(const umdv_report* report);

/* format: "text" or "json". NULL on error. */
char* umdv_report_render(const umdv_report* report, const char* format);

/* Write <dir>/<product>-<release>-<os>-<stamp>.txt and .json. */
int umdv_report_write(const umdv_report* report, const char* dir);

void umdv_string_free(char* s);

/* Dependency-closure check of a candidate repository against base
 * repositories. flavor: "rpm" or "deb". NULL on error. */
umdv_rc_summary* umdv_rc_check(const char* flavor, const char* candidate_url,
                               const char* const* base_urls, size_t n_bases, int timeout_s);
void umdv_rc_free(umdv_rc_summary* summary);

/* 1 when every repository was fetched and the closure is complete. */
int umdv_rc_ok(const umdv_rc_summary* summary);
size_t umdv_rc_unmet_count(const umdv_rc_summary* summary);

/* format: "text" or "json". NULL on error. */
char* umdv_rc_render(const umdv_rc_summary* summary, const char* format);

/* "name\tdescription" for a product definition file. NULL on error. */
char* umdv_product_info(const char* product_file);

#ifdef __cplusplus
}
#endif

#endif /* UMDVERIFY_H */
