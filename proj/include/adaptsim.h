/* C interface of the adaptsim shared library.
 *
 * All functions return AS_OK (0) on success or a nonzero as_status;
 * as_last_error() describes the most recent failure on the calling
 * thread. Handles are opaque and owned by the caller via the matching
 * *_free function.
 */
#ifndef ADAPTSIM_H
#define ADAPTSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AS_API __declspec(dllexport)
#else
#define AS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum as_status {
  AS_OK = 0,
  AS_EINVAL = 1,      /* bad argument / invalid parameter */
  AS_EPARSE = 2,      /* scenario or trace file does not parse */
  AS_EVALIDATION = 3, /* scenario or graph constraint violated */
  AS_EIO = 4,         /* file system error */
  AS_ERUNTIME = 5     /* any other failure */
} as_status;

typedef struct as_scenario as_scenario;
typedef struct as_trace as_trace;
typedef struct as_report as_report;

/* Message of the last failed call on this thread; empty string if none. */
AS_API const char* as_last_error(void);

/* ---- scenario ---- */

AS_API as_status as_scenario_load(const char* path, as_scenario** out);
AS_API void as_scenario_free(as_scenario* sc);

AS_API as_status as_scenario_set_seed(as_scenario* sc, uint64_t seed);
AS_API as_status as_scenario_set_adaptive(as_scenario* sc, int adaptive);
/* style: "direct" or "mediated"; re-refines the graph. */
AS_API as_status as_scenario_set_style(as_scenario* sc, const char* style);

/* Writes up to cap-1 bytes of newline-separated violations into buf and
 * stores their count. A valid scenario yields count 0. */
AS_API as_status as_scenario_validate(const as_scenario* sc, char* buf,
                                      size_t cap, size_t* count);

AS_API as_status as_scenario_export_dot(const as_scenario* sc,
                                        const char* path);

/* ---- single run ---- */

AS_API as_status as_run(const as_scenario* sc, as_trace** out);
AS_API void as_trace_free(as_trace* trace);

AS_API as_status as_trace_lifetime(const as_trace* trace, const char* node,
                                   double* out_seconds);
AS_API as_status as_trace_write_nodes_csv(const as_trace* trace,
                                          const char* path);
AS_API as_status as_trace_write_links_csv(const as_trace* trace,
                                          const char* path);
AS_API as_status as_trace_write_curves_csv(const as_trace* trace,
                                           const char* path);

/* ---- adaptive/static comparison over one or more seeds ---- */

/* Runs adaptive and static with each seed, writes trace CSVs (when
 * export_traces is nonzero) plus lifetime_report.{txt,csv} into out_dir. */
AS_API as_status as_compare(const as_scenario* sc, const uint64_t* seeds,
                            size_t n_seeds, const char* out_dir,
                            int export_traces, as_report** out);
AS_API void as_report_free(as_report* report);

/* Human-readable summary; writes up to cap-1 bytes. */
AS_API as_status as_report_summary(const as_report* report, char* buf,
                                   size_t cap);

#ifdef __cplusplus
}
#endif

#endif /* ADAPTSIM_H */
