#ifndef EMMLAB_H
#define EMMLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define EMMLAB_API __declspec(dllexport)
#else
#define EMMLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every entry point returns one of these. On a nonzero status the message is
   available from emmlab_last_error() on the same thread. */
typedef enum {
    EMMLAB_OK = 0,
    EMMLAB_ERR_INPUT = 1,             /* validation, precondition, I/O, estimation */
    EMMLAB_ERR_BUDGET = 2,            /* enumeration caps exceeded */
    EMMLAB_THEOREM_VIOLATION = 3      /* a checked structural claim failed; output is still produced */
} emmlab_status;

typedef struct emmlab_tree emmlab_tree;
typedef struct emmlab_config emmlab_config;

EMMLAB_API const char* emmlab_version(void);
/* Message of the last failing call on this thread; "" if none. */
EMMLAB_API const char* emmlab_last_error(void);
/* Releases strings returned through char** out-parameters. */
EMMLAB_API void emmlab_string_free(char* text);

/* ---- scenario trees ---- */

EMMLAB_API int emmlab_tree_load(const char* path, emmlab_tree** out);
EMMLAB_API int emmlab_tree_parse(const char* json, emmlab_tree** out);
EMMLAB_API void emmlab_tree_free(emmlab_tree* tree);

/* format: "json" or "csv"; NULL means "json".
   filtration: "full", "trivial", "leak", "natural:S1,Y1" or a JSON file path.
   group: comma-separated asset ids. */
EMMLAB_API int emmlab_exact_check(const emmlab_tree* tree, const char* filtration, const char* group,
                                  int emit_measure, const char* format, char** text_out);
/* As check, but fails with EMMLAB_ERR_INPUT when no martingale measure exists. */
EMMLAB_API int emmlab_exact_complete(const emmlab_tree* tree, const char* filtration, const char* group,
                                     int emit_measure, const char* format, char** text_out);

/* Enumerates every admissible filtration within the caps (0 keeps a default)
   and reports the minimal pricing-feasible ones. Returns
   EMMLAB_THEOREM_VIOLATION, with the report, unless exactly one minimal
   element exists and equals both the meet and the natural filtration. */
EMMLAB_API int emmlab_exact_search(const emmlab_tree* tree, const char* group, size_t max_paths,
                                   size_t max_periods, const char* format, char** text_out);

/* Obstruction report on the d-driver binary tree (d in 1..3). */
EMMLAB_API int emmlab_exact_demo_obstruction(int drivers, const char* format, char** text_out);

/* ---- Monte Carlo ---- */

/* Key-value config; see the README for the field list. */
EMMLAB_API int emmlab_config_load(const char* path, emmlab_config** out);
EMMLAB_API int emmlab_config_parse(const char* text, emmlab_config** out);
EMMLAB_API void emmlab_config_free(emmlab_config* config);
EMMLAB_API void emmlab_config_set_seed(emmlab_config* config, uint64_t seed);
EMMLAB_API int emmlab_config_text(const emmlab_config* config, char** text_out);
EMMLAB_API int emmlab_config_digest(const emmlab_config* config, char** digest_out);

/* Write paths.csv (simulate) or paths.csv, diagnostics.csv, at_paths.csv and
   m_hist.csv (diagnose), plus manifest.json, into out_dir (created if
   missing). The manifest is also returned. */
EMMLAB_API int emmlab_mc_simulate(const emmlab_config* config, const char* out_dir, char** manifest_out);
EMMLAB_API int emmlab_mc_diagnose(const emmlab_config* config, const char* out_dir, char** manifest_out);

/* Renders dir/diagnostics.csv. format: "text" (per-asset and cross-asset
   tables; also for NULL), "csv" (cross-asset averages) or "json" (both). */
EMMLAB_API int emmlab_report(const char* dir, const char* format, char** text_out);

#ifdef __cplusplus
}
#endif

#endif
