#ifndef FLAMEFRONT_H
#define FLAMEFRONT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define FF_API __declspec(dllexport)
#else
#define FF_API __attribute__((visibility("default")))
#endif

/* Status codes. The first seven double as CLI exit codes. */
typedef enum ff_status {
    FF_OK = 0,
    FF_ERR_CONFIG = 1,      /* bad argument, usage or configuration */
    FF_ERR_PROFILE = 2,     /* no self-similar profile found */
    FF_ERR_NOT_EXTINCT = 3, /* run hit max_steps before extinction */
    FF_ERR_SWEEP = 4,       /* at least one sweep child failed */
    FF_ERR_VERIFY = 5,      /* at least one acceptance criterion failed */
    FF_ERR_FIXTURE = 6,     /* fixtures file unreadable or corrupted */
    FF_ERR_IO = 7,
    FF_ERR_NUMERIC = 8,     /* domain, parameter or resolution error */
    FF_ERR_INTERNAL = 9
} ff_status;

typedef struct ff_profile ff_profile;
typedef struct ff_config ff_config;
typedef struct ff_summary ff_summary;

/* Message of the last failing call on this thread; never NULL. */
FF_API const char* ff_last_error(void);
FF_API const char* ff_version(void);

/* Self-similar profiles. */
FF_API ff_status ff_profile_solve(int n, double tolerance, ff_profile** out);
FF_API void ff_profile_free(ff_profile* profile);
FF_API int ff_profile_dimension(const ff_profile* profile);
FF_API double ff_profile_radius(const ff_profile* profile);
FF_API double ff_profile_peak(const ff_profile* profile);
FF_API double ff_profile_residual(const ff_profile* profile);
FF_API double ff_profile_eval(const ff_profile* profile, double r);
/* JSON object {n, R, a1, residual}; owned by the profile. */
FF_API const char* ff_profile_json(const ff_profile* profile);
/* CSV of (r, f, f') table rows. */
FF_API ff_status ff_profile_write_csv(const ff_profile* profile, const char* path);

/* Run configuration. */
FF_API ff_status ff_config_load(const char* path, ff_config** out);
FF_API ff_status ff_config_parse(const char* text, ff_config** out);
/* key is "section.key". */
FF_API ff_status ff_config_set(ff_config* config, const char* key, const char* value);
/* Resolved config text; owned by the config, valid until the next call. */
FF_API const char* ff_config_render(ff_config* config);
FF_API void ff_config_free(ff_config* config);

/* Runs one experiment and writes its outputs into out_dir (config's
 * output.dir when NULL). On FF_OK or FF_ERR_NOT_EXTINCT *out receives a
 * summary; NULL is allowed when no summary is wanted. */
FF_API ff_status ff_run(const ff_config* config, const char* out_dir, ff_summary** out);
FF_API void ff_summary_free(ff_summary* summary);
FF_API int ff_summary_extinct(const ff_summary* summary);
FF_API double ff_summary_t_hat(const ff_summary* summary);
FF_API long ff_summary_steps(const ff_summary* summary);
/* analysis.json contents; owned by the summary. */
FF_API const char* ff_summary_analysis_json(const ff_summary* summary);

/* axis is "eps", "alpha" or "grid"; jobs <= 0 means FLAMEFRONT_JOBS or the
 * hardware concurrency. Writes out_dir/summary.csv. */
FF_API ff_status ff_sweep(const ff_config* config, const char* axis, const double* values, size_t count,
                          const char* out_dir, int jobs);

/* Receives one formatted line per criterion. */
typedef void (*ff_line_callback)(const char* line, void* user);

/* level is "quick" or "full". Returns FF_OK when every criterion passes,
 * FF_ERR_VERIFY otherwise, FF_ERR_FIXTURE for a bad fixtures file. */
FF_API ff_status ff_verify(const char* level, const char* fixtures_path, int jobs, ff_line_callback callback,
                           void* user);
FF_API ff_status ff_fixtures_check(const char* fixtures_path);

#ifdef __cplusplus
}
#endif

#endif
