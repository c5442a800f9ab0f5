#ifndef HPT_HPT_H
#define HPT_HPT_H

/* Head-pose tracker: adaptive-noise Kalman filtering of Euler-angle streams.
 *
 * Every fallible call returns an hpt_status. On failure, hpt_last_error()
 * returns a message for the calling thread, valid until that thread's next
 * call into the library. Strings returned through char** out parameters are
 * owned by the caller and released with hpt_string_free(). Angles are in
 * degrees, times in seconds. */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(HPT_BUILDING_LIBRARY)
#    define HPT_API __declspec(dllexport)
#  else
#    define HPT_API __declspec(dllimport)
#  endif
#else
#  define HPT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hpt_status {
  HPT_OK = 0,
  HPT_ERR_INVALID_ARGUMENT = 1, /* bad value, unknown key, non-finite input */
  HPT_ERR_ORDERING = 2,         /* timestamp did not advance */
  HPT_ERR_DEGRADED = 3,         /* ill-conditioned covariance; next push re-initializes */
  HPT_ERR_PARSE = 4,            /* malformed stream, config or profile text */
  HPT_ERR_IO = 5,               /* file or socket failure */
  HPT_ERR_INTERNAL = 6
} hpt_status;

typedef struct hpt_config hpt_config;
typedef struct hpt_tracker hpt_tracker;
typedef struct hpt_server hpt_server;

typedef struct hpt_frame {
  double t;
  double pitch;
  double yaw;
  double roll;
} hpt_frame;

typedef struct hpt_state {
  double t;
  double pitch;
  double yaw;
  double roll;
  double vp; /* deg/s */
  double vy;
  double vr;
} hpt_state;

HPT_API const char* hpt_version(void);
HPT_API const char* hpt_status_name(hpt_status status);
HPT_API const char* hpt_last_error(void);
HPT_API void hpt_string_free(char* s);

/* Configuration: "section.key" = value, see the README for the schema. */
HPT_API hpt_status hpt_config_new(hpt_config** out);
HPT_API hpt_status hpt_config_load(const char* path, hpt_config** out);
HPT_API hpt_status hpt_config_parse(const char* text, hpt_config** out);
HPT_API hpt_status hpt_config_set(hpt_config* config, const char* key, const char* value);
/* Builds the typed configuration and resolves the noise profile. */
HPT_API hpt_status hpt_config_validate(const hpt_config* config);
HPT_API hpt_status hpt_config_dump(const hpt_config* config, char** out);
HPT_API void hpt_config_free(hpt_config* config);

/* Streaming filter. The first push initializes from that frame. */
HPT_API hpt_status hpt_tracker_new(const hpt_config* config, hpt_tracker** out);
HPT_API hpt_status hpt_tracker_push(hpt_tracker* tracker, const hpt_frame* frame, hpt_state* out);
HPT_API void hpt_tracker_reset(hpt_tracker* tracker);
HPT_API void hpt_tracker_free(hpt_tracker* tracker);

/* File-level operations; each returns a JSON report. */
HPT_API hpt_status hpt_run_filter(const hpt_config* config, char** metrics_json);
HPT_API hpt_status hpt_simulate(const hpt_config* config, char** summary_json);
HPT_API hpt_status hpt_fit(const hpt_config* config, char** report_json);
/* table_text may be NULL. */
HPT_API hpt_status hpt_eval(const hpt_config* config, const char* a_path, const char* b_path, char** report_json,
                            char** table_text);

/* Frame server. listen is "host:port" (port 0: ephemeral); NULL uses io.listen. */
HPT_API hpt_status hpt_server_new(const hpt_config* config, const char* listen, hpt_server** out);
HPT_API int hpt_server_port(const hpt_server* server);
/* Blocks until hpt_server_stop() is called from another thread. */
HPT_API hpt_status hpt_server_run(hpt_server* server);
HPT_API void hpt_server_stop(hpt_server* server);
HPT_API void hpt_server_free(hpt_server* server);

#ifdef __cplusplus
}
#endif

#endif /* HPT_HPT_H */
