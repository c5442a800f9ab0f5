#include "hpt/hpt.h"

#include "hpt/commands.hpp"
#include "hpt/config.hpp"
#include "hpt/errors.hpp"
#include "hpt/pipeline.hpp"
#include "hpt/server.hpp"
#include "hpt/tracker.hpp"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

struct hpt_config {
  hpt::ConfigDocument doc;
};

struct hpt_tracker {
  hpt::Tracker tracker;
};

struct hpt_server {
  std::unique_ptr<hpt::FrameServer> server;
};

namespace {

thread_local std::string g_last_error;

hpt_status fail(hpt_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Maps the core exception hierarchy onto status codes.
template <typename F>
hpt_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return HPT_OK;
  } catch (const hpt::ParseError& e) {
    return fail(HPT_ERR_PARSE, e.what());
  } catch (const hpt::ValueError& e) {
    return fail(HPT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const hpt::OrderingError& e) {
    return fail(HPT_ERR_ORDERING, e.what());
  } catch (const hpt::DegradedCovarianceError& e) {
    return fail(HPT_ERR_DEGRADED, e.what());
  } catch (const hpt::IoError& e) {
    return fail(HPT_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(HPT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HPT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(HPT_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw hpt::ValueError(std::string(what) + " is NULL");
}

}  // namespace

extern "C" {

const char* hpt_version(void) { return "1.0.0"; }

const char* hpt_status_name(hpt_status status) {
  switch (status) {
    case HPT_OK: return "ok";
    case HPT_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case HPT_ERR_ORDERING: return "ordering";
    case HPT_ERR_DEGRADED: return "degraded";
    case HPT_ERR_PARSE: return "parse";
    case HPT_ERR_IO: return "io";
    case HPT_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* hpt_last_error(void) { return g_last_error.c_str(); }

void hpt_string_free(char* s) { std::free(s); }

hpt_status hpt_config_new(hpt_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new hpt_config{};
  });
}

hpt_status hpt_config_load(const char* path, hpt_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new hpt_config{hpt::ConfigDocument::load(path)};
  });
}

hpt_status hpt_config_parse(const char* text, hpt_config** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new hpt_config{hpt::ConfigDocument::parse(text)};
  });
}

hpt_status hpt_config_set(hpt_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    config->doc.set(key, value);
  });
}

hpt_status hpt_config_validate(const hpt_config* config) {
  return guarded([&] {
    require(config, "config");
    hpt::build_run_config(config->doc);
  });
}

hpt_status hpt_config_dump(const hpt_config* config, char** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = dup_string(config->doc.dump());
  });
}

void hpt_config_free(hpt_config* config) { delete config; }

hpt_status hpt_tracker_new(const hpt_config* config, hpt_tracker** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = new hpt_tracker{hpt::Tracker(hpt::build_run_config(config->doc))};
  });
}

hpt_status hpt_tracker_push(hpt_tracker* tracker, const hpt_frame* frame, hpt_state* out) {
  return guarded([&] {
    require(tracker, "tracker");
    require(frame, "frame");
    require(out, "out");
    hpt::FrameRecord f{frame->t, {frame->pitch, frame->yaw, frame->roll}, std::nullopt};
    hpt::require_finite(f.pose, "pose");
    f.pose = hpt::normalize(f.pose);
    const auto s = tracker->tracker.push(f);
    *out = {frame->t, s.pose.pitch, s.pose.yaw, s.pose.roll, s.velocity[0], s.velocity[1], s.velocity[2]};
  });
}

void hpt_tracker_reset(hpt_tracker* tracker) {
  if (tracker) tracker->tracker.reset();
}

void hpt_tracker_free(hpt_tracker* tracker) { delete tracker; }

hpt_status hpt_run_filter(const hpt_config* config, char** metrics_json) {
  return guarded([&] {
    require(config, "config");
    require(metrics_json, "metrics_json");
    const auto result = hpt::run_filter_files(hpt::build_run_config(config->doc));
    *metrics_json = dup_string(result.metrics.dump(2));
  });
}

hpt_status hpt_simulate(const hpt_config* config, char** summary_json) {
  return guarded([&] {
    require(config, "config");
    require(summary_json, "summary_json");
    *summary_json = dup_string(hpt::run_simulate(hpt::build_run_config(config->doc)).dump(2));
  });
}

hpt_status hpt_fit(const hpt_config* config, char** report_json) {
  return guarded([&] {
    require(config, "config");
    require(report_json, "report_json");
    *report_json = dup_string(hpt::run_fit(hpt::build_run_config(config->doc)).dump(2));
  });
}

hpt_status hpt_eval(const hpt_config* config, const char* a_path, const char* b_path, char** report_json,
                    char** table_text) {
  return guarded([&] {
    require(config, "config");
    require(a_path, "a_path");
    require(b_path, "b_path");
    require(report_json, "report_json");
    const auto report = hpt::run_eval(hpt::build_run_config(config->doc), a_path, b_path);
    std::string table = table_text ? hpt::format_eval_table(report) : std::string();
    *report_json = dup_string(report.dump(2));
    if (table_text) *table_text = dup_string(table);
  });
}

hpt_status hpt_server_new(const hpt_config* config, const char* listen, hpt_server** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    auto run = hpt::build_run_config(config->doc);
    const auto [host, port] = hpt::parse_listen_address(listen ? std::string(listen) : run.io.listen);
    *out = new hpt_server{std::make_unique<hpt::FrameServer>(std::move(run), host, port)};
  });
}

int hpt_server_port(const hpt_server* server) { return server ? server->server->port() : -1; }

hpt_status hpt_server_run(hpt_server* server) {
  return guarded([&] {
    require(server, "server");
    server->server->run();
  });
}

void hpt_server_stop(hpt_server* server) {
  if (server) server->server->stop();
}

void hpt_server_free(hpt_server* server) { delete server; }

}  // extern "C"
