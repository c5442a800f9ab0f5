// hpt: command-line front end over the C API.
//   exit 0 success, 1 usage error, 2 data error

#include "hpt/hpt.h"

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <pthread.h>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CliError {
  int code;
  std::string message;
};

struct ConfigDeleter {
  void operator()(hpt_config* c) const { hpt_config_free(c); }
};
using ConfigPtr = std::unique_ptr<hpt_config, ConfigDeleter>;

struct StringDeleter {
  void operator()(char* s) const { hpt_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

void check(hpt_status status) {
  if (status != HPT_OK)
    throw CliError{kExitData, std::string(hpt_status_name(status)) + ": " + hpt_last_error()};
}

// Bad option values are usage errors; unreadable or malformed files are data errors.
void check_option(hpt_status status) {
  if (status == HPT_ERR_INVALID_ARGUMENT) throw CliError{kExitUsage, hpt_last_error()};
  check(status);
}

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--config", common.config_path, "Config file (default: $HPT_CONFIG)");
  cmd->add_option("--set", common.overrides, "Override a config key, section.key=value (repeatable)");
}

// --config wins over $HPT_CONFIG; command-line flags win over both.
ConfigPtr load_config(const CommonOptions& common,
                      const std::vector<std::pair<std::string, std::optional<std::string>>>& flags) {
  std::string path = common.config_path;
  if (path.empty())
    if (const char* env = std::getenv("HPT_CONFIG")) path = env;
  hpt_config* raw = nullptr;
  check(path.empty() ? hpt_config_new(&raw) : hpt_config_load(path.c_str(), &raw));
  ConfigPtr config(raw);
  for (const auto& kv : common.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw CliError{kExitUsage, "--set expects section.key=value, got '" + kv + "'"};
    check_option(hpt_config_set(config.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
  }
  for (const auto& [key, value] : flags)
    if (value) check_option(hpt_config_set(config.get(), key.c_str(), value->c_str()));
  check_option(hpt_config_validate(config.get()));
  return config;
}

void print_owned(char* text) {
  OwnedString owned(text);
  std::cout << owned.get() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive-noise Kalman filtering for head-pose streams", "hpt"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hpt_version());

  CommonOptions common;
  std::optional<std::string> in, out, format, profile, seed, axis, mode, bin_width, base, pair, name, listen;
  std::optional<std::string> dataset, loop_closure, kappa, report_path;
  bool curve = false;
  bool eval_json = false;
  std::string eval_a, eval_b;

  auto* simulate = app.add_subcommand("simulate", "Generate a noisy benchmark stream or an error dataset");
  add_common(simulate, common);
  simulate->add_option("--out", out, "Output stream (.jsonl/.csv) or dataset CSV")->required();
  simulate->add_option("--format", format, "jsonl | csv | auto");
  simulate->add_option("--noise", profile, "Synthetic noise profile name or path, or 'none'");
  simulate->add_option("--seed", seed, "Noise seed");
  simulate->add_option("--dataset", dataset, "Emit an error dataset with this many rows instead of a stream");
  simulate->add_flag("--curve", curve, "Emit a noiseless one-row-per-bin error dataset");

  auto* fit = app.add_subcommand("fit", "Fit error curves from a (true, predicted) CSV and export a profile");
  add_common(fit, common);
  fit->add_option("--in", in, "Error dataset CSV")->required();
  fit->add_option("--out", out, "Profile file to write");
  fit->add_option("--axis", axis, "pitch | yaw | roll | all (default all)");
  fit->add_option("--mode", mode, "bins | raw");
  fit->add_option("--bin-width", bin_width, "Bin width in degrees");
  fit->add_option("--base", base, "Profile supplying the axes not being fitted");
  fit->add_option("--pair", pair, "Axis pair for the surface fit, e.g. yaw,roll");
  fit->add_option("--name", name, "Name of the exported profile");
  fit->add_option("--report", report_path, "Also write the JSON fit report here");

  auto* filter = app.add_subcommand("filter", "Filter a pose stream; metrics JSON on stdout");
  add_common(filter, common);
  filter->add_option("--in", in, "Input stream (.jsonl/.csv)");
  filter->add_option("--out", out, "Filtered output stream");
  filter->add_option("--format", format, "jsonl | csv | auto");
  filter->add_option("--profile", profile, "Noise profile name or path");
  filter->add_option("--loop-closure", loop_closure, "true | false");
  filter->add_option("--kappa", kappa, "Origin pose pitch,yaw,roll (default: calibrate)");

  auto* eval = app.add_subcommand("eval", "Compare two streams");
  add_common(eval, common);
  eval->add_option("a", eval_a, "First stream")->required();
  eval->add_option("b", eval_b, "Second stream")->required();
  eval->add_flag("--json", eval_json, "Print the JSON report instead of the table");

  auto* serve = app.add_subcommand("serve", "Run the newline-JSON frame server");
  add_common(serve, common);
  serve->add_option("--listen", listen, "host:port (default io.listen)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "hpt: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      auto config = load_config(common, {{"io.output", out},
                                         {"io.format", format},
                                         {"synth_noise.profile", profile},
                                         {"synth_noise.seed", seed},
                                         {"dataset.samples", dataset},
                                         {"dataset.curve", curve ? std::optional<std::string>("true") : std::nullopt}});
      char* summary = nullptr;
      check(hpt_simulate(config.get(), &summary));
      print_owned(summary);
    } else if (fit->parsed()) {
      auto config = load_config(common, {{"io.input", in},
                                         {"io.output", out},
                                         {"fit.axis", axis},
                                         {"fit.mode", mode},
                                         {"fit.bin_width", bin_width},
                                         {"fit.base", base},
                                         {"fit.pair", pair},
                                         {"fit.name", name}});
      char* report = nullptr;
      check(hpt_fit(config.get(), &report));
      OwnedString owned(report);
      if (report_path) {
        std::FILE* f = std::fopen(report_path->c_str(), "w");
        if (!f) throw CliError{kExitData, "cannot write report '" + *report_path + "'"};
        std::fputs(owned.get(), f);
        std::fputc('\n', f);
        std::fclose(f);
      }
      std::cout << owned.get() << '\n';
    } else if (filter->parsed()) {
      auto config = load_config(common, {{"io.input", in},
                                         {"io.output", out},
                                         {"io.format", format},
                                         {"noise.profile", profile},
                                         {"loop_closure.enabled", loop_closure},
                                         {"loop_closure.kappa", kappa}});
      char* metrics = nullptr;
      check(hpt_run_filter(config.get(), &metrics));
      print_owned(metrics);
    } else if (eval->parsed()) {
      auto config = load_config(common, {});
      char* report = nullptr;
      char* table = nullptr;
      check(hpt_eval(config.get(), eval_a.c_str(), eval_b.c_str(), &report, &table));
      OwnedString owned_report(report);
      OwnedString owned_table(table);
      std::cout << (eval_json ? owned_report.get() : owned_table.get()) << (eval_json ? "\n" : "");
    } else if (serve->parsed()) {
      auto config = load_config(common, {{"io.listen", listen}});
      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);
      hpt_server* server = nullptr;
      check(hpt_server_new(config.get(), nullptr, &server));
      std::cerr << "hpt: listening on port " << hpt_server_port(server) << std::endl;
      std::thread([server, signals] {
        int sig = 0;
        sigwait(&signals, &sig);
        hpt_server_stop(server);
      }).detach();
      const auto status = hpt_server_run(server);
      hpt_server_free(server);
      check(status);
    }
  } catch (const CliError& e) {
    std::cerr << "hpt: " << e.message << '\n';
    return e.code;
  }
  return 0;
}
