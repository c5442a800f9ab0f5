#pragma once

// File-level operations behind the CLI subcommands.

#include "hpt/config.hpp"
#include "hpt/error_fit.hpp"

#include <json.hpp>

#include <span>
#include <string>
#include <vector>

namespace hpt {

// Error dataset CSV: true_pitch,true_yaw,true_roll,pred_pitch,pred_yaw,pred_roll
std::vector<PosePair> read_error_csv(const std::string& path);
void write_error_csv(const std::string& path, std::span<const PosePair> pairs);

// Writes a noisy stream with ground truth (or an error dataset when
// dataset.samples > 0 or dataset.curve) to io.output. Returns a summary.
nlohmann::json run_simulate(const RunConfig& config);

// Fits io.input. Writes the profile to io.output when set. Returns the fit
// report: per-axis parameters, residuals, flags and bin table, and the
// surface fit when fit.pair is set.
nlohmann::json run_fit(const RunConfig& config);

// The surface fit uses the mean of the three per-axis absolute errors as the
// height over the (first, second) true angles.
FitResult2d fit_surface(std::span<const ErrorSample> samples, Axis first, Axis second, double bin_width, double lo,
                        double hi, bool raw);

// eval_streams over two stream files, settle target from the config.
nlohmann::json run_eval(const RunConfig& config, const std::string& a_path, const std::string& b_path);

}  // namespace hpt
