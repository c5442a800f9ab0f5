#include "hpt/commands.hpp"

#include "hpt/errors.hpp"
#include "hpt/pipeline.hpp"
#include "hpt/stream_io.hpp"
#include "hpt/synth.hpp"
#include "hpt/text.hpp"

#include <cmath>
#include <fstream>
#include <map>

namespace hpt {

using nlohmann::json;

namespace {

constexpr const char* kErrorColumns[] = {"true_pitch", "true_yaw", "true_roll", "pred_pitch", "pred_yaw", "pred_roll"};

json params_json(const GaussParams1d& p) {
  return {{"lambda", p.lambda}, {"mu", p.mu}, {"sigma", p.sigma}, {"tau", p.tau}};
}

json fit_json(const FitResult& f) {
  return {{"params", params_json(f.params)}, {"residual_rms", f.residual_rms},
          {"initial_residual_rms", f.initial_residual_rms}, {"iterations", f.iterations},
          {"converged", f.converged}, {"degenerate", f.degenerate}, {"samples", f.samples}};
}

json bins_json(const BinnedErrors& b) {
  json rows = json::array();
  for (const auto& bin : b.bins)
    rows.push_back({{"lo", bin.lo}, {"hi", bin.hi}, {"count", bin.count},
                    {"mean_error", bin.mean_error ? json(*bin.mean_error) : json(nullptr)}});
  return {{"bin_width", b.bin_width}, {"dropped", b.dropped}, {"bins", rows}};
}

FitResult fit_axis(std::span<const ErrorSample> samples, Axis axis, const FitSection& fit, json& report) {
  const auto binned = bin_errors(samples, axis, fit.bin_width, fit.lo, fit.hi);
  report["table"] = bins_json(binned);
  if (!fit.raw) return fit_gauss1d(binned);
  std::vector<double> x, y, w;
  for (const auto& s : samples) {
    const double angle = s.true_pose[axis];
    if (angle < fit.lo || angle >= fit.hi) continue;
    x.push_back(angle);
    y.push_back(s.abs_error[axis]);
    w.push_back(1.0);
  }
  return fit_gauss1d_points(x, y, w);
}

}  // namespace

std::vector<PosePair> read_error_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open error dataset '" + path + "'");
  std::string line;
  std::size_t lineno = 0;
  std::map<std::string, std::size_t> columns;
  std::size_t width = 0;
  std::vector<PosePair> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (columns.empty()) {
      for (std::size_t i = 0; i < cells.size(); ++i) columns[cells[i]] = i;
      for (const char* c : kErrorColumns)
        if (!columns.count(c)) throw ParseError(path + ": error CSV header lacks column '" + c + "'", lineno);
      width = cells.size();
      continue;
    }
    if (cells.size() != width)
      throw ParseError(path + ": expected " + std::to_string(width) + " columns, got " + std::to_string(cells.size()),
                       lineno);
    double v[6];
    for (int i = 0; i < 6; ++i) {
      try {
        v[i] = parse_double(cells[columns.at(kErrorColumns[i])], kErrorColumns[i]);
      } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), lineno);
      }
      if (!std::isfinite(v[i])) throw ParseError(path + ": non-finite angle", lineno);
    }
    out.emplace_back(EulerPose{v[0], v[1], v[2]}, EulerPose{v[3], v[4], v[5]});
  }
  return out;
}

void write_error_csv(const std::string& path, std::span<const PosePair> pairs) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write error dataset '" + path + "'");
  out << "true_pitch,true_yaw,true_roll,pred_pitch,pred_yaw,pred_roll\n";
  for (const auto& [t, p] : pairs)
    out << format_double(t.pitch) << ',' << format_double(t.yaw) << ',' << format_double(t.roll) << ','
        << format_double(p.pitch) << ',' << format_double(p.yaw) << ',' << format_double(p.roll) << '\n';
}

json run_simulate(const RunConfig& config) {
  const auto& sim = config.simulate;
  if (config.io.output.empty()) throw ValueError("simulate needs an output path (io.output)");
  json summary;
  summary["output"] = config.io.output;
  summary["seed"] = sim.seed;
  summary["noise_profile"] = sim.noise_profile;

  NoiseSpec noise;
  if (sim.noise_profile != "none") noise = NoiseSpec::from_profile(resolve_profile(sim.noise_profile), sim.seed);
  noise.bias = sim.bias;
  noise.seed = sim.seed;

  if (sim.dataset_curve) {
    if (sim.noise_profile == "none") throw ValueError("a curve dataset needs a noise profile");
    const auto pairs =
        gen_curve_dataset(resolve_profile(sim.noise_profile), sim.dataset_bin_width, sim.dataset_lo, sim.dataset_hi);
    write_error_csv(config.io.output, pairs);
    summary["kind"] = "curve_dataset";
    summary["rows"] = pairs.size();
    return summary;
  }
  if (sim.dataset_samples > 0) {
    const auto pairs = gen_error_dataset(noise, sim.dataset_samples, sim.dataset_lo, sim.dataset_hi);
    write_error_csv(config.io.output, pairs);
    summary["kind"] = "error_dataset";
    summary["rows"] = pairs.size();
    return summary;
  }
  const auto truth = gen_trajectory(sim.trajectory);
  const auto frames = corrupt(truth, noise);
  write_frames(config.io.output, frames, format_for_path(config.io.output, config.io.format));
  summary["kind"] = "stream";
  summary["frames"] = frames.size();
  summary["benchmark_version"] = kBenchmarkVersion;
  return summary;
}

FitResult2d fit_surface(std::span<const ErrorSample> samples, Axis first, Axis second, double bin_width, double lo,
                        double hi, bool raw) {
  auto height = [](const ErrorSample& s) {
    return (s.abs_error.pitch + s.abs_error.yaw + s.abs_error.roll) / 3.0;
  };
  std::vector<SurfaceSample> points;
  if (raw) {
    for (const auto& s : samples) points.push_back({s.true_pose[first], s.true_pose[second], height(s)});
    return fit_gauss2d(points);
  }
  const auto n = static_cast<long>(std::ceil((hi - lo) / bin_width));
  std::map<std::pair<long, long>, std::pair<double, std::size_t>> cells;
  for (const auto& s : samples) {
    const double x = s.true_pose[first], y = s.true_pose[second];
    if (x < lo || x >= hi || y < lo || y >= hi) continue;
    const auto i = std::min(n - 1, static_cast<long>(std::floor((x - lo) / bin_width)));
    const auto j = std::min(n - 1, static_cast<long>(std::floor((y - lo) / bin_width)));
    auto& c = cells[{i, j}];
    c.first += height(s);
    ++c.second;
  }
  for (const auto& [ij, c] : cells)
    points.push_back({lo + (static_cast<double>(ij.first) + 0.5) * bin_width,
                      lo + (static_cast<double>(ij.second) + 0.5) * bin_width, c.first / static_cast<double>(c.second)});
  return fit_gauss2d(points);
}

json run_fit(const RunConfig& config) {
  const auto& fit = config.fit;
  if (config.io.input.empty()) throw ValueError("fit needs an input error dataset (io.input)");
  const auto pairs = read_error_csv(config.io.input);
  if (pairs.empty()) throw ValueError(config.io.input + ": error dataset has no rows");
  const auto samples = compute_errors(pairs);

  json report;
  report["schema_version"] = kMetricsSchemaVersion;
  report["input"] = config.io.input;
  report["rows"] = samples.size();
  report["mode"] = fit.raw ? "raw" : "bins";
  report["range"] = {fit.lo, fit.hi};

  std::map<Axis, FitResult> fits;
  for (Axis a : kAxes) {
    if (fit.axis && *fit.axis != a) continue;
    json axis_report;
    fits[a] = fit_axis(samples, a, fit, axis_report);
    axis_report["fit"] = fit_json(fits[a]);
    report["axes"][std::string(axis_name(a))] = axis_report;
  }

  EstimatorProfile profile;
  if (!fit.axis) {
    profile = export_profile(fits, fit.name, fit.r_min, fit.r_max);
  } else {
    profile = resolve_profile(fit.base);
    profile.name = fit.name;
    profile.provenance.clear();
    const Axis a = *fit.axis;
    const auto& f = fits.at(a);
    profile[a] = NoiseModel{f.params.lambda, f.params.mu, f.params.sigma, f.params.tau, fit.r_min, fit.r_max};
    profile.provenance[std::string(axis_name(a))] = {f.samples, f.residual_rms, f.degenerate};
    profile.validate();
    report["base"] = fit.base;
  }

  if (fit.pair) {
    const auto s = fit_surface(samples, fit.pair->first, fit.pair->second, fit.bin_width, fit.lo, fit.hi, fit.raw);
    const auto& p = s.params;
    report["surface"] = {{"x_axis", axis_name(fit.pair->first)},
                         {"y_axis", axis_name(fit.pair->second)},
                         {"params",
                          {{"lambda", p.lambda}, {"mu_x", p.mu_x}, {"mu_y", p.mu_y}, {"sigma_x", p.sigma_x},
                           {"sigma_y", p.sigma_y}, {"tau", p.tau}}},
                         {"residual_rms", s.residual_rms},
                         {"iterations", s.iterations},
                         {"converged", s.converged},
                         {"degenerate", s.degenerate},
                         {"samples", s.samples}};
  }

  report["profile"] = serialize_profile(profile);
  if (!config.io.output.empty()) {
    save_profile(profile, config.io.output);
    report["output"] = config.io.output;
  }
  return report;
}

json run_eval(const RunConfig& config, const std::string& a_path, const std::string& b_path) {
  ReadOptions opt;
  if (config.kalman.dt_mode == DtMode::Fixed) opt.implicit_dt = config.kalman.fixed_dt;
  const auto a = read_stream(a_path, format_for_path(a_path, config.io.format), opt);
  const auto b = read_stream(b_path, format_for_path(b_path, config.io.format), opt);
  for (const auto* s : {&a, &b})
    if (!s->rejected.empty())
      throw OrderingError((s == &a ? a_path : b_path) + ": line " + std::to_string(s->rejected.front().line) + ": " +
                          s->rejected.front().reason);
  const EulerPose target = settle_target(config, a.frames);
  auto report = eval_streams(a.frames, b.frames, target, config.settle_epsilon);
  report["a"]["path"] = a_path;
  report["b"]["path"] = b_path;
  return report;
}

}  // namespace hpt
