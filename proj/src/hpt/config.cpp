#include "hpt/config.hpp"

#include "hpt/errors.hpp"
#include "hpt/stream_io.hpp"
#include "hpt/text.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace hpt {

namespace pt = boost::property_tree;

const std::vector<std::string>& ConfigDocument::known_keys() {
  static const std::vector<std::string> keys = {
      "kalman.q",           "kalman.p0",          "kalman.dt_mode",         "kalman.fixed_dt",
      "kalman.joseph_form", "kalman.noise_on_blended",
      "noise.profile",      "noise.adaptive",
      "loop_closure.enabled", "loop_closure.xi",  "loop_closure.theta",     "loop_closure.norm_mode",
      "loop_closure.kappa", "loop_closure.calibration_frames",
      "io.input",           "io.output",          "io.format",              "io.listen",
      "metrics.settle_epsilon",
      "trajectory.preset",  "trajectory.duration", "trajectory.rate",       "trajectory.pitch",
      "trajectory.yaw",     "trajectory.roll",    "trajectory.dwells",      "trajectory.ramp",
      "synth_noise.profile", "synth_noise.bias",  "synth_noise.seed",
      "dataset.samples",    "dataset.range",      "dataset.curve",          "dataset.bin_width",
      "fit.axis",           "fit.bin_width",      "fit.range",              "fit.mode",
      "fit.name",           "fit.base",           "fit.pair",               "fit.r_min",
      "fit.r_max",
  };
  return keys;
}

void ConfigDocument::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ValueError("unknown config key '" + key + "'");
  entries_[key] = std::string(trim(value));
}

std::optional<std::string> ConfigDocument::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string ConfigDocument::dump() const {
  std::ostringstream out;
  std::string section;
  for (const auto& [key, value] : entries_) {
    const auto dot = key.find('.');
    const auto s = key.substr(0, dot);
    if (s != section) {
      out << (section.empty() ? "" : "\n") << '[' << s << "]\n";
      section = s;
    }
    out << key.substr(dot + 1) << " = " << value << '\n';
  }
  return out.str();
}

namespace {

// "value ; note" and "value # note" drop the note.
std::string strip_inline_comment(const std::string& value) {
  for (std::size_t i = 1; i < value.size(); ++i)
    if ((value[i] == ';' || value[i] == '#') && (value[i - 1] == ' ' || value[i - 1] == '\t'))
      return std::string(trim(std::string_view(value).substr(0, i)));
  return value;
}

}  // namespace

ConfigDocument ConfigDocument::parse(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError("config: " + e.message(), e.line());
  }
  ConfigDocument doc;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      if (!body.data().empty()) throw ParseError("config key '" + section + "' is outside any section", 0);
      continue;
    }
    for (const auto& [key, value] : body) {
      if (!value.empty()) throw ParseError("config value for '" + section + "." + key + "' is nested", 0);
      try {
        doc.set(section + "." + key, strip_inline_comment(value.data()));
      } catch (const ValueError& e) {
        throw ParseError(e.what(), 0);
      }
    }
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

namespace {

// Config values are arguments: a malformed one is a ValueError.
double value_double(std::string_view text, const std::string& key) {
  try {
    return parse_double(text, key);
  } catch (const ParseError& e) {
    throw ValueError(e.what());
  }
}

bool value_bool(std::string_view text, const std::string& key) {
  try {
    return parse_bool(text, key);
  } catch (const ParseError& e) {
    throw ValueError(e.what());
  }
}

std::vector<double> parse_list(const std::string& text, const std::string& key, std::size_t expected) {
  std::vector<double> out;
  for (const auto& cell : split(text, ',')) out.push_back(value_double(cell, key));
  if (out.size() != expected)
    throw ValueError(key + " needs " + std::to_string(expected) + " comma-separated values, got " +
                     std::to_string(out.size()));
  return out;
}

Vector6 parse_vector6(const std::string& text, const std::string& key) {
  const auto v = parse_list(text, key, 6);
  Vector6 out;
  for (int i = 0; i < 6; ++i) out[i] = v[static_cast<std::size_t>(i)];
  return out;
}

EulerPose parse_pose(const std::string& text, const std::string& key) {
  const auto v = parse_list(text, key, 3);
  return {v[0], v[1], v[2]};
}

std::pair<double, double> parse_range(const std::string& text, const std::string& key) {
  const auto v = parse_list(text, key, 2);
  if (!(v[0] < v[1])) throw ValueError(key + " needs lo < hi");
  return {v[0], v[1]};
}

std::uint64_t parse_count(const std::string& text, const std::string& key) {
  const auto s = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ValueError(key + ": expected a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

// "amp:freq[:phase]; amp:freq[:phase]; ..."
std::vector<Sinusoid> parse_sinusoids(const std::string& text, const std::string& key) {
  std::vector<Sinusoid> out;
  if (trim(text).empty() || trim(text) == "none") return out;
  for (const auto& term : split(text, ';')) {
    const auto parts = split(term, ':');
    if (parts.size() < 2 || parts.size() > 3) throw ValueError(key + ": expected amp:freq[:phase], got '" + term + "'");
    Sinusoid s;
    s.amplitude = value_double(parts[0], key);
    s.frequency = value_double(parts[1], key);
    if (parts.size() == 3) s.phase = value_double(parts[2], key);
    out.push_back(s);
  }
  return out;
}

// "start:end; start:end"
std::vector<Dwell> parse_dwells(const std::string& text, const std::string& key) {
  std::vector<Dwell> out;
  if (trim(text).empty() || trim(text) == "none") return out;
  for (const auto& term : split(text, ';')) {
    const auto parts = split(term, ':');
    if (parts.size() != 2) throw ValueError(key + ": expected start:end, got '" + term + "'");
    out.push_back({value_double(parts[0], key), value_double(parts[1], key)});
  }
  return out;
}

class Reader {
 public:
  explicit Reader(const ConfigDocument& doc) : doc_(doc) {}

  std::optional<std::string> str(const std::string& key) const { return doc_.get(key); }
  template <typename F>
  void with(const std::string& key, F&& f) const {
    if (auto v = doc_.get(key)) f(*v, key);
  }

 private:
  const ConfigDocument& doc_;
};

}  // namespace

std::pair<std::string, int> parse_listen_address(std::string_view text) {
  const auto s = std::string(trim(text));
  const auto colon = s.rfind(':');
  std::string host = colon == std::string::npos ? std::string("127.0.0.1") : s.substr(0, colon);
  if (host.empty()) host = "127.0.0.1";
  const auto port_text = colon == std::string::npos ? s : s.substr(colon + 1);
  const auto port = parse_count(port_text, "io.listen port");
  if (port > 65535) throw ValueError("io.listen port out of range: " + port_text);
  return {host, static_cast<int>(port)};
}

RunConfig build_run_config(const ConfigDocument& doc) {
  RunConfig c;
  const Reader r(doc);
  auto num = [](const std::string& v, const std::string& k) { return value_double(v, k); };
  auto flag = [](const std::string& v, const std::string& k) { return value_bool(v, k); };

  r.with("kalman.q", [&](auto& v, auto& k) { c.kalman.process_noise_q = parse_vector6(v, k); });
  r.with("kalman.p0", [&](auto& v, auto& k) { c.kalman.initial_covariance_p0 = parse_vector6(v, k); });
  r.with("kalman.dt_mode", [&](auto& v, auto&) {
    if (v == "timestamps")
      c.kalman.dt_mode = DtMode::FromTimestamps;
    else if (v == "fixed")
      c.kalman.dt_mode = DtMode::Fixed;
    else
      throw ValueError("kalman.dt_mode must be 'timestamps' or 'fixed', got '" + v + "'");
  });
  r.with("kalman.fixed_dt", [&](auto& v, auto& k) { c.kalman.fixed_dt = num(v, k); });
  r.with("kalman.joseph_form", [&](auto& v, auto& k) { c.kalman.joseph_form = flag(v, k); });
  r.with("kalman.noise_on_blended", [&](auto& v, auto& k) { c.kalman.noise_on_blended = flag(v, k); });
  c.kalman.validate();

  r.with("noise.profile", [&](auto& v, auto&) { c.noise.profile_ref = v; });
  r.with("noise.adaptive", [&](auto& v, auto& k) { c.noise.adaptive = flag(v, k); });
  c.noise.profile = resolve_profile(c.noise.profile_ref);
  if (!c.noise.adaptive) c.noise.profile = constant_profile(c.noise.profile);

  auto& lc = c.loop_closure;
  r.with("loop_closure.enabled", [&](auto& v, auto& k) { lc.enabled = flag(v, k); });
  r.with("loop_closure.xi", [&](auto& v, auto& k) { lc.params.xi = num(v, k); });
  r.with("loop_closure.theta", [&](auto& v, auto& k) { lc.params.theta = num(v, k); });
  r.with("loop_closure.norm_mode", [&](auto& v, auto&) { lc.params.norm_mode = parse_norm_mode(v); });
  r.with("loop_closure.kappa", [&](auto& v, auto& k) {
    if (v != "calibrate") lc.kappa = parse_pose(v, k);
  });
  r.with("loop_closure.calibration_frames", [&](auto& v, auto& k) {
    lc.calibration_frames = parse_count(v, k);
    if (lc.calibration_frames == 0) throw ValueError(k + " must be >= 1");
  });
  if (lc.kappa) lc.params.kappa = *lc.kappa;
  lc.params.validate();

  r.with("io.input", [&](auto& v, auto&) { c.io.input = v; });
  r.with("io.output", [&](auto& v, auto&) { c.io.output = v; });
  r.with("io.format", [&](auto& v, auto&) {
    if (v != "auto") parse_stream_format(v);
    c.io.format = v;
  });
  r.with("io.listen", [&](auto& v, auto&) {
    parse_listen_address(v);
    c.io.listen = v;
  });

  r.with("metrics.settle_epsilon", [&](auto& v, auto& k) {
    c.settle_epsilon = num(v, k);
    if (!(c.settle_epsilon > 0.0)) throw ValueError(k + " must be > 0");
  });

  auto& sim = c.simulate;
  r.with("trajectory.preset", [&](auto& v, auto&) {
    if (v == "benchmark")
      sim.trajectory = benchmark_trajectory();
    else if (v == "custom")
      sim.trajectory = TrajectorySpec{};
    else
      throw ValueError("trajectory.preset must be 'benchmark' or 'custom', got '" + v + "'");
  });
  r.with("trajectory.duration", [&](auto& v, auto& k) { sim.trajectory.duration = num(v, k); });
  r.with("trajectory.rate", [&](auto& v, auto& k) { sim.trajectory.rate = num(v, k); });
  for (Axis a : kAxes) {
    const auto key = "trajectory." + std::string(axis_name(a));
    r.with(key, [&](auto& v, auto& k) { sim.trajectory.motion[static_cast<int>(a)] = parse_sinusoids(v, k); });
  }
  r.with("trajectory.dwells", [&](auto& v, auto& k) { sim.trajectory.dwells = parse_dwells(v, k); });
  r.with("trajectory.ramp", [&](auto& v, auto& k) { sim.trajectory.ramp = num(v, k); });
  sim.trajectory.validate();
  r.with("synth_noise.profile", [&](auto& v, auto&) { sim.noise_profile = v; });
  if (sim.noise_profile != "none") resolve_profile(sim.noise_profile);
  r.with("synth_noise.bias", [&](auto& v, auto& k) { sim.bias = parse_pose(v, k); });
  r.with("synth_noise.seed", [&](auto& v, auto& k) { sim.seed = parse_count(v, k); });
  sim.trajectory.seed = sim.seed;
  r.with("dataset.samples", [&](auto& v, auto& k) { sim.dataset_samples = parse_count(v, k); });
  r.with("dataset.range", [&](auto& v, auto& k) { std::tie(sim.dataset_lo, sim.dataset_hi) = parse_range(v, k); });
  r.with("dataset.curve", [&](auto& v, auto& k) { sim.dataset_curve = flag(v, k); });
  r.with("dataset.bin_width", [&](auto& v, auto& k) {
    sim.dataset_bin_width = num(v, k);
    if (!(sim.dataset_bin_width > 0.0)) throw ValueError(k + " must be > 0");
  });

  auto& fit = c.fit;
  r.with("fit.axis", [&](auto& v, auto&) {
    if (v == "all")
      fit.axis.reset();
    else
      fit.axis = parse_axis(v);
  });
  r.with("fit.bin_width", [&](auto& v, auto& k) {
    fit.bin_width = num(v, k);
    if (!(fit.bin_width > 0.0)) throw ValueError(k + " must be > 0");
  });
  r.with("fit.range", [&](auto& v, auto& k) { std::tie(fit.lo, fit.hi) = parse_range(v, k); });
  r.with("fit.mode", [&](auto& v, auto&) {
    if (v == "bins")
      fit.raw = false;
    else if (v == "raw")
      fit.raw = true;
    else
      throw ValueError("fit.mode must be 'bins' or 'raw', got '" + v + "'");
  });
  r.with("fit.name", [&](auto& v, auto&) { fit.name = v; });
  r.with("fit.base", [&](auto& v, auto&) { fit.base = v; });
  r.with("fit.pair", [&](auto& v, auto& k) {
    if (v == "none") return;
    const auto parts = split(v, ',');
    if (parts.size() != 2) throw ValueError(k + " needs two axis names, e.g. 'yaw,pitch'");
    const Axis a = parse_axis(trim(parts[0]));
    const Axis b = parse_axis(trim(parts[1]));
    if (a == b) throw ValueError(k + " needs two different axes");
    fit.pair = std::make_pair(a, b);
  });
  r.with("fit.r_min", [&](auto& v, auto& k) { fit.r_min = num(v, k); });
  r.with("fit.r_max", [&](auto& v, auto& k) { fit.r_max = num(v, k); });
  if (!(fit.r_min > 0.0) || !(fit.r_max > fit.r_min)) throw ValueError("fit needs 0 < r_min < r_max");
  return c;
}

}  // namespace hpt
