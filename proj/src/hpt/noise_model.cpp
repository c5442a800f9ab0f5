#include "hpt/noise_model.hpp"

#include "hpt/errors.hpp"
#include "hpt/text.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace hpt {

namespace pt = boost::property_tree;

void NoiseModel::validate() const {
  for (double v : {lambda, mu, sigma, tau, r_min, r_max})
    if (!std::isfinite(v)) throw ValueError("noise model has a non-finite parameter");
  if (sigma <= 0.0) throw ValueError("noise model sigma must be > 0");
  if (r_min <= 0.0) throw ValueError("noise model r_min must be > 0");
  if (r_max < r_min) throw ValueError("noise model r_max must be >= r_min");
}

double gaussian_density(double x, double mu, double sigma) {
  const double d = (x - mu) / sigma;
  return std::exp(-0.5 * d * d) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

double eval_noise_raw(const NoiseModel& model, double x) {
  return model.tau - model.lambda * gaussian_density(x, model.mu, model.sigma);
}

double eval_noise(const NoiseModel& model, double x) {
  if (!std::isfinite(x)) throw ValueError("noise model evaluated at a non-finite angle");
  return std::clamp(eval_noise_raw(model, x), model.r_min, model.r_max);
}

void EstimatorProfile::validate() const {
  for (const auto& m : axes) m.validate();
}

Matrix3 build_R(const EstimatorProfile& profile, const EulerPose& z) {
  Matrix3 r = Matrix3::Zero();
  for (Axis a : kAxes) {
    const int i = static_cast<int>(a);
    r(i, i) = eval_noise(profile[a], z[a]);
  }
  return r;
}

Matrix3 build_R_at_mean(const EstimatorProfile& profile) {
  return build_R(profile, {profile[Axis::Pitch].mu, profile[Axis::Yaw].mu, profile[Axis::Roll].mu});
}

EstimatorProfile constant_profile(const EstimatorProfile& profile) {
  EstimatorProfile out = profile;
  out.name = profile.name + "-constant";
  for (auto& m : out.axes) {
    m.tau = eval_noise(m, m.mu);
    m.lambda = 0.0;
  }
  return out;
}

namespace {

NoiseModel table_row(double lambda, double mu, double sigma, double tau) {
  return {lambda, mu, sigma, tau, 0.5, 500.0};
}

// Variance curve with the given centre and width whose square root is
// std_center at mu and std_far at mu + 60 degrees.
NoiseModel shaped_variance(double mu, double width, double std_center, double std_far) {
  const double v0 = std_center * std_center;
  const double v60 = std_far * std_far;
  const double depth = (v60 - v0) / (1.0 - std::exp(-(60.0 * 60.0) / (2.0 * width * width)));
  return {depth * std::sqrt(2.0 * std::numbers::pi) * width, mu, width, v0 + depth, 0.5, 500.0};
}

}  // namespace

EstimatorProfile builtin_profile(std::string_view name) {
  EstimatorProfile p;
  p.name = std::string(name);
  if (name == "fsanet") {
    p[Axis::Pitch] = table_row(312.07, -5.19, 132.41, 315.43);
    p[Axis::Yaw] = table_row(4.11, -0.35, 30.87, 7.64);
    p[Axis::Roll] = table_row(3.29e+05, -5.62e-01, 4.44e+03, 3.29e+05);
  } else if (name == "hopenet") {
    p[Axis::Pitch] = table_row(229.18, -8.30, 101.37, 232.88);
    p[Axis::Yaw] = table_row(7.017, -5.57, 48.28, 10.74);
    p[Axis::Roll] = table_row(9.35e+04, 4.76e-02, 2.219e+03, 9.35e+04);
  } else if (name == "fsanet-like") {
    // Centres from the fsanet fits, width from its yaw fit.
    p[Axis::Pitch] = shaped_variance(-5.19, 30.87, 1.0, 4.0);
    p[Axis::Yaw] = shaped_variance(-0.35, 30.87, 1.0, 4.0);
    p[Axis::Roll] = shaped_variance(-0.562, 30.87, 1.0, 4.0);
  } else if (name == "hopenet-like") {
    p[Axis::Pitch] = shaped_variance(-8.30, 48.28, 1.5, 6.0);
    p[Axis::Yaw] = shaped_variance(-5.57, 48.28, 1.5, 6.0);
    p[Axis::Roll] = shaped_variance(0.0476, 48.28, 1.5, 6.0);
  } else {
    throw ValueError("unknown built-in profile '" + std::string(name) + "'");
  }
  return p;
}

std::vector<std::string> builtin_profile_names() {
  return {"fsanet", "hopenet", "fsanet-like", "hopenet-like"};
}

std::string serialize_profile(const EstimatorProfile& profile) {
  std::ostringstream out;
  out << "# head-pose tracker observation noise profile\n";
  out << "name = " << profile.name << "\n";
  for (Axis a : kAxes) {
    const NoiseModel& m = profile[a];
    const auto key = std::string(axis_name(a));
    out << key << ".lambda = " << format_double(m.lambda) << "\n";
    out << key << ".mu = " << format_double(m.mu) << "\n";
    out << key << ".sigma = " << format_double(m.sigma) << "\n";
    out << key << ".tau = " << format_double(m.tau) << "\n";
    out << key << ".r_min = " << format_double(m.r_min) << "\n";
    out << key << ".r_max = " << format_double(m.r_max) << "\n";
  }
  for (const auto& [axis, prov] : profile.provenance) {
    out << "meta." << axis << ".samples = " << prov.samples << "\n";
    out << "meta." << axis << ".residual_rms = " << format_double(prov.residual_rms) << "\n";
    out << "meta." << axis << ".degenerate = " << (prov.degenerate ? "true" : "false") << "\n";
  }
  return out.str();
}

EstimatorProfile parse_profile(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError("profile: " + e.message(), e.line());
  }
  auto get = [&](const std::string& key) -> std::string {
    auto v = tree.get_optional<std::string>(pt::ptree::path_type(key, '/'));
    if (!v) throw ParseError("profile is missing key '" + key + "'", 0);
    return *v;
  };
  EstimatorProfile p;
  p.name = tree.get<std::string>(pt::ptree::path_type("name", '/'), "unnamed");
  for (Axis a : kAxes) {
    const auto k = std::string(axis_name(a));
    NoiseModel& m = p[a];
    m.lambda = parse_double(get(k + ".lambda"), k + ".lambda");
    m.mu = parse_double(get(k + ".mu"), k + ".mu");
    m.sigma = parse_double(get(k + ".sigma"), k + ".sigma");
    m.tau = parse_double(get(k + ".tau"), k + ".tau");
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(k + ".r_min", '/')))
      m.r_min = parse_double(*v, k + ".r_min");
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(k + ".r_max", '/')))
      m.r_max = parse_double(*v, k + ".r_max");
    const std::string meta = "meta." + k;
    if (auto s = tree.get_optional<std::string>(pt::ptree::path_type(meta + ".samples", '/'))) {
      AxisProvenance prov;
      prov.samples = static_cast<std::size_t>(parse_double(*s, meta + ".samples"));
      if (auto r = tree.get_optional<std::string>(pt::ptree::path_type(meta + ".residual_rms", '/')))
        prov.residual_rms = parse_double(*r, meta + ".residual_rms");
      if (auto d = tree.get_optional<std::string>(pt::ptree::path_type(meta + ".degenerate", '/')))
        prov.degenerate = parse_bool(*d, meta + ".degenerate");
      p.provenance[k] = prov;
    }
  }
  p.validate();
  return p;
}

EstimatorProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open profile '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_profile(buf.str());
}

void save_profile(const EstimatorProfile& profile, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write profile '" + path + "'");
  out << serialize_profile(profile);
}

EstimatorProfile resolve_profile(const std::string& name_or_path) {
  for (const auto& n : builtin_profile_names())
    if (n == name_or_path) return builtin_profile(n);
  return load_profile(name_or_path);
}

}  // namespace hpt
