#include "focf/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace focf {

const char* to_string(FlowKind k) {
  switch (k) {
    case FlowKind::L2Flow: return "l2";
    case FlowKind::VolumeNormalizedL2: return "vnl2";
    case FlowKind::SurfaceCalabi: return "calabi";
  }
  return "?";
}

const char* to_string(GeometryKind g) {
  switch (g) {
    case GeometryKind::TorusGrid: return "torus";
    case GeometryKind::ProductSpheres: return "product-spheres";
    case GeometryKind::MilnorFrame: return "milnor";
  }
  return "?";
}

const char* to_string(PresetKind p) {
  switch (p) {
    case PresetKind::Flat: return "flat";
    case PresetKind::ConformalBump: return "conformal-bump";
    case PresetKind::RandomMetric: return "random";
    case PresetKind::ProductSpheres: return "product-spheres";
    case PresetKind::Milnor: return "milnor";
    case PresetKind::CalabiRandom: return "calabi-random";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  throw ConfigError(key + ": expected on/off, got '" + v + "'");
}

}  // namespace

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  cfg.raw[key] = value;
  auto num = [&] { return parse_double(key, value); };
  auto integer = [&] { return parse_long(key, value); };
  auto flag = [&] { return parse_bool(key, value); };

  if (key == "flow") {
    if (value == "l2") cfg.flow = FlowKind::L2Flow;
    else if (value == "vnl2") cfg.flow = FlowKind::VolumeNormalizedL2;
    else if (value == "calabi") cfg.flow = FlowKind::SurfaceCalabi;
    else throw ConfigError("flow: unknown kind '" + value + "' (l2|vnl2|calabi)");
  } else if (key == "geometry") {
    if (value == "torus") cfg.geometry = GeometryKind::TorusGrid;
    else if (value == "product-spheres") cfg.geometry = GeometryKind::ProductSpheres;
    else if (value == "milnor") cfg.geometry = GeometryKind::MilnorFrame;
    else throw ConfigError("geometry: unknown kind '" + value + "'");
  } else if (key == "preset") {
    if (value == "flat") cfg.preset = PresetKind::Flat;
    else if (value == "conformal-bump") cfg.preset = PresetKind::ConformalBump;
    else if (value == "random") cfg.preset = PresetKind::RandomMetric;
    else if (value == "product-spheres") cfg.preset = PresetKind::ProductSpheres;
    else if (value == "milnor") cfg.preset = PresetKind::Milnor;
    else if (value == "calabi-random") cfg.preset = PresetKind::CalabiRandom;
    else throw ConfigError("preset: unknown preset '" + value + "'");
  } else if (key == "grid_n1") cfg.grid_n1 = static_cast<int>(integer());
  else if (key == "grid_n2") cfg.grid_n2 = static_cast<int>(integer());
  else if (key == "grid_n") cfg.grid_n1 = cfg.grid_n2 = static_cast<int>(integer());
  else if (key == "len1") cfg.len1 = num();
  else if (key == "len2") cfg.len2 = num();
  else if (key == "amplitude") cfg.amplitude = num();
  else if (key == "mode") cfg.mode = static_cast<int>(integer());
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(integer());
  else if (key == "max_mode") cfg.max_mode = static_cast<int>(integer());
  else if (key == "a2") cfg.a2 = num();
  else if (key == "b2") cfg.b2 = num();
  else if (key == "l1") cfg.l1 = num();
  else if (key == "l2") cfg.l2 = num();
  else if (key == "l3") cfg.l3 = num();
  else if (key == "t_end") cfg.t_end = num();
  else if (key == "tolerance") cfg.controls.rel_tol = num();
  else if (key == "abs_tolerance") cfg.controls.abs_tol = num();
  else if (key == "dt_init") cfg.controls.dt_init = num();
  else if (key == "dt_min") cfg.controls.dt_min = num();
  else if (key == "dt_max") cfg.controls.dt_max = num();
  else if (key == "max_steps") cfg.controls.max_steps = integer();
  else if (key == "dealias") cfg.controls.dealias = flag();
  else if (key == "deriv_sup_max") cfg.controls.deriv_sup_max = static_cast<int>(integer());
  else if (key == "state_stride") cfg.controls.state_stride = static_cast<int>(integer());
  else if (key == "snapshot_stride") cfg.snapshot_stride = static_cast<int>(integer());
  else if (key == "fail_on_singularity") cfg.fail_on_singularity = flag();
  else if (key == "monitor.equivalence") cfg.monitors.equivalence = flag();
  else if (key == "monitor.equivalence.s") cfg.monitors.equivalence_s = num();
  else if (key == "monitor.equivalence.t") cfg.monitors.equivalence_t = num();
  else if (key == "monitor.ball") cfg.monitors.ball = flag();
  else if (key == "monitor.ball.rho") cfg.monitors.ball_rho = num();
  else if (key == "monitor.ball.t") cfg.monitors.ball_t = num();
  else if (key == "monitor.ball.center_i") cfg.monitors.ball_center_i = static_cast<int>(integer());
  else if (key == "monitor.ball.center_j") cfg.monitors.ball_center_j = static_cast<int>(integer());
  else if (key == "monitor.sobolev") cfg.monitors.sobolev = flag();
  else if (key == "monitor.sobolev.r") cfg.monitors.sobolev_r = num();
  else if (key == "monitor.sobolev.m") cfg.monitors.sobolev_m = static_cast<int>(integer());
  else if (key == "monitor.sobolev.center_i")
    cfg.monitors.sobolev_center_i = static_cast<int>(integer());
  else if (key == "monitor.sobolev.center_j")
    cfg.monitors.sobolev_center_j = static_cast<int>(integer());
  else if (key == "monitor.cutoff") cfg.monitors.cutoff = flag();
  else if (key == "monitor.cutoff.r") cfg.monitors.cutoff_r = num();
  else if (key == "monitor.cutoff.center_i")
    cfg.monitors.cutoff_center_i = static_cast<int>(integer());
  else if (key == "monitor.cutoff.center_j")
    cfg.monitors.cutoff_center_j = static_cast<int>(integer());
  else if (key == "monitor.smoothing") cfg.monitors.smoothing = flag();
  else if (key == "monitor.smoothing.m") cfg.monitors.smoothing_m = static_cast<int>(integer());
  else if (key == "monitor.residual") cfg.monitors.residual = flag();
  else if (key == "monitor.singularity") cfg.monitors.singularity = flag();
  else if (key == "monitor.classifier") cfg.monitors.classifier = flag();
  else throw ConfigError("unknown config key '" + key + "'");
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    apply_override(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

void RunConfig::validate() const {
  // preset/geometry consistency
  switch (preset) {
    case PresetKind::Flat:
    case PresetKind::ConformalBump:
    case PresetKind::RandomMetric:
      if (geometry != GeometryKind::TorusGrid)
        throw ConfigError("preset '" + std::string(to_string(preset)) + "' requires geometry = torus");
      break;
    case PresetKind::CalabiRandom:
      if (geometry != GeometryKind::TorusGrid || flow != FlowKind::SurfaceCalabi)
        throw ConfigError("preset 'calabi-random' requires geometry = torus and flow = calabi");
      break;
    case PresetKind::ProductSpheres:
      if (geometry != GeometryKind::ProductSpheres)
        throw ConfigError("preset 'product-spheres' requires geometry = product-spheres");
      break;
    case PresetKind::Milnor:
      if (geometry != GeometryKind::MilnorFrame)
        throw ConfigError("preset 'milnor' requires geometry = milnor");
      break;
  }
  if (flow == FlowKind::SurfaceCalabi && preset != PresetKind::CalabiRandom &&
      preset != PresetKind::Flat)
    throw ConfigError("Calabi flow needs the calabi-random or flat preset");
  if (geometry != GeometryKind::TorusGrid && flow == FlowKind::SurfaceCalabi)
    throw ConfigError("Calabi flow requires the torus grid");
  if (grid_n1 < 8 || grid_n2 < 8 || grid_n1 % 2 || grid_n2 % 2)
    throw ConfigError("grid sizes must be even and >= 8");
  if (!(len1 > 0) || !(len2 > 0)) throw ConfigError("periods must be positive");
  if (!(t_end > 0)) throw ConfigError("t_end must be positive");
  if (preset == PresetKind::ProductSpheres && (!(a2 > 0) || !(b2 > 0)))
    throw ConfigError("product-spheres preset needs a2, b2 > 0");
  if (preset == PresetKind::Milnor && (!(l1 > 0) || !(l2 > 0) || !(l3 > 0)))
    throw ConfigError("milnor preset needs l1, l2, l3 > 0");
  if (preset == PresetKind::ConformalBump && std::abs(amplitude) > 2.0)
    throw ConfigError("conformal-bump amplitude too large");
  if ((preset == PresetKind::RandomMetric || preset == PresetKind::CalabiRandom) &&
      !(amplitude < 1.0 && amplitude >= 0.0))
    throw ConfigError("random preset amplitude must lie in [0, 1) to keep the data admissible");
  FlowSpec spec = flow_spec();
  spec.validate();
}

FlowSpec RunConfig::flow_spec() const {
  FlowSpec spec;
  spec.kind = flow;
  spec.geometry = geometry;
  spec.controls = controls;
  return spec;
}

}  // namespace focf
