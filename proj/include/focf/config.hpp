#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "focf/flow.hpp"

namespace focf {

enum class PresetKind { Flat, ConformalBump, RandomMetric, ProductSpheres, Milnor, CalabiRandom };

/// Batch-run description parsed from a flat key = value file. Unknown keys are
/// errors (silent typos must not change experiments).
struct RunConfig {
  FlowKind flow = FlowKind::L2Flow;
  GeometryKind geometry = GeometryKind::TorusGrid;
  PresetKind preset = PresetKind::Flat;

  // torus presets
  int grid_n1 = 64, grid_n2 = 64;
  double len1 = 1.0, len2 = 1.0;
  double amplitude = 0.1;
  int mode = 1;
  std::uint64_t seed = 1;
  int max_mode = 8;

  // homogeneous presets
  double a2 = 1.0, b2 = 1.0;
  double l1 = 1.0, l2 = 1.0, l3 = 1.0;

  double t_end = 0.01;
  StepControls controls;
  int snapshot_stride = 0;  // 0 = no state snapshots on disk
  bool fail_on_singularity = false;

  struct Monitors {
    bool equivalence = true;
    double equivalence_s = 0.0, equivalence_t = -1.0;  // -1: t_end
    bool ball = false;
    double ball_rho = 0.2, ball_t = -1.0;
    int ball_center_i = 0, ball_center_j = 0;
    bool sobolev = false;
    double sobolev_r = 0.15;
    int sobolev_m = 1;
    int sobolev_center_i = 0, sobolev_center_j = 0;
    bool cutoff = false;
    double cutoff_r = 0.15;
    int cutoff_center_i = 0, cutoff_center_j = 0;
    bool smoothing = true;
    int smoothing_m = 2;
    bool residual = false;
    bool singularity = true;
    bool classifier = true;
  } monitors;

  std::map<std::string, std::string> raw;  // echoed into the manifest

  void validate() const;
  FlowSpec flow_spec() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Apply one "key=value" override (sweeps and CLI flags reuse the parser).
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

const char* to_string(FlowKind k);
const char* to_string(GeometryKind g);
const char* to_string(PresetKind p);

}  // namespace focf
