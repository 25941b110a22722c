#pragma once

#include <filesystem>

#include "focf/config.hpp"
#include "focf/diagnostics.hpp"

namespace focf {

struct MonitorOutcome {
  std::string name;
  bool pass = true;
  double value = 0.0;
  std::string detail;
};

struct RunArtifacts {
  TerminationStatus status = TerminationStatus::Completed;
  std::vector<MonitorOutcome> monitors;
  std::string classifier_verdict;
  std::filesystem::path csv_path, manifest_path;
  double t_last = 0.0;
  long steps = 0;
  double final_energy = 0.0;
  double smoothing_m1 = 0.0, smoothing_m2 = 0.0;
  double sobolev_constant = 0.0;

  bool monitors_ok() const {
    for (const auto& m : monitors)
      if (!m.pass) return false;
    return true;
  }
};

/// Execute one configured run: time series CSV, optional snapshot trajectory,
/// JSON manifest. Throws ConfigError for invalid configs.
RunArtifacts execute_run(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Build the configured initial data (validates amplitudes keep it admissible).
MetricField2 initial_metric(const RunConfig& cfg);
CalabiPotential initial_potential(const RunConfig& cfg);
Eigen::VectorXd initial_coeffs(const RunConfig& cfg);

/// Trajectory persistence: FOCF1 state snapshots plus a key = value sidecar.
void save_grid_trajectory(const GridTrajectory& traj, const std::filesystem::path& dir);
GridTrajectory load_grid_trajectory(const std::filesystem::path& dir);

/// Deterministic CSV text for a record series (%.17g, fixed column order).
std::vector<std::string> csv_columns(GeometryKind geometry, int deriv_depth);
std::string csv_of_records(const std::vector<DiagnosticsRecord>& records, GeometryKind geometry,
                           int deriv_depth);

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct SweepCell {
  std::map<std::string, std::string> overrides;
  bool ok = false;
  std::string error;
  RunArtifacts artifacts;
};

struct SweepSummary {
  std::vector<SweepCell> cells;
  std::filesystem::path summary_csv, manifest_path;
  bool all_ok() const {
    for (const auto& c : cells)
      if (!c.ok) return false;
    return true;
  }
};

/// Cartesian sweep over the axes; partial failures are recorded per cell and
/// the sweep continues. threads > 1 runs cells concurrently.
SweepSummary run_sweep(const RunConfig& base, const std::vector<SweepAxis>& axes,
                       const std::filesystem::path& out_dir, int threads = 1);

/// Rescale a stored trajectory and write the result plus an invariance report.
struct RescaleArtifacts {
  std::filesystem::path out_dir, report_path;
  double sup_rm_ratio = 0.0;        // sup|Rm| at t=0-image vs original / lambda
  double smoothing_invariance = 0.0;  // relative drift of the m<=2 monitor ratios
};
RescaleArtifacts rescale_trajectory(const std::filesystem::path& traj_dir, double lambda,
                                    double t0, const std::filesystem::path& out_dir);

}  // namespace focf
