#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <vector>

#include "focf/functionals.hpp"
#include "focf/homogeneous.hpp"

namespace focf {

struct StepControls {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double dt_init = 1e-8;
  double dt_min = 1e-12;  // hitting this floor flags a singularity candidate
  double dt_max = 0.0;    // 0 = uncapped
  long max_steps = 2000000;
  bool dealias = true;
  int deriv_sup_max = 2;  // sup|nabla^k Rm| recorded for k <= this (cap kDerivCap)
  int state_stride = 1;   // states kept every this many accepted steps
};

struct FlowSpec {
  FlowKind kind = FlowKind::L2Flow;
  GeometryKind geometry = GeometryKind::TorusGrid;
  StepControls controls;

  int n() const { return dimension_of(geometry); }
  void validate() const {
    if (kind == FlowKind::SurfaceCalabi && geometry != GeometryKind::TorusGrid)
      throw Error("surface Calabi flow requires the torus grid");
    if (controls.rel_tol <= 0 || controls.dt_init <= 0 || controls.dt_min <= 0)
      throw Error("integrator parameters must be positive");
    if (controls.deriv_sup_max < 0 || controls.deriv_sup_max > kDerivCap)
      throw Error("deriv_sup_max out of range");
  }
};

enum class TerminationStatus { Completed, SingularityCandidate, PotentialDegenerate, StepCollapse };
const char* to_string(TerminationStatus s);

/// One time-series row of monitored quantities.
struct DiagnosticsRecord {
  double t = 0.0, dt = 0.0;
  double energy = 0.0;           // F
  double energy_norm = 0.0;      // Ftilde = Vol^{(4-n)/n} F
  double vol = 0.0;
  double sup_rm = 0.0;
  std::array<double, kDerivCap + 1> sup_drm{};  // k = 0..deriv_depth
  int deriv_depth = 0;
  double grad_norm = 0.0;        // L2 norm of the driving gradient
  double smoothing_ratio_m1 = 0.0, smoothing_ratio_m2 = 0.0;
  double residual = 0.0;         // backfilled intervalwise
  double systole = 0.0;
  double a_observed = 0.0;       // running sup |dg/dt|_g
  double sup_dtg = 0.0;          // this step's sup |dg/dt|_g
  double sup_grad_dtg = 0.0;     // this step's sup |nabla dg/dt|_g
  double l_observed = 0.0;       // sup(|dgamma| + |Hess gamma|), backfilled by the cutoff check
  std::array<double, 3> coeffs{};  // homogeneous families only
  int ncoeffs = 0;
};

template <class State>
struct Trajectory {
  FlowSpec spec;
  std::vector<DiagnosticsRecord> records;  // one per accepted step (plus t = 0)
  std::vector<double> state_times;         // stored-state times (stride-thinned)
  std::vector<State> states;
  TerminationStatus status = TerminationStatus::Completed;

  std::size_t size() const { return states.size(); }
  double t_first() const { return state_times.front(); }
  double t_last() const { return state_times.back(); }

  /// Cubic Lagrange interpolation on the 4 nearest stored states.
  State interpolate(double t) const;
};

// state vector-space ops used by interpolation and the steppers
inline void state_axpy(MetricField2& y, double a, const MetricField2& x) {
  y.g11 += a * x.g11;
  y.g12 += a * x.g12;
  y.g22 += a * x.g22;
}
inline MetricField2 state_scaled(const MetricField2& x, double a) {
  MetricField2 r = x;
  r *= a;
  return r;
}
inline void state_axpy(Eigen::VectorXd& y, double a, const Eigen::VectorXd& x) { y += a * x; }
inline Eigen::VectorXd state_scaled(const Eigen::VectorXd& x, double a) { return a * x; }
inline void state_axpy(CalabiPotential& y, double a, const CalabiPotential& x) {
  y.phi += a * x.phi;
}
inline CalabiPotential state_scaled(const CalabiPotential& x, double a) {
  CalabiPotential r = x;
  r.phi *= a;
  return r;
}

template <class State>
State Trajectory<State>::interpolate(double t) const {
  const auto& ts = state_times;
  if (ts.empty()) throw RangeEmpty();
  if (ts.size() == 1) return states.front();
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  int k = static_cast<int>(it - ts.begin()) - 1;
  k = std::clamp(k, 0, static_cast<int>(ts.size()) - 2);
  int lo = std::clamp(k - 1, 0, static_cast<int>(ts.size()) - 4);
  if (static_cast<int>(ts.size()) < 4) lo = 0;
  int count = std::min<int>(4, static_cast<int>(ts.size()));
  // Lagrange weights over the window
  State out = state_scaled(states[lo], 0.0);
  for (int a = 0; a < count; ++a) {
    double w = 1.0;
    for (int b = 0; b < count; ++b) {
      if (a == b) continue;
      w *= (t - ts[lo + b]) / (ts[lo + a] - ts[lo + b]);
    }
    state_axpy(out, w, states[lo + a]);
  }
  return out;
}

using GridTrajectory = Trajectory<MetricField2>;
using CoeffTrajectory = Trajectory<Eigen::VectorXd>;
using CalabiTrajectory = Trajectory<CalabiPotential>;

/// One linearly implicit step: the flat bilaplacian -c Lap0^2 is treated
/// implicitly by spectral multipliers, the remainder explicitly.
/// `velocity` must be the flow velocity evaluated at g.
MetricField2 imex_step_raw(const MetricField2& g, const TensorField& velocity, double dt,
                           double c_split);
/// Splitting constant: (2 max_nodes lambda_max(g^{-1}))^2.
double imex_split_constant(const MetricField2& g);

GridTrajectory run_grid_flow(const MetricField2& g0, const FlowSpec& spec, double t_end);
CalabiTrajectory run_calabi_flow(const CalabiPotential& p0, const FlowSpec& spec, double t_end);
CoeffTrajectory run_homogeneous_flow(hom::Family family, const Eigen::VectorXd& l0,
                                     const FlowSpec& spec, double t_end);

struct RescaleParams {
  double lambda = 1.0;
  double t0 = 0.0;
};

/// g~(t~) = lambda * g(t0 + t~/lambda^2); stored states are mapped exactly
/// (state times are images of the input's) and records are recomputed.
GridTrajectory parabolic_rescale(const GridTrajectory& traj, const RescaleParams& p);

/// Per-stored-interval defect || (g(t+dt)-g(t))/dt - velocity(g(t+dt/2)) ||_{L2},
/// midpoint state by cubic interpolation. Backfills records when aligned.
std::vector<double> flow_residual(const GridTrajectory& traj);
std::vector<double> flow_residual(GridTrajectory& traj);
std::vector<double> flow_residual(const CoeffTrajectory& traj);

/// Space-time rescaling of an unnormalized run onto the volume-preserving flow:
/// g~ = c(t) g, dt~ = c(t)^2 dt, c = (Vol0/Vol(t))^{2/n}.
GridTrajectory normalization_correspondence(const GridTrajectory& traj);

/// Assemble a synthetic trajectory (classifier mechanism tests feed these).
GridTrajectory make_synthetic_grid_trajectory(const FlowSpec& spec,
                                              const std::vector<double>& times,
                                              const std::vector<MetricField2>& states,
                                              TerminationStatus status);

/// The per-step record builder (shared by runs, rescaling, synthetic assembly).
/// Running-sup fields (a_observed, smoothing ratios) are filled in a later pass.
DiagnosticsRecord grid_record(const MetricField2& g, const FlowSpec& spec, double t, double dt);

}  // namespace focf
