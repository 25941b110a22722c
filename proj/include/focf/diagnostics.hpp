#pragma once

#include "focf/cutoff.hpp"
#include "focf/flow.hpp"

namespace focf {

/// Thresholds shared by the trajectory classifiers; desk-scale defaults,
/// all configurable.
struct ClassifierThresholds {
  double collapse_fraction = 0.05;       // systole below this * initial systole
  double criticality_rel = 1e-6;         // grad norm below this * Ftilde(0)/sqrt(Vol)
  double blowup_factor = 10.0;           // sup|Rm| growth per (T-t) decade
  double bounded_cap = 2.0;              // sup|Rm| cap as multiple of running median
  int min_steps = 20;                    // fewer accepted steps -> Inconclusive
};

// ---------------------------------------------------------------------------
// smoothing monitor: sup_t sup|nabla^m Rm| / (K + t^{-1/2})^{1+m/2},
// K = running sup of sup|Rm| over [0, t]. Dimensionless and invariant under
// parabolic rescaling (both sides transform identically).
double smoothing_monitor(const std::vector<DiagnosticsRecord>& records, int m);
template <class State>
double smoothing_monitor(const Trajectory<State>& traj, int m) {
  return smoothing_monitor(traj.records, m);
}

// ---------------------------------------------------------------------------
// two-sided metric equivalence: e^{-A|t-s|} g(s) <= g(t) <= e^{A|t-s|} g(s),
// A = observed sup|dg/dt| over [min(s,t), max(s,t)]. Margin is the minimal
// log-eigenvalue slack; pass iff margin >= -tolerance.
struct EquivalenceResult {
  bool pass = false;
  double margin = 0.0;
  double a_used = 0.0;
};
EquivalenceResult metric_equivalence_check(const GridTrajectory& traj, double s, double t,
                                           double a_override = -1.0);
EquivalenceResult metric_equivalence_check(const CoeffTrajectory& traj, double s, double t,
                                           double a_override = -1.0);

// ---------------------------------------------------------------------------
// ball growth: B_{g(t)}(c, r_A(t) rho) inside B_{g(0)}(c, rho) and the
// symmetric inclusion, with 2h slack in radius comparisons.
struct BallGrowthResult {
  bool pass = false;
  double r_factor = 0.0;   // 1/(1 + sqrt(e^{At} - 1))
  double worst_slack = 0.0;  // most negative inclusion slack found (>= -2h passes)
};
BallGrowthResult ball_growth_check(const GridTrajectory& traj, Node center, double rho, double t,
                                   double a_override = -1.0);

// ---------------------------------------------------------------------------
// local Sobolev monitor: sup over sampled t>0 of
//   t^m ||nabla^m Rm||^2_{L2(B_{g(T)}(c,r))} / sup_{[0,T]} ||Rm||^2_{L2(B_{g(T)}(c,2r))}
double local_sobolev_monitor(const GridTrajectory& traj, Node center, double r, int m);

// ---------------------------------------------------------------------------
// cutoff bound check: |dgamma|_{g(t)} and |Hess gamma|_{g(t)} under the
// integrated comparison ODE  u' = (A/2) u,  w' = A w + (3/2) B u  from the
// t=0 values, A = sup|dg/dt|_g, B = sup|nabla dg/dt|_g measured on the run.
struct CutoffCheckResult {
  bool pass = false;
  double worst_ratio_d = 0.0;  // sup over times of measured/bound (<= 1+tol passes)
  double worst_ratio_h = 0.0;
  double l_observed = 0.0;     // sup over times of |dgamma| + |Hess gamma|
};
/// constant_scale shrinks the comparison-ODE growth constants (sensitivity
/// tests); a_override/b_override >= 0 replace the measured sups (synthetic
/// non-solution trajectories carry no meaningful velocity records).
CutoffCheckResult cutoff_evolution_check(GridTrajectory& traj, const CutoffFunction& gamma,
                                         double constant_scale = 1.0, double a_override = -1.0,
                                         double b_override = -1.0);
CutoffCheckResult cutoff_evolution_check(const GridTrajectory& traj, const CutoffFunction& gamma,
                                         double constant_scale = 1.0, double a_override = -1.0,
                                         double b_override = -1.0);

// ---------------------------------------------------------------------------
// curvature evolution residual: r(t) = dRm/dt + Lap^2 Rm against the envelope
// E = ||nabla^2 Rm|| ||Rm|| + ||nabla Rm||^2 + ||Rm||^3 (sup norms); returns
// the fitted constant sup_t ||r||/E.
double curvature_evolution_residual(const GridTrajectory& traj);

// ---------------------------------------------------------------------------
// singularity detector
enum class SingularityVerdict { NoSingularity, SingularityCandidate, Inconclusive };
struct SingularityReport {
  SingularityVerdict verdict = SingularityVerdict::Inconclusive;
  double blowup_time = 0.0;
  Node blowup_node;
  double growth_factor = 0.0;  // sup|Rm| growth over the last (T-t) decade
};
SingularityReport singularity_detector(const GridTrajectory& traj,
                                       const ClassifierThresholds& th = {});
SingularityReport singularity_detector(const CoeffTrajectory& traj,
                                       const ClassifierThresholds& th = {});

// ---------------------------------------------------------------------------
// nonsingular classifier (long runs with bounded curvature)
enum class NonsingularVerdict {
  Collapsing,
  ConvergesToCritical,
  NoncompactLimit,  // unreachable on the compact model families; reported as such
  Undetermined,
  RequiresBoundedCurvature
};
const char* to_string(NonsingularVerdict v);
struct NonsingularReport {
  NonsingularVerdict verdict = NonsingularVerdict::Undetermined;
  double final_grad_norm = 0.0;
  double final_systole = 0.0;
  double dissipation_defect = 0.0;  // Ftilde(0) - Ftilde(T) - sum c ||grad Ftilde||^2 dt
  bool dissipation_ok = false;
};
NonsingularReport nonsingular_classifier(const std::vector<DiagnosticsRecord>& records, int n,
                                         FlowKind kind, const ClassifierThresholds& th = {});
template <class State>
NonsingularReport nonsingular_classifier(const Trajectory<State>& traj,
                                         const ClassifierThresholds& th = {}) {
  return nonsingular_classifier(traj.records, traj.spec.n(), traj.spec.kind, th);
}

}  // namespace focf
