#include "focf/diagnostics.hpp"

#include "focf/distance.hpp"
#include "focf/spectral.hpp"

namespace focf {

namespace {

const MetricField2& state_near(const GridTrajectory& traj, double t, MetricField2& scratch) {
  for (std::size_t k = 0; k < traj.state_times.size(); ++k)
    if (std::abs(traj.state_times[k] - t) <= 1e-12 * std::max(1.0, std::abs(t)))
      return traj.states[k];
  scratch = traj.interpolate(t);
  return scratch;
}

double observed_a(const std::vector<DiagnosticsRecord>& recs, double lo, double hi) {
  double a = 0.0;
  for (const auto& r : recs)
    if (r.t >= lo - 1e-14 && r.t <= hi + 1e-14) a = std::max(a, r.sup_dtg);
  return a;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double smoothing_monitor(const std::vector<DiagnosticsRecord>& records, int m) {
  if (m < 1 || m > kDerivCap) throw Error("smoothing monitor: m out of range");
  double k_run = 0.0, worst = 0.0;
  for (const auto& r : records) {
    k_run = std::max(k_run, r.sup_rm);
    if (r.t <= 0.0) continue;
    if (r.deriv_depth < m) throw Error("records do not carry sup|nabla^m Rm| to depth m");
    double base = k_run + 1.0 / std::sqrt(r.t);
    worst = std::max(worst, r.sup_drm[m] / std::pow(base, 1.0 + 0.5 * m));
  }
  return worst;
}

EquivalenceResult metric_equivalence_check(const GridTrajectory& traj, double s, double t,
                                           double a_override) {
  MetricField2 scratch_s(traj.states.front().grid), scratch_t(traj.states.front().grid);
  const MetricField2& gs = state_near(traj, s, scratch_s);
  const MetricField2& gt = state_near(traj, t, scratch_t);
  double a = (a_override >= 0.0) ? a_override
                                 : observed_a(traj.records, std::min(s, t), std::max(s, t));
  double bound = a * std::abs(t - s);

  double worst = std::numeric_limits<double>::infinity();
  const auto& gr = gs.grid;
  for (int i = 0; i < gr.n1; ++i)
    for (int j = 0; j < gr.n2; ++j) {
      // eigenvalues of gs^{-1} gt (positive; similar to an SPD-symmetric matrix)
      double a11 = gs.g11(i, j), a12 = gs.g12(i, j), a22 = gs.g22(i, j);
      double b11 = gt.g11(i, j), b12 = gt.g12(i, j), b22 = gt.g22(i, j);
      double da = a11 * a22 - a12 * a12;
      double tr = (a22 * b11 - a12 * b12 - a12 * b12 + a11 * b22) / da;
      double det = (b11 * b22 - b12 * b12) / da;
      double disc = std::max(0.0, tr * tr - 4.0 * det);
      double lmax = 0.5 * (tr + std::sqrt(disc));
      double lmin = det / lmax;
      worst = std::min({worst, bound - std::log(lmax), bound + std::log(lmin)});
    }
  EquivalenceResult res;
  res.a_used = a;
  res.margin = worst;
  res.pass = worst >= -1e-9 * (1.0 + bound);
  return res;
}

EquivalenceResult metric_equivalence_check(const CoeffTrajectory& traj, double s, double t,
                                           double a_override) {
  Eigen::VectorXd ls = traj.interpolate(s), lt = traj.interpolate(t);
  double a = (a_override >= 0.0) ? a_override
                                 : observed_a(traj.records, std::min(s, t), std::max(s, t));
  double bound = a * std::abs(t - s);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ls.size(); ++i) {
    double lg = std::log(lt(i) / ls(i));
    worst = std::min({worst, bound - lg, bound + lg});
  }
  EquivalenceResult res;
  res.a_used = a;
  res.margin = worst;
  res.pass = worst >= -1e-9 * (1.0 + bound);
  return res;
}

BallGrowthResult ball_growth_check(const GridTrajectory& traj, Node center, double rho, double t,
                                   double a_override) {
  const MetricField2& g0 = traj.states.front();
  if (!(rho < 0.5 * wrap_systole(g0))) throw Error("rho must stay below half the systole proxy");
  MetricField2 scratch(g0.grid);
  const MetricField2& gt = state_near(traj, t, scratch);
  double a = (a_override >= 0.0) ? a_override : observed_a(traj.records, 0.0, t);

  BallGrowthResult res;
  res.r_factor = 1.0 / (1.0 + std::sqrt(std::max(0.0, std::exp(a * t) - 1.0)));
  Plane d0 = grid_distance_map(g0, center);
  Plane dt_map = grid_distance_map(gt, center);
  const double slack = 2.0 * g0.grid.hmax();
  const double r_small = res.r_factor * rho;

  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g0.grid.n1; ++i)
    for (int j = 0; j < g0.grid.n2; ++j) {
      if (dt_map(i, j) <= r_small) worst = std::min(worst, rho + slack - d0(i, j));
      if (d0(i, j) <= r_small) worst = std::min(worst, rho + slack - dt_map(i, j));
    }
  res.worst_slack = worst;
  res.pass = worst >= 0.0;
  return res;
}

double local_sobolev_monitor(const GridTrajectory& traj, Node center, double r, int m) {
  const MetricField2& gT = traj.states.back();
  if (!(2.0 * r < 0.5 * wrap_systole(gT)))
    throw Error("2r must stay below half the systole proxy");
  Plane dT = grid_distance_map(gT, center);
  // masks in the final metric
  Plane in_r = (dT <= r).cast<double>();
  Plane in_2r = (dT <= 2.0 * r).cast<double>();

  double denom = 0.0;
  std::vector<double> numers;
  std::vector<double> times;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const MetricField2& g = traj.states[k];
    CurvatureBundle b = riemann(g);
    denom = std::max(denom, integrate(b.norm_rm_sq * in_2r, g));
    double t = traj.state_times[k];
    if (t > 0.0) {
      TensorField w = nabla_k_rm(b, m);
      numers.push_back(std::pow(t, m) * integrate(contract_norm_sq(w, g, b.ginv) * in_r, g));
      times.push_back(t);
    }
  }
  if (denom <= 1e-300) return 0.0;  // flat runs report 0
  double worst = 0.0;
  for (double num : numers) worst = std::max(worst, num / denom);
  return worst;
}

namespace {

CutoffCheckResult cutoff_check_impl(const GridTrajectory& traj, const CutoffFunction& gamma,
                                    double scale, double a_override, double b_override,
                                    std::vector<double>* running_l) {
  double a = 0.0, bgrad = 0.0;
  for (const auto& r : traj.records) {
    a = std::max(a, r.sup_dtg);
    bgrad = std::max(bgrad, r.sup_grad_dtg);
  }
  if (a_override >= 0.0) a = a_override;
  if (b_override >= 0.0) bgrad = b_override;
  a *= scale;
  bgrad *= scale;

  CutoffNorms n0 = cutoff_norms(gamma, traj.states.front());
  double u0 = n0.sup_dgamma, w0 = n0.sup_hess;

  CutoffCheckResult res;
  res.pass = true;
  double l_run = 0.0;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    double t = traj.state_times[k] - traj.state_times.front();
    CutoffNorms nt = cutoff_norms(gamma, traj.states[k]);
    // comparison ODE closed form: u' = (A/2)u, w' = A w + (3/2) B u
    double u_bound = u0 * std::exp(0.5 * a * t);
    double w_bound;
    if (a > 0.0)
      w_bound = std::exp(a * t) * w0 +
                1.5 * bgrad * u0 * std::exp(a * t) * (2.0 / a) * (1.0 - std::exp(-0.5 * a * t));
    else
      w_bound = w0 + 1.5 * bgrad * u0 * t;
    double rd = (u_bound > 0.0) ? nt.sup_dgamma / u_bound : (nt.sup_dgamma > 0.0 ? 1e300 : 0.0);
    double rh = (w_bound > 0.0) ? nt.sup_hess / w_bound : (nt.sup_hess > 0.0 ? 1e300 : 0.0);
    res.worst_ratio_d = std::max(res.worst_ratio_d, rd);
    res.worst_ratio_h = std::max(res.worst_ratio_h, rh);
    l_run = std::max(l_run, nt.sup_dgamma + nt.sup_hess);
    if (running_l) running_l->push_back(l_run);
  }
  res.l_observed = l_run;
  res.pass = res.worst_ratio_d <= 1.0 + 1e-9 && res.worst_ratio_h <= 1.0 + 1e-9;
  return res;
}

}  // namespace

CutoffCheckResult cutoff_evolution_check(const GridTrajectory& traj, const CutoffFunction& gamma,
                                         double constant_scale, double a_override,
                                         double b_override) {
  return cutoff_check_impl(traj, gamma, constant_scale, a_override, b_override, nullptr);
}

CutoffCheckResult cutoff_evolution_check(GridTrajectory& traj, const CutoffFunction& gamma,
                                         double constant_scale, double a_override,
                                         double b_override) {
  std::vector<double> running;
  CutoffCheckResult res = cutoff_check_impl(static_cast<const GridTrajectory&>(traj), gamma,
                                            constant_scale, a_override, b_override, &running);
  // backfill the running sup at the stored-state times
  std::size_t si = 0;
  double cur = 0.0;
  for (auto& r : traj.records) {
    while (si < traj.state_times.size() && traj.state_times[si] <= r.t + 1e-14) {
      cur = running[si];
      ++si;
    }
    r.l_observed = cur;
  }
  return res;
}

double curvature_evolution_residual(const GridTrajectory& traj) {
  if (traj.states.size() < 3) throw Error("need at least three stored states");
  double worst = 0.0;
  std::vector<CurvatureBundle> bundles;
  bundles.reserve(traj.states.size());
  for (const auto& g : traj.states) bundles.push_back(riemann(g));
  for (std::size_t k = 1; k + 1 < traj.states.size(); ++k) {
    const MetricField2& g = traj.states[k];
    const CurvatureBundle& b = bundles[k];
    double dtm = traj.state_times[k] - traj.state_times[k - 1];
    double dtp = traj.state_times[k + 1] - traj.state_times[k];
    // nonuniform centered difference of the stored Rm components
    TensorField dtrm(g.grid, 4);
    for (int c = 0; c < dtrm.size(); ++c)
      dtrm.comp(c) = ((bundles[k + 1].rm.comp(c) - b.rm.comp(c)) * (dtm / dtp) +
                      (b.rm.comp(c) - bundles[k - 1].rm.comp(c)) * (dtp / dtm)) /
                     (dtm + dtp);
    TensorField lap2 = bilaplacian(b.rm, g, b);
    TensorField resid = dtrm + lap2;
    double rn = std::sqrt(std::max(0.0, contract_norm_sq(resid, g, b.ginv).maxCoeff()));

    double n_rm = std::sqrt(std::max(0.0, b.norm_rm_sq.maxCoeff()));
    TensorField d1 = covariant_derivative(b.rm, b.gamma);
    double n_d1 = std::sqrt(std::max(0.0, contract_norm_sq(d1, g, b.ginv).maxCoeff()));
    TensorField d2 = covariant_derivative(d1, b.gamma);
    double n_d2 = std::sqrt(std::max(0.0, contract_norm_sq(d2, g, b.ginv).maxCoeff()));
    double envelope = n_d2 * n_rm + n_d1 * n_d1 + n_rm * n_rm * n_rm;
    if (envelope > 1e-300) worst = std::max(worst, rn / envelope);
  }
  return worst;
}

namespace {

SingularityReport detect_impl(const std::vector<DiagnosticsRecord>& records,
                              TerminationStatus status, const ClassifierThresholds& th) {
  SingularityReport rep;
  if (static_cast<int>(records.size()) - 1 < th.min_steps) {
    rep.verdict = SingularityVerdict::Inconclusive;
    return rep;
  }
  const double t_last = records.back().t;
  if (status == TerminationStatus::SingularityCandidate) {
    // singular-time estimate: one last step beyond the final accepted time
    double t_star = t_last + std::max(records.back().dt, 1e-300);
    double target = 10.0 * (t_star - t_last);
    std::size_t ref = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < records.size(); ++k) {
      double gap = std::abs((t_star - records[k].t) - target);
      if (gap < best) {
        best = gap;
        ref = k;
      }
    }
    double denom = std::max(records[ref].sup_rm, 1e-300);
    rep.growth_factor = records.back().sup_rm / denom;
    rep.blowup_time = t_star;
    rep.verdict = (rep.growth_factor + 1e-9 >= th.blowup_factor)
                      ? SingularityVerdict::SingularityCandidate
                      : SingularityVerdict::Inconclusive;
    return rep;
  }
  std::vector<double> sups;
  for (const auto& r : records) sups.push_back(r.sup_rm);
  double med = median_of(sups);
  double mx = *std::max_element(sups.begin(), sups.end());
  rep.growth_factor = (med > 0.0) ? mx / med : 1.0;
  rep.verdict = (med <= 0.0 || mx <= th.bounded_cap * med) ? SingularityVerdict::NoSingularity
                                                           : SingularityVerdict::Inconclusive;
  return rep;
}

}  // namespace

SingularityReport singularity_detector(const GridTrajectory& traj,
                                       const ClassifierThresholds& th) {
  SingularityReport rep = detect_impl(traj.records, traj.status, th);
  if (rep.verdict == SingularityVerdict::SingularityCandidate && !traj.states.empty()) {
    // emit the space-time point maximizing f_m / (K + t^{-1/2})
    double k_sup = 0.0;
    for (const auto& r : traj.records) k_sup = std::max(k_sup, r.sup_rm);
    double best = -1.0;
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      double t = traj.state_times[k];
      if (t <= 0.0) continue;
      Plane fm = f_m_field(traj.states[k], 2);
      double denom = k_sup + 1.0 / std::sqrt(t);
      Eigen::Index bi, bj;
      double v = fm.maxCoeff(&bi, &bj) / denom;
      if (v > best) {
        best = v;
        rep.blowup_node = Node{static_cast<int>(bi), static_cast<int>(bj)};
      }
    }
  }
  return rep;
}

SingularityReport singularity_detector(const CoeffTrajectory& traj,
                                       const ClassifierThresholds& th) {
  return detect_impl(traj.records, traj.status, th);
}

const char* to_string(NonsingularVerdict v) {
  switch (v) {
    case NonsingularVerdict::Collapsing: return "Collapsing";
    case NonsingularVerdict::ConvergesToCritical: return "ConvergesToCritical";
    case NonsingularVerdict::NoncompactLimit: return "NoncompactLimit";
    case NonsingularVerdict::Undetermined: return "Undetermined";
    case NonsingularVerdict::RequiresBoundedCurvature: return "RequiresBoundedCurvature";
  }
  return "?";
}

NonsingularReport nonsingular_classifier(const std::vector<DiagnosticsRecord>& records, int n,
                                         FlowKind kind, const ClassifierThresholds& th) {
  NonsingularReport rep;
  if (records.size() < 2) return rep;

  std::vector<double> sups;
  for (const auto& r : records) sups.push_back(r.sup_rm);
  double med = median_of(sups);
  double mx = *std::max_element(sups.begin(), sups.end());
  if (med > 0.0 && mx > th.bounded_cap * med && mx > 1e-9) {
    rep.verdict = NonsingularVerdict::RequiresBoundedCurvature;
    return rep;
  }

  // discrete dissipation budget for the driving functional
  double f0, f_end, cnorm = 1.0;
  if (kind == FlowKind::VolumeNormalizedL2) {
    f0 = records.front().energy_norm;
    f_end = records.back().energy_norm;
    cnorm = std::pow(records.front().vol, (n - 4.0) / n);
  } else {
    f0 = records.front().energy;
    f_end = records.back().energy;
  }
  double sum = 0.0;
  for (std::size_t k = 1; k < records.size(); ++k) {
    double dt = records[k].t - records[k - 1].t;
    double gmid = 0.5 * (records[k].grad_norm * records[k].grad_norm +
                         records[k - 1].grad_norm * records[k - 1].grad_norm);
    sum += cnorm * gmid * dt;
  }
  rep.dissipation_defect = f0 - f_end - sum;
  rep.dissipation_ok = (sum - (f0 - f_end)) <= 1e-4 * std::max(f0, 1e-30) + 1e-12;

  rep.final_grad_norm = records.back().grad_norm;
  rep.final_systole = records.back().systole;
  double sys0 = records.front().systole;
  double sys_mid = records[records.size() / 2].systole;

  bool collapsing = rep.final_systole < th.collapse_fraction * sys0 &&
                    rep.final_systole < 0.5 * sys_mid;
  double crit_threshold =
      th.criticality_rel * f0 / std::sqrt(std::max(records.front().vol, 1e-300)) + 1e-12;
  bool critical = rep.final_grad_norm <= crit_threshold &&
                  rep.final_systole >= th.collapse_fraction * sys0;
  if (collapsing)
    rep.verdict = NonsingularVerdict::Collapsing;
  else if (critical)
    rep.verdict = NonsingularVerdict::ConvergesToCritical;
  else
    rep.verdict = NonsingularVerdict::Undetermined;
  return rep;
}

}  // namespace focf
