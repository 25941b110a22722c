#include "focf/acceptance.hpp"

#include <chrono>
#include <functional>
#include <ostream>
#include <sstream>

#include "focf/diagnostics.hpp"
#include "focf/distance.hpp"
#include "focf/presets.hpp"
#include "focf/runner.hpp"
#include "focf/spectral.hpp"

namespace focf {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

MetricField2 smooth_random_metric(const Grid2& grid, std::uint64_t seed, double amplitude) {
  return random_metric(grid, seed, amplitude, 3);
}

TensorField random_sym_direction(const Grid2& grid, std::uint64_t seed, double amplitude) {
  TensorField h(grid, 2);
  h.at(0, 0) = amplitude * random_band_limited(grid, seed * 5 + 1, 3, 2.5);
  h.at(1, 1) = amplitude * random_band_limited(grid, seed * 5 + 2, 3, 2.5);
  Plane off = amplitude * random_band_limited(grid, seed * 5 + 3, 3, 2.5);
  h.at(0, 1) = off;
  h.at(1, 0) = off;
  return h;
}

double pairing_against(const MetricField2& g, const TensorField& grad, const TensorField& h) {
  return l2_pairing(grad, h, g);
}

double fd_energy_derivative(const MetricField2& g, const TensorField& h, double eps) {
  MetricField2 gp = add_scaled(g, eps, h);
  MetricField2 gm = add_scaled(g, -eps, h);
  return (energy(gp) - energy(gm)) / (2.0 * eps);
}

FlowSpec grid_spec(FlowKind kind, double tol, int deriv_max = 2) {
  FlowSpec spec;
  spec.kind = kind;
  spec.geometry = GeometryKind::TorusGrid;
  spec.controls.rel_tol = tol;
  spec.controls.dt_init = 1e-8;
  spec.controls.deriv_sup_max = deriv_max;
  return spec;
}

// --- criterion 1: variational identity + mutation guard ----------------------
CriterionResult criterion_gradient_identity() {
  CriterionResult res;
  res.id = 1;
  res.name = "gradient identity (10 directions, delta-flip guard)";
  Grid2 grid = Grid2::unit(64);
  MetricField2 g = smooth_random_metric(grid, 7, 0.05);
  CurvatureBundle b = riemann(g);
  TensorField grad = energy_gradient(g, b);
  TensorField form_div = ricci_form_divergence(g, b);
  TensorField mutant = grad - 2.0 * form_div;  // delta-sign flip of the form term

  const double eps = 1e-5;
  double worst = 0.0, best_mutant = 1e300;
  for (int k = 0; k < 10; ++k) {
    TensorField h = random_sym_direction(grid, 100 + k, 0.01);
    double dfd = fd_energy_derivative(g, h, eps);
    double lhs = pairing_against(g, grad, h);
    double lhs_mut = pairing_against(g, mutant, h);
    worst = std::max(worst, std::abs(lhs - dfd) / std::abs(dfd));
    best_mutant = std::min(best_mutant, std::abs(lhs_mut - dfd) / std::abs(dfd));
  }
  res.pass = worst <= 1e-6 && best_mutant > 1e-6;
  res.measured = "rel err " + num(worst) + "; mutant best " + num(best_mutant);
  res.threshold = "<= 1e-6; mutant > 1e-6";
  return res;
}

// --- criterion 2: curvature pipeline -----------------------------------------
CriterionResult criterion_curvature_pipeline() {
  CriterionResult res;
  res.id = 2;
  res.name = "curvature pipeline (conformal oracle, symmetries, Gauss-Bonnet)";
  Grid2 grid = Grid2::unit(64);
  Plane u = 0.08 * random_band_limited(grid, 21, 3, 2.5);
  MetricField2 g = conformal_metric(grid, u);
  CurvatureBundle b = riemann(g);

  Plane k_oracle = -((-2.0 * u).exp()) * flat_laplacian(u, grid);
  Plane k_pipe = 0.5 * b.scalar;
  double kerr = (k_pipe - k_oracle).abs().maxCoeff() / k_oracle.abs().maxCoeff();

  // symmetries and first Bianchi, relative to sup|Rm|
  double scale = std::max(b.rm.sup_abs(), 1e-300);
  double sym = 0.0, bianchi = 0.0;
  // storage is symmetrized; measure the defect on a fresh unsymmetrized assembly
  // via the reported defect plus Bianchi directly:
  sym = b.symmetry_defect;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          bianchi = std::max(
              bianchi,
              (b.rm.at(i, j, k, l) + b.rm.at(j, k, i, l) + b.rm.at(k, i, j, l)).abs().maxCoeff());
  bianchi /= scale;

  double gb = std::abs(integrate(k_pipe, g)) / integrate(k_pipe.abs(), g);
  res.pass = kerr <= 1e-9 && sym <= 1e-9 && bianchi <= 1e-9 && gb <= 1e-8;
  res.measured = "K err " + num(kerr) + "; sym " + num(sym) + "; bianchi " + num(bianchi) +
                 "; GB " + num(gb);
  res.threshold = "K<=1e-9, sym/bianchi<=1e-9, GB<=1e-8";
  return res;
}

// --- criterion 3: volume law --------------------------------------------------
CriterionResult criterion_volume_law() {
  CriterionResult res;
  res.id = 3;
  res.name = "volume law dVol/dt = (4-n)/4 F (n=2, n=4, vn drift)";
  // n = 2 torus, L2 flow
  GridTrajectory traj =
      run_grid_flow(conformal_bump_metric(Grid2::unit(64), 0.12, 1), grid_spec(FlowKind::L2Flow, 1e-8),
                    0.004);
  double worst = 0.0;
  for (std::size_t k = 1; k < traj.records.size(); ++k) {
    const auto& r0 = traj.records[k - 1];
    const auto& r1 = traj.records[k];
    double rate = (r1.vol - r0.vol) / (r1.t - r0.t);
    double fbar = 0.25 * (4.0 - 2.0) * 0.5 * (r0.energy + r1.energy);
    worst = std::max(worst, std::abs(rate - fbar) / std::abs(fbar));
  }

  // n = 4 product spheres: volume exactly conserved under the unnormalized flow
  FlowSpec ps;
  ps.kind = FlowKind::L2Flow;
  ps.geometry = GeometryKind::ProductSpheres;
  ps.controls.rel_tol = 1e-10;
  ps.controls.dt_init = 1e-6;
  Eigen::VectorXd l0(2);
  l0 << 1.0, 4.0;
  CoeffTrajectory pst = run_homogeneous_flow(hom::Family::ProductSpheres, l0, ps, 1.0);
  double v0 = pst.records.front().vol;
  double vdrift4 = 0.0;
  for (const auto& r : pst.records) vdrift4 = std::max(vdrift4, std::abs(r.vol - v0) / v0);

  // n = 2 volume-normalized: drift per unit time
  GridTrajectory vnt = run_grid_flow(conformal_bump_metric(Grid2::unit(64), 0.12, 1),
                                     grid_spec(FlowKind::VolumeNormalizedL2, 1e-8), 0.01);
  double vol0 = vnt.records.front().vol;
  double drift = 0.0;
  for (const auto& r : vnt.records) drift = std::max(drift, std::abs(r.vol - vol0) / vol0);
  double drift_rate = drift / vnt.records.back().t;

  res.pass = worst <= 1e-4 && vdrift4 <= 1e-8 && drift_rate <= 1e-6;
  res.measured = "n2 rel " + num(worst) + "; n4 drift " + num(vdrift4) + "; vn drift/t " +
                 num(drift_rate);
  res.threshold = "<=1e-4; <=1e-8; <=1e-6";
  return res;
}

// --- criterion 4: dissipation identity ----------------------------------------
double dissipation_defect(const GridTrajectory& traj) {
  double sum = 0.0;
  for (std::size_t k = 1; k < traj.records.size(); ++k) {
    double dt = traj.records[k].t - traj.records[k - 1].t;
    sum += 0.5 *
           (traj.records[k].grad_norm * traj.records[k].grad_norm +
            traj.records[k - 1].grad_norm * traj.records[k - 1].grad_norm) *
           dt;
  }
  return std::abs(traj.records.front().energy - traj.records.back().energy - sum);
}

CriterionResult criterion_dissipation() {
  CriterionResult res;
  res.id = 4;
  res.name = "dissipation identity F(0)-F(T) = sum ||grad F||^2 dt";
  MetricField2 g0 = conformal_bump_metric(Grid2::unit(64), 0.12, 1);
  GridTrajectory base = run_grid_flow(g0, grid_spec(FlowKind::L2Flow, 2e-6), 1.0);
  GridTrajectory tight = run_grid_flow(g0, grid_spec(FlowKind::L2Flow, 2e-6 / 16.0), 1.0);
  double f0 = base.records.front().energy;
  double d_base = dissipation_defect(base);
  double d_tight = dissipation_defect(tight);
  double shrink = d_base / std::max(d_tight, 1e-300);
  res.pass = d_base <= 1e-4 * f0 && shrink >= 4.0;
  res.measured = "defect " + num(d_base / f0) + " F(0); shrink " + num(shrink) + "x";
  res.threshold = "<= 1e-4 F(0); shrink >= 4x";
  return res;
}

// --- criterion 5: product-sphere dynamics --------------------------------------
CriterionResult criterion_product_spheres() {
  CriterionResult res;
  res.id = 5;
  res.name = "product spheres: reference match at t=1, critical limit";
  FlowSpec spec;
  spec.kind = FlowKind::L2Flow;
  spec.geometry = GeometryKind::ProductSpheres;
  spec.controls.rel_tol = 1e-11;
  spec.controls.dt_init = 1e-6;
  Eigen::VectorXd l0(2);
  l0 << 1.0, 4.0;
  CoeffTrajectory traj = run_homogeneous_flow(hom::Family::ProductSpheres, l0, spec, 1.0);

  // independent reference: fixed-step RK4 refinement
  auto rhs = [](const Eigen::VectorXd& l) {
    return hom::velocity(hom::Family::ProductSpheres, l, FlowKind::L2Flow);
  };
  Eigen::VectorXd y = l0;
  const int nsteps = 50000;
  const double dt = 1.0 / nsteps;
  for (int s = 0; s < nsteps; ++s) {
    Eigen::VectorXd k1 = rhs(y);
    Eigen::VectorXd k2 = rhs(y + 0.5 * dt * k1);
    Eigen::VectorXd k3 = rhs(y + 0.5 * dt * k2);
    Eigen::VectorXd k4 = rhs(y + dt * k3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  Eigen::VectorXd got = traj.states.back();
  double referr = ((got - y).cwiseAbs().cwiseQuotient(y.cwiseAbs())).maxCoeff();

  // long volume-normalized run converges to a = b, gradient to zero
  FlowSpec lspec = spec;
  lspec.kind = FlowKind::VolumeNormalizedL2;
  lspec.controls.rel_tol = 1e-10;
  lspec.controls.state_stride = 64;
  CoeffTrajectory longrun = run_homogeneous_flow(hom::Family::ProductSpheres, l0, lspec, 400.0);
  auto rep = nonsingular_classifier(longrun);
  Eigen::VectorXd lend = longrun.states.back();
  double asym = std::abs(lend(0) - lend(1)) / lend(1);

  bool f_monotone = true;
  for (std::size_t k = 1; k < longrun.records.size(); ++k)
    if (longrun.records[k].energy > longrun.records[k - 1].energy * (1.0 + 1e-9))
      f_monotone = false;

  res.pass = referr <= 1e-8 && rep.verdict == NonsingularVerdict::ConvergesToCritical &&
             asym <= 1e-4 && f_monotone;
  res.measured = "ref err " + num(referr) + "; verdict " + to_string(rep.verdict) + "; |a2-b2| " +
                 num(asym);
  res.threshold = "<=1e-8; ConvergesToCritical; F nonincreasing";
  return res;
}

// --- criterion 6: smoothing monitor family -------------------------------------
struct SmoothingFamily {
  std::vector<GridTrajectory> runs;
  std::vector<std::string> labels;
};

SmoothingFamily rough_family(const std::vector<double>& amps, const std::vector<int>& sizes,
                             double t_end, double tol) {
  SmoothingFamily fam;
  for (int n : sizes) {
    for (double amp : amps) {
      Grid2 grid = Grid2::unit(n);
      MetricField2 g0 = random_metric(grid, 2024, amp, 12);
      FlowSpec spec = grid_spec(FlowKind::L2Flow, tol);
      spec.controls.state_stride = 8;
      fam.runs.push_back(run_grid_flow(g0, spec, t_end));
      fam.labels.push_back("n=" + std::to_string(n) + " amp=" + num(amp));
    }
  }
  return fam;
}

CriterionResult criterion_smoothing_family(std::ostream* log) {
  CriterionResult res;
  res.id = 6;
  res.name = "smoothing monitor: family spread and rescale invariance";
  SmoothingFamily fam = rough_family({0.04, 0.08, 0.16}, {64, 128}, 6e-3, 1e-5);
  double spread_worst = 0.0;
  std::ostringstream detail;
  for (int m = 1; m <= 2; ++m) {
    double lo = 1e300, hi = 0.0;
    for (std::size_t k = 0; k < fam.runs.size(); ++k) {
      double ratio = smoothing_monitor(fam.runs[k], m);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      if (log) *log << "  smoothing m=" << m << " " << fam.labels[k] << ": " << ratio << "\n";
    }
    spread_worst = std::max(spread_worst, hi / lo);
    detail << "m" << m << " spread " << num(hi / lo) << " ";
  }
  // parabolic-rescaling invariance on the first run. The identity rescale
  // gives the baseline on the same stored-state subsample.
  double inv_worst = 0.0;
  GridTrajectory base = parabolic_rescale(fam.runs.front(), RescaleParams{1.0, 0.0});
  for (double lambda : {0.5, 2.0}) {
    GridTrajectory scaled = parabolic_rescale(fam.runs.front(), RescaleParams{lambda, 0.0});
    for (int m = 1; m <= 2; ++m) {
      double a = smoothing_monitor(base, m);
      double b = smoothing_monitor(scaled, m);
      inv_worst = std::max(inv_worst, std::abs(b - a) / a);
    }
  }
  res.pass = spread_worst <= 3.0 && inv_worst <= 1e-6;
  res.measured = detail.str() + "; rescale drift " + num(inv_worst);
  res.threshold = "spread <= 3x; drift <= 1e-6";
  return res;
}

// --- criterion 7: lemma suite ----------------------------------------------------
CriterionResult criterion_lemma_suite() {
  CriterionResult res;
  res.id = 7;
  res.name = "metric equivalence / ball growth / cutoff checks + sensitivity";
  Grid2 grid = Grid2::unit(64);
  FlowSpec spec = grid_spec(FlowKind::VolumeNormalizedL2, 1e-6);
  FlowSpec rspec = spec;
  rspec.controls.state_stride = 2;
  GridTrajectory traj = run_grid_flow(random_metric(grid, 99, 0.25, 4), rspec, 1e-4);

  auto eq = metric_equivalence_check(traj, 0.0, traj.t_last());
  bool eq_pass = eq.pass;

  Node center{32, 32};
  bool ball_pass = true;
  for (double t : {0.25 * traj.t_last(), traj.t_last()})
    ball_pass = ball_pass && ball_growth_check(traj, center, 0.2, t).pass;

  CutoffFunction gamma = make_cutoff(traj.states.front(), center, 0.12);
  auto cut = cutoff_evolution_check(traj, gamma);
  bool cut_pass = cut.pass;

  // sensitivity counterexamples on an exactly shrinking synthetic family
  const double c = 12.0;
  std::vector<double> times;
  std::vector<MetricField2> states;
  for (int k = 0; k <= 24; ++k) {
    double t = k / 24.0;
    times.push_back(t);
    states.push_back(state_scaled(MetricField2::flat(grid), std::exp(-c * t)));
  }
  GridTrajectory synth =
      make_synthetic_grid_trajectory(grid_spec(FlowKind::L2Flow, 1e-8), times, states,
                                     TerminationStatus::Completed);
  double a_true = c * std::sqrt(2.0);
  bool eq_true = metric_equivalence_check(synth, 0.0, 1.0, a_true).pass;
  bool eq_halved = metric_equivalence_check(synth, 0.0, 1.0, 0.5 * a_true).pass;
  bool ball_true = ball_growth_check(synth, center, 0.2, 1.0, a_true).pass;
  bool ball_halved = ball_growth_check(synth, center, 0.2, 1.0, 0.5 * a_true).pass;
  CutoffFunction gs = make_cutoff(states.front(), center, 0.12);
  bool cut_true = cutoff_evolution_check(synth, gs, 1.0, a_true, 0.0).pass;
  bool cut_shrunk = cutoff_evolution_check(synth, gs, 0.1, a_true, 0.0).pass;

  bool sensitivity = !eq_halved && !ball_halved && !cut_shrunk;
  bool truths = eq_true && ball_true && cut_true;
  res.pass = eq_pass && ball_pass && cut_pass && sensitivity && truths;
  res.measured = std::string("run: eq ") + (eq_pass ? "pass" : "FAIL") + ", ball " +
                 (ball_pass ? "pass" : "FAIL") + ", cutoff " + (cut_pass ? "pass" : "FAIL") +
                 "; sensitivity " + (sensitivity ? "detected" : "MISSED") + "; exact bounds " +
                 (truths ? "pass" : "FAIL");
  res.threshold = "all pass; all counterexamples fail";
  return res;
}

// --- criterion 8: local Sobolev family --------------------------------------------
CriterionResult criterion_sobolev_family(std::ostream* log) {
  CriterionResult res;
  res.id = 8;
  res.name = "local Sobolev monitor: m=1 constant bounded across family";
  Node center{32, 32};
  double lo = 1e300, hi = 0.0;
  for (double amp : {0.04, 0.08, 0.16}) {
    Grid2 grid = Grid2::unit(64);
    FlowSpec spec = grid_spec(FlowKind::L2Flow, 1e-5);
    spec.controls.state_stride = 8;
    GridTrajectory traj = run_grid_flow(random_metric(grid, 2024, amp, 12), spec, 6e-3);
    double cst = local_sobolev_monitor(traj, center, 0.1, 1);
    if (log) *log << "  sobolev amp=" << amp << ": " << cst << "\n";
    lo = std::min(lo, cst);
    hi = std::max(hi, cst);
  }
  double spread = hi / lo;
  res.pass = spread <= 3.0;
  res.measured = "spread " + num(spread);
  res.threshold = "<= 3x";
  return res;
}

// --- criterion 9: normalization correspondence --------------------------------------
CriterionResult criterion_correspondence() {
  CriterionResult res;
  res.id = 9;
  res.name = "normalized flow = rescaled unnormalized flow (Ftilde match)";
  MetricField2 g0 = conformal_bump_metric(Grid2::unit(64), 0.12, 1);
  GridTrajectory raw = run_grid_flow(g0, grid_spec(FlowKind::L2Flow, 1e-8), 0.12);
  GridTrajectory mapped = normalization_correspondence(raw);
  GridTrajectory direct = run_grid_flow(g0, grid_spec(FlowKind::VolumeNormalizedL2, 1e-8), 0.1);

  // volume constancy of the mapped trajectory
  double vol0 = volume(mapped.states.front());
  double vdrift = 0.0;
  for (const auto& st : mapped.states)
    vdrift = std::max(vdrift, std::abs(volume(st) - vol0) / vol0);

  // Ftilde series match over the overlap of [0, 0.1]
  double worst = 0.0;
  double t_hi = std::min(0.1, std::min(mapped.t_last(), direct.t_last()));
  auto ftilde_of = [](const GridTrajectory& tr, double t) {
    MetricField2 g = tr.interpolate(t);
    return normalized_energy(g, 2);
  };
  for (int k = 0; k <= 24; ++k) {
    double t = t_hi * k / 24.0;
    double a = ftilde_of(mapped, t);
    double d = ftilde_of(direct, t);
    worst = std::max(worst, std::abs(a - d) / std::abs(d));
  }
  res.pass = worst <= 1e-4 && vdrift <= 1e-8;
  res.measured = "Ftilde rel " + num(worst) + "; vol drift " + num(vdrift);
  res.threshold = "<= 1e-4; <= 1e-8";
  return res;
}

// --- criterion 10: linearized principal symbol ---------------------------------------
CriterionResult criterion_principal_symbol() {
  CriterionResult res;
  res.id = 10;
  res.name = "high-frequency modes decay like exp(-|xi|^4 t)";
  Grid2 grid = Grid2::unit(64);
  const double eps = 1e-4;
  MetricField2 g0 = MetricField2::flat(grid);
  for (int m = 1; m <= 3; ++m)
    for (int i = 0; i < grid.n1; ++i)
      for (int j = 0; j < grid.n2; ++j)
        g0.g22(i, j) += eps * std::cos(2.0 * M_PI * m * grid.x(i) / grid.len1);

  double xi1 = 2.0 * M_PI / grid.len1;
  double t_end = 1.0 / std::pow(xi1, 4);  // one e-folding of the slowest mode
  FlowSpec spec = grid_spec(FlowKind::L2Flow, 1e-9);
  GridTrajectory traj = run_grid_flow(g0, spec, t_end);

  auto mode_amp = [&](const MetricField2& g, int m) {
    double acc = 0.0;
    for (int i = 0; i < grid.n1; ++i)
      acc += (g.g22(i, 0) - 1.0) * std::cos(2.0 * M_PI * m * grid.x(i) / grid.len1);
    return 2.0 * acc / grid.n1;
  };
  double worst = 0.0;
  for (int m = 1; m <= 3; ++m) {
    double xi = 2.0 * M_PI * m / grid.len1;
    double tm = 1.0 / std::pow(xi, 4);
    MetricField2 gt = traj.interpolate(tm);
    double ratio = mode_amp(gt, m) / mode_amp(traj.states.front(), m);
    worst = std::max(worst, std::abs(ratio * M_E - 1.0));
  }
  res.pass = worst <= 0.05;
  res.measured = "worst deviation " + num(worst);
  res.threshold = "<= 0.05";
  return res;
}

// --- criterion 11: classifier mechanics ------------------------------------------------
CriterionResult criterion_classifiers() {
  CriterionResult res;
  res.id = 11;
  res.name = "classifier mechanics: blowup, collapse, Calabi decay";
  Grid2 grid = Grid2::unit(64);

  // synthetic (T - t) g0: curvature blows up like (T-t)^{-1}; geometric spacing
  // with ratio 10^{1/3} puts exact-decade reference points on the record grid
  const double T = 1.0;
  MetricField2 gc = conformal_bump_metric(grid, 0.3, 1);
  std::vector<double> times;
  std::vector<MetricField2> states;
  const double q = std::pow(10.0, 1.0 / 3.0);
  for (int k = 0; k <= 24; ++k) {
    double gap = std::pow(q, -k);
    times.push_back(T - gap);
    states.push_back(state_scaled(gc, gap));
  }
  GridTrajectory blow = make_synthetic_grid_trajectory(
      grid_spec(FlowKind::L2Flow, 1e-8), times, states, TerminationStatus::SingularityCandidate);
  auto rep = singularity_detector(blow);
  bool blow_ok = rep.verdict == SingularityVerdict::SingularityCandidate &&
                 std::abs(rep.blowup_time - T) <= 1e-6 * T;

  // synthetic diag(e^{-t}, 1): systole collapses like e^{-t/2}
  std::vector<double> ctimes;
  std::vector<MetricField2> cstates;
  for (int k = 0; k <= 40; ++k) {
    double tt = 8.0 * k / 40.0;
    MetricField2 g(grid);
    g.g11 = Plane::Constant(grid.n1, grid.n2, std::exp(-tt));
    g.g22 = Plane::Ones(grid.n1, grid.n2);
    ctimes.push_back(tt);
    cstates.push_back(g);
  }
  GridTrajectory coll = make_synthetic_grid_trajectory(
      grid_spec(FlowKind::VolumeNormalizedL2, 1e-8), ctimes, cstates, TerminationStatus::Completed);
  auto crep = nonsingular_classifier(coll);
  bool coll_ok = crep.verdict == NonsingularVerdict::Collapsing;

  // Calabi small-data decay run
  Grid2 cg = Grid2::unit(64);
  FlowSpec cspec;
  cspec.kind = FlowKind::SurfaceCalabi;
  cspec.geometry = GeometryKind::TorusGrid;
  cspec.controls.rel_tol = 1e-8;
  CalabiTrajectory cal =
      run_calabi_flow(random_calabi_potential(cg, 5, 0.3, 3), cspec, 5e-3);
  bool completed = cal.status == TerminationStatus::Completed;
  double s0 = cal.records.front().grad_norm;
  double sT = cal.records.back().grad_norm;
  bool decayed = sT < 0.5 * s0;
  bool tail_monotone = true;
  for (std::size_t k = cal.records.size() / 2 + 1; k < cal.records.size(); ++k)
    if (cal.records[k].grad_norm > cal.records[k - 1].grad_norm * (1.0 + 1e-6))
      tail_monotone = false;
  GridTrajectory cal_view;
  cal_view.spec = cal.spec;
  cal_view.status = cal.status;
  cal_view.state_times = cal.state_times;
  cal_view.records = cal.records;
  for (const auto& p : cal.states) cal_view.states.push_back(calabi_metric(p));
  auto srep = singularity_detector(cal_view);
  bool cal_ok = completed && decayed && tail_monotone &&
                srep.verdict == SingularityVerdict::NoSingularity;

  res.pass = blow_ok && coll_ok && cal_ok;
  res.measured = std::string("blowup ") + (blow_ok ? "ok" : "BAD") + " (T* " +
                 num(rep.blowup_time) + ", growth " + num(rep.growth_factor) + "); collapse " +
                 (coll_ok ? "ok" : to_string(crep.verdict)) + "; calabi " +
                 (cal_ok ? "ok" : "BAD");
  res.threshold = "SingularityCandidate @ T; Collapsing; Completed + decay";
  return res;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  std::vector<std::function<CriterionResult()>> crits = {
      [] { return criterion_gradient_identity(); },
      [] { return criterion_curvature_pipeline(); },
      [] { return criterion_volume_law(); },
      [] { return criterion_dissipation(); },
      [] { return criterion_product_spheres(); },
      [&] { return criterion_smoothing_family(opt.log); },
      [] { return criterion_lemma_suite(); },
      [&] { return criterion_sobolev_family(opt.log); },
      [] { return criterion_correspondence(); },
      [] { return criterion_principal_symbol(); },
      [] { return criterion_classifiers(); },
  };
  std::vector<CriterionResult> out;
  for (std::size_t k = 0; k < crits.size(); ++k) {
    if (opt.only > 0 && static_cast<int>(k + 1) != opt.only) continue;
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult r = crits[k]();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (opt.log)
      *opt.log << "[" << (r.pass ? "PASS" : "FAIL") << "] criterion " << r.id << ": " << r.name
               << " (" << r.measured << ") [" << num(r.seconds) << "s]\n";
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_acceptance_table(const std::vector<CriterionResult>& results) {
  std::ostringstream os;
  os << "id  verdict  criterion\n";
  for (const auto& r : results) {
    os << r.id << (r.id < 10 ? "   " : "  ") << (r.pass ? "PASS" : "FAIL") << "     " << r.name
       << "\n      measured: " << r.measured << "\n      threshold: " << r.threshold << "\n";
  }
  int passed = 0;
  for (const auto& r : results) passed += r.pass;
  os << passed << "/" << results.size() << " criteria passed\n";
  return os.str();
}

}  // namespace focf
