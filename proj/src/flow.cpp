#include "focf/flow.hpp"

#include "focf/distance.hpp"
#include "focf/spectral.hpp"

namespace focf {

const char* to_string(TerminationStatus s) {
  switch (s) {
    case TerminationStatus::Completed: return "Completed";
    case TerminationStatus::SingularityCandidate: return "SingularityCandidate";
    case TerminationStatus::PotentialDegenerate: return "PotentialDegenerate";
    case TerminationStatus::StepCollapse: return "StepCollapse";
  }
  return "?";
}

double imex_split_constant(const MetricField2& g) {
  // lambda_max(g^{-1}) = 1 / lambda_min(g) per node
  double lmax = 0.0;
  for (int i = 0; i < g.grid.n1; ++i)
    for (int j = 0; j < g.grid.n2; ++j) {
      double a = g.g11(i, j), b = g.g22(i, j), c = g.g12(i, j);
      double lmin = 0.5 * (a + b - std::sqrt((a - b) * (a - b) + 4.0 * c * c));
      if (lmin <= 0.0) throw NonSPDMetric(i, j);
      lmax = std::max(lmax, 1.0 / lmin);
    }
  return (2.0 * lmax) * (2.0 * lmax);
}

namespace {

Plane implicit_smooth(const Plane& f, const Grid2& grid, double dt, double c) {
  return apply_laplacian_symbol(
      f, grid, [dt, c](double k2) { return 1.0 / (1.0 + dt * c * k2 * k2); });
}

double scaled_err(std::initializer_list<std::pair<const Plane*, const Plane*>> pairs,
                  double rel_tol, double abs_tol) {
  double acc = 0.0;
  long n = 0;
  for (auto [a, b] : pairs) {
    double sc = abs_tol + rel_tol * std::max(a->abs().maxCoeff(), b->abs().maxCoeff());
    acc += ((*a - *b) / sc).square().sum();
    n += a->size();
  }
  return std::sqrt(acc / n);
}

double clamp_factor(double err, double expo) {
  double f = 0.9 * std::pow(std::max(err, 1e-300), -expo);
  return std::clamp(f, 0.2, 5.0);
}

// post-pass over records: running sup of |dtg| and the smoothing ratios
void finalize_records(std::vector<DiagnosticsRecord>& recs) {
  double a_run = 0.0, k_run = 0.0;
  for (auto& r : recs) {
    a_run = std::max(a_run, r.sup_dtg);
    k_run = std::max(k_run, r.sup_rm);
    r.a_observed = a_run;
    if (r.t > 0.0) {
      double base = k_run + 1.0 / std::sqrt(r.t);
      if (r.deriv_depth >= 1) r.smoothing_ratio_m1 = r.sup_drm[1] / std::pow(base, 1.5);
      if (r.deriv_depth >= 2) r.smoothing_ratio_m2 = r.sup_drm[2] / std::pow(base, 2.0);
    }
  }
}

}  // namespace

MetricField2 imex_step_raw(const MetricField2& g, const TensorField& velocity, double dt,
                           double c_split) {
  MetricField2 out = g;
  Plane v11 = dt * velocity.at(0, 0);
  Plane v12 = dt * 0.5 * (velocity.at(0, 1) + velocity.at(1, 0));
  Plane v22 = dt * velocity.at(1, 1);
  out.g11 += implicit_smooth(v11, g.grid, dt, c_split);
  out.g12 += implicit_smooth(v12, g.grid, dt, c_split);
  out.g22 += implicit_smooth(v22, g.grid, dt, c_split);
  return out;
}

namespace {

DiagnosticsRecord grid_record_with(const MetricField2& g, const CurvatureBundle& b,
                                   const TensorField& v, const FlowSpec& spec, double t,
                                   double dt) {
  DiagnosticsRecord r;
  r.t = t;
  r.dt = dt;
  r.energy = energy(g, b);
  r.vol = volume(g);
  r.energy_norm = normalized_energy_from(r.energy, r.vol, spec.n());
  r.sup_rm = std::sqrt(std::max(0.0, b.norm_rm_sq.maxCoeff()));
  r.deriv_depth = std::min(spec.controls.deriv_sup_max, kDerivCap);
  auto sups = deriv_sups(g, b, r.deriv_depth);
  for (int k = 0; k <= r.deriv_depth; ++k) r.sup_drm[k] = sups[k];
  double vnorm = l2_norm(v, g);
  r.grad_norm = (spec.kind == FlowKind::VolumeNormalizedL2)
                    ? std::pow(r.vol, (4.0 - spec.n()) / spec.n()) * vnorm
                    : vnorm;
  r.sup_dtg = std::sqrt(std::max(0.0, contract_norm_sq(v, g, b.ginv).maxCoeff()));
  TensorField dv = covariant_derivative(v, b.gamma);
  r.sup_grad_dtg = std::sqrt(std::max(0.0, contract_norm_sq(dv, g, b.ginv).maxCoeff()));
  r.systole = systole_upper_bound(g);
  return r;
}

}  // namespace

DiagnosticsRecord grid_record(const MetricField2& g, const FlowSpec& spec, double t, double dt) {
  CurvatureBundle b = riemann(g);
  TensorField v = grid_flow_velocity(g, b, spec.kind, spec.controls.dealias);
  return grid_record_with(g, b, v, spec, t, dt);
}

GridTrajectory run_grid_flow(const MetricField2& g0, const FlowSpec& spec, double t_end) {
  spec.validate();
  if (spec.geometry != GeometryKind::TorusGrid) throw Error("grid flow needs TorusGrid geometry");
  g0.require_spd();
  const auto& ctl = spec.controls;

  GridTrajectory traj;
  traj.spec = spec;
  MetricField2 g = g0;
  CurvatureBundle bundle = riemann(g);
  TensorField vel = grid_flow_velocity(g, bundle, spec.kind, ctl.dealias);

  double t = 0.0, dt = ctl.dt_init;
  double c_split = imex_split_constant(g), c_anchor = c_split;
  long accepted = 0;

  auto push_state = [&](bool force) {
    if (force || accepted % ctl.state_stride == 0) {
      traj.state_times.push_back(t);
      traj.states.push_back(g);
    }
  };
  traj.records.push_back(grid_record_with(g, bundle, vel, spec, 0.0, 0.0));
  push_state(true);

  traj.status = TerminationStatus::StepCollapse;  // overwritten on proper exit
  while (accepted < ctl.max_steps) {
    if (t >= t_end * (1.0 - 1e-14)) {
      traj.status = TerminationStatus::Completed;
      break;
    }
    double dt_try = std::min(dt, t_end - t);
    if (ctl.dt_max > 0.0) dt_try = std::min(dt_try, ctl.dt_max);

    bool accepted_step = false;
    int rejects = 0;
    while (!accepted_step) {
      bool bad = false;
      double err = 0.0;
      MetricField2 cand(g.grid);
      try {
        MetricField2 full = imex_step_raw(g, vel, dt_try, c_split);
        MetricField2 half1 = imex_step_raw(g, vel, 0.5 * dt_try, c_split);
        if (!half1.is_spd()) throw NonSPDMetric(0, 0);
        CurvatureBundle bh = riemann(half1);
        TensorField vh = grid_flow_velocity(half1, bh, spec.kind, ctl.dealias);
        MetricField2 half2 = imex_step_raw(half1, vh, 0.5 * dt_try, c_split);
        err = scaled_err({{&full.g11, &half2.g11}, {&full.g12, &half2.g12},
                          {&full.g22, &half2.g22}},
                         ctl.rel_tol, ctl.abs_tol);
        if (err <= 1.0) {
          cand = lincomb(2.0, half2, -1.0, full);
          if (!cand.is_spd()) bad = true;
        } else {
          bad = true;
        }
      } catch (const Error&) {
        bad = true;
        err = 4.0;  // force a halving-scale cut
      }
      if (!bad) {
        t += dt_try;
        g = cand;
        bundle = riemann(g);
        vel = grid_flow_velocity(g, bundle, spec.kind, ctl.dealias);
        ++accepted;
        traj.records.push_back(grid_record_with(g, bundle, vel, spec, t, dt_try));
        push_state(false);
        dt = dt_try * clamp_factor(err, 0.5);
        double c_now = imex_split_constant(g);
        if (c_now > 2.0 * c_anchor || c_now < 0.5 * c_anchor) c_anchor = c_split = c_now;
        accepted_step = true;
      } else {
        dt_try *= std::min(1.0, clamp_factor(err, 0.5));
        if (++rejects > 60) {
          traj.status = TerminationStatus::StepCollapse;
          goto done;
        }
        if (dt_try < ctl.dt_min) {
          traj.status = TerminationStatus::SingularityCandidate;
          goto done;
        }
      }
    }
  }
done:
  if (traj.state_times.back() != t) {
    traj.state_times.push_back(t);
    traj.states.push_back(g);
  }
  finalize_records(traj.records);
  if (ctl.state_stride == 1) flow_residual(traj);
  return traj;
}

CalabiTrajectory run_calabi_flow(const CalabiPotential& p0, const FlowSpec& spec, double t_end) {
  spec.validate();
  if (spec.kind != FlowKind::SurfaceCalabi) throw Error("Calabi runner needs the Calabi kind");
  const auto& ctl = spec.controls;

  auto record_of = [&](const CalabiPotential& p, double t, double dt) {
    MetricField2 g = calabi_metric(p);
    DiagnosticsRecord r;
    CurvatureBundle b = riemann(g);
    Plane v = calabi_velocity(p);
    r.t = t;
    r.dt = dt;
    r.energy = energy(g, b);
    r.vol = volume(g);
    r.energy_norm = normalized_energy_from(r.energy, r.vol, 2);
    r.sup_rm = std::sqrt(std::max(0.0, b.norm_rm_sq.maxCoeff()));
    r.deriv_depth = std::min(ctl.deriv_sup_max, kDerivCap);
    auto sups = deriv_sups(g, b, r.deriv_depth);
    for (int k = 0; k <= r.deriv_depth; ++k) r.sup_drm[k] = sups[k];
    r.grad_norm = std::sqrt(std::max(0.0, integrate(v.square(), g)));  // ||s - sbar||_L2
    Plane dth = 0.5 * flat_laplacian(v, p.grid);
    Plane h = calabi_conformal_factor(p);
    r.sup_dtg = std::sqrt(2.0) * (dth / h).abs().maxCoeff();
    TensorField w(p.grid, 2);
    w.at(0, 0) = dth;
    w.at(1, 1) = dth;
    TensorField dw = covariant_derivative(w, b.gamma);
    r.sup_grad_dtg = std::sqrt(std::max(0.0, contract_norm_sq(dw, g, b.ginv).maxCoeff()));
    r.systole = systole_upper_bound(g);
    return r;
  };

  CalabiTrajectory traj;
  traj.spec = spec;
  CalabiPotential p = p0;
  Plane vel = calabi_velocity(p);

  double t = 0.0, dt = ctl.dt_init;
  double c_split = imex_split_constant(calabi_metric(p)), c_anchor = c_split;
  long accepted = 0;

  auto push_state = [&](bool force) {
    if (force || accepted % ctl.state_stride == 0) {
      traj.state_times.push_back(t);
      traj.states.push_back(p);
    }
  };
  traj.records.push_back(record_of(p, 0.0, 0.0));
  push_state(true);

  auto raw = [&](const CalabiPotential& q, const Plane& v, double dtt) {
    CalabiPotential out = q;
    out.phi += implicit_smooth(dtt * v, q.grid, dtt, c_split);
    return out;
  };

  traj.status = TerminationStatus::StepCollapse;
  while (accepted < ctl.max_steps) {
    if (t >= t_end * (1.0 - 1e-14)) {
      traj.status = TerminationStatus::Completed;
      break;
    }
    double dt_try = std::min(dt, t_end - t);
    if (ctl.dt_max > 0.0) dt_try = std::min(dt_try, ctl.dt_max);

    bool ok = false;
    int rejects = 0;
    bool degenerate_seen = false;
    while (!ok) {
      bool bad = false;
      double err = 0.0;
      CalabiPotential cand;
      try {
        CalabiPotential full = raw(p, vel, dt_try);
        CalabiPotential half1 = raw(p, vel, 0.5 * dt_try);
        Plane vh = calabi_velocity(half1);
        CalabiPotential half2 = raw(half1, vh, 0.5 * dt_try);
        err = scaled_err({{&full.phi, &half2.phi}}, ctl.rel_tol, ctl.abs_tol);
        if (err <= 1.0) {
          cand = half2;
          state_axpy(cand, 1.0, half2);
          state_axpy(cand, -1.0, full);
          calabi_metric(cand);  // positivity gate
        } else {
          bad = true;
        }
      } catch (const PotentialDegenerate&) {
        bad = true;
        degenerate_seen = true;
        err = 4.0;
      }
      if (!bad) {
        t += dt_try;
        p = cand;
        vel = calabi_velocity(p);
        ++accepted;
        traj.records.push_back(record_of(p, t, dt_try));
        push_state(false);
        dt = dt_try * clamp_factor(err, 0.5);
        double c_now = imex_split_constant(calabi_metric(p));
        if (c_now > 2.0 * c_anchor || c_now < 0.5 * c_anchor) c_anchor = c_split = c_now;
        ok = true;
      } else {
        dt_try *= std::min(1.0, clamp_factor(err, 0.5));
        if (++rejects > 60) {
          traj.status = TerminationStatus::StepCollapse;
          goto done;
        }
        if (dt_try < ctl.dt_min) {
          traj.status = degenerate_seen ? TerminationStatus::PotentialDegenerate
                                        : TerminationStatus::SingularityCandidate;
          goto done;
        }
      }
    }
  }
done:
  if (traj.state_times.back() != t) {
    traj.state_times.push_back(t);
    traj.states.push_back(p);
  }
  finalize_records(traj.records);
  return traj;
}

namespace {

hom::Family family_of(GeometryKind g) {
  if (g == GeometryKind::ProductSpheres) return hom::Family::ProductSpheres;
  if (g == GeometryKind::MilnorFrame) return hom::Family::MilnorFrame;
  throw Error("not a homogeneous geometry");
}

DiagnosticsRecord hom_record(hom::Family fam, const Eigen::VectorXd& l, const FlowSpec& spec,
                             double t, double dt) {
  DiagnosticsRecord r;
  r.t = t;
  r.dt = dt;
  r.energy = hom::energy(fam, l);
  r.vol = hom::volume(fam, l);
  r.energy_norm = normalized_energy_from(r.energy, r.vol, spec.n());
  r.sup_rm = hom::sup_rm(fam, l);
  r.deriv_depth = std::min(spec.controls.deriv_sup_max, kDerivCap);
  auto sups = hom::deriv_sups(fam, l, r.deriv_depth);
  for (int k = 0; k <= r.deriv_depth; ++k) r.sup_drm[k] = sups[k];
  Eigen::VectorXd grad = (spec.kind == FlowKind::VolumeNormalizedL2)
                             ? hom::normalized_gradient(fam, l)
                             : hom::gradient(fam, l);
  r.grad_norm = hom::family_norm(fam, l, grad);
  Eigen::VectorXd v = hom::velocity(fam, l, spec.kind);
  r.sup_dtg = hom::family_pointwise_norm(fam, l, v);
  r.sup_grad_dtg = hom::grad_dtg_norm(fam, l, v);
  r.systole = hom::systole_proxy(fam, l);
  r.ncoeffs = static_cast<int>(l.size());
  for (int i = 0; i < r.ncoeffs; ++i) r.coeffs[i] = l(i);
  return r;
}

}  // namespace

CoeffTrajectory run_homogeneous_flow(hom::Family family, const Eigen::VectorXd& l0,
                                     const FlowSpec& spec, double t_end) {
  spec.validate();
  hom::require_valid(family, l0);
  const auto& ctl = spec.controls;

  // Dormand-Prince 5(4), FSAL
  static const double A[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double B5[7] = {35.0 / 384,      0.0,        500.0 / 1113, 125.0 / 192,
                               -2187.0 / 6784, 11.0 / 84,  0.0};
  static const double B4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695, 393.0 / 640,
                               -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

  auto rhs = [&](const Eigen::VectorXd& y) { return hom::velocity(family, y, spec.kind); };

  CoeffTrajectory traj;
  traj.spec = spec;
  Eigen::VectorXd y = l0;
  double t = 0.0, dt = std::max(ctl.dt_init, 1e-10);
  long accepted = 0;

  auto push_state = [&](bool force) {
    if (force || accepted % ctl.state_stride == 0) {
      traj.state_times.push_back(t);
      traj.states.push_back(y);
    }
  };
  traj.records.push_back(hom_record(family, y, spec, 0.0, 0.0));
  push_state(true);

  Eigen::VectorXd k[7];
  k[0] = rhs(y);
  traj.status = TerminationStatus::StepCollapse;
  while (accepted < ctl.max_steps) {
    if (t >= t_end * (1.0 - 1e-14)) {
      traj.status = TerminationStatus::Completed;
      break;
    }
    double dt_try = std::min(dt, t_end - t);
    if (ctl.dt_max > 0.0) dt_try = std::min(dt_try, ctl.dt_max);

    bool ok = false;
    int rejects = 0;
    while (!ok) {
      bool bad = false;
      double err = 0.0;
      Eigen::VectorXd y5;
      Eigen::VectorXd k_try[7];
      k_try[0] = k[0];
      try {
        for (int s = 1; s < 7; ++s) {
          Eigen::VectorXd ys = y;
          for (int q = 0; q < s; ++q) ys += dt_try * A[s][q] * k_try[q];
          if (!(ys.array() > 0.0).all()) throw Error("left the positive cone");
          k_try[s] = rhs(ys);
        }
        y5 = y;
        Eigen::VectorXd y4 = y;
        for (int s = 0; s < 7; ++s) {
          y5 += dt_try * B5[s] * k_try[s];
          y4 += dt_try * B4[s] * k_try[s];
        }
        if (!(y5.array() > 0.0).all()) throw Error("left the positive cone");
        double acc = 0.0;
        for (int i = 0; i < y.size(); ++i) {
          double sc = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y(i)), std::abs(y5(i)));
          double e = (y5(i) - y4(i)) / sc;
          acc += e * e;
        }
        err = std::sqrt(acc / y.size());
        if (err > 1.0) bad = true;
      } catch (const Error&) {
        bad = true;
        err = 4.0;
      }
      if (!bad) {
        t += dt_try;
        y = y5;
        k[0] = k_try[6];  // FSAL
        ++accepted;
        traj.records.push_back(hom_record(family, y, spec, t, dt_try));
        push_state(false);
        double f = 0.9 * std::pow(std::max(err, 1e-300), -0.2);
        dt = dt_try * std::clamp(f, 0.2, 5.0);
        ok = true;
      } else {
        double f = 0.9 * std::pow(std::max(err, 1e-300), -0.2);
        dt_try *= std::min(1.0, std::clamp(f, 0.2, 5.0));
        if (++rejects > 60) {
          traj.status = TerminationStatus::StepCollapse;
          goto done;
        }
        if (dt_try < ctl.dt_min) {
          traj.status = TerminationStatus::SingularityCandidate;
          goto done;
        }
      }
    }
  }
done:
  if (traj.state_times.back() != t) {
    traj.state_times.push_back(t);
    traj.states.push_back(y);
  }
  finalize_records(traj.records);
  return traj;
}

GridTrajectory parabolic_rescale(const GridTrajectory& traj, const RescaleParams& p) {
  if (traj.states.empty()) throw RangeEmpty();
  if (!(p.lambda > 0.0)) throw Error("lambda must be positive");
  if (p.t0 < traj.t_first() - 1e-14 || p.t0 > traj.t_last() + 1e-14) throw RangeEmpty();

  GridTrajectory out;
  out.spec = traj.spec;
  out.status = traj.status;
  const double l2 = p.lambda * p.lambda;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    double tt = (traj.state_times[k] - p.t0) * l2;
    out.state_times.push_back(tt);
    out.states.push_back(state_scaled(traj.states[k], p.lambda));
  }
  for (std::size_t k = 0; k < out.states.size(); ++k) {
    double dt = (k == 0) ? 0.0 : out.state_times[k] - out.state_times[k - 1];
    out.records.push_back(grid_record(out.states[k], out.spec, out.state_times[k], dt));
  }
  finalize_records(out.records);
  flow_residual(out);
  return out;
}

std::vector<double> flow_residual(const GridTrajectory& traj) {
  if (traj.states.size() < 2) throw Error("flow_residual needs at least two states");
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
    double dt = traj.state_times[k + 1] - traj.state_times[k];
    MetricField2 mid = traj.interpolate(traj.state_times[k] + 0.5 * dt);
    TensorField v = grid_flow_velocity(mid, traj.spec.kind, traj.spec.controls.dealias);
    TensorField diff(mid.grid, 2);
    diff.at(0, 0) = (traj.states[k + 1].g11 - traj.states[k].g11) / dt - v.at(0, 0);
    diff.at(1, 1) = (traj.states[k + 1].g22 - traj.states[k].g22) / dt - v.at(1, 1);
    Plane off = (traj.states[k + 1].g12 - traj.states[k].g12) / dt -
                0.5 * (v.at(0, 1) + v.at(1, 0));
    diff.at(0, 1) = off;
    diff.at(1, 0) = off;
    out.push_back(l2_norm(diff, mid));
  }
  return out;
}

std::vector<double> flow_residual(GridTrajectory& traj) {
  std::vector<double> res = flow_residual(static_cast<const GridTrajectory&>(traj));
  // backfill: records and states align when every accepted state was stored
  if (traj.records.size() == traj.states.size()) {
    for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) traj.records[k + 1].residual = res[k];
  }
  return res;
}

std::vector<double> flow_residual(const CoeffTrajectory& traj) {
  if (traj.states.size() < 2) throw Error("flow_residual needs at least two states");
  hom::Family fam = family_of(traj.spec.geometry);
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
    double dt = traj.state_times[k + 1] - traj.state_times[k];
    Eigen::VectorXd mid = traj.interpolate(traj.state_times[k] + 0.5 * dt);
    Eigen::VectorXd v = hom::velocity(fam, mid, traj.spec.kind);
    Eigen::VectorXd diff = (traj.states[k + 1] - traj.states[k]) / dt - v;
    out.push_back(hom::family_norm(fam, mid, diff));
  }
  return out;
}

GridTrajectory normalization_correspondence(const GridTrajectory& traj) {
  if (traj.states.size() < 2) throw RangeEmpty();
  const int n = traj.spec.n();
  if (n == 4) return traj;  // the flows coincide

  GridTrajectory out;
  out.spec = traj.spec;
  out.spec.kind = FlowKind::VolumeNormalizedL2;
  out.status = traj.status;

  double vol0 = volume(traj.states.front());
  if (!(vol0 > 0.0)) throw VolumeNonPositive();
  std::vector<double> c(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    double vol = volume(traj.states[k]);
    if (!(vol > 0.0)) throw VolumeNonPositive();
    c[k] = std::pow(vol0 / vol, 2.0 / n);
  }
  double ttilde = 0.0;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    if (k > 0) {
      double dt = traj.state_times[k] - traj.state_times[k - 1];
      ttilde += 0.5 * (c[k - 1] * c[k - 1] + c[k] * c[k]) * dt;
    }
    out.state_times.push_back(ttilde);
    out.states.push_back(state_scaled(traj.states[k], c[k]));
  }
  for (std::size_t k = 0; k < out.states.size(); ++k) {
    double dt = (k == 0) ? 0.0 : out.state_times[k] - out.state_times[k - 1];
    out.records.push_back(grid_record(out.states[k], out.spec, out.state_times[k], dt));
  }
  finalize_records(out.records);
  return out;
}

GridTrajectory make_synthetic_grid_trajectory(const FlowSpec& spec,
                                              const std::vector<double>& times,
                                              const std::vector<MetricField2>& states,
                                              TerminationStatus status) {
  if (times.size() != states.size() || times.empty()) throw Error("bad synthetic trajectory");
  GridTrajectory traj;
  traj.spec = spec;
  traj.status = status;
  traj.state_times = times;
  traj.states = states;
  for (std::size_t k = 0; k < states.size(); ++k) {
    double dt = (k == 0) ? 0.0 : times[k] - times[k - 1];
    traj.records.push_back(grid_record(states[k], spec, times[k], dt));
  }
  finalize_records(traj.records);
  return traj;
}

}  // namespace focf
