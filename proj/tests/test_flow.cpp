#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "focf/diagnostics.hpp"
#include "focf/flow.hpp"
#include "focf/presets.hpp"

using namespace focf;

namespace {

FlowSpec spec_of(FlowKind kind, double tol) {
  FlowSpec s;
  s.kind = kind;
  s.geometry = GeometryKind::TorusGrid;
  s.controls.rel_tol = tol;
  s.controls.dt_init = 1e-8;
  return s;
}

double metric_gap(const MetricField2& a, const MetricField2& b) {
  return std::max({(a.g11 - b.g11).abs().maxCoeff(), (a.g12 - b.g12).abs().maxCoeff(),
                   (a.g22 - b.g22).abs().maxCoeff()});
}

// explicit RK4 on the metric flow, used as the one-step reference
MetricField2 rk4_reference(const MetricField2& g0, FlowKind kind, double t_total, int nsteps) {
  MetricField2 g = g0;
  double dt = t_total / nsteps;
  for (int s = 0; s < nsteps; ++s) {
    TensorField k1 = grid_flow_velocity(g, kind, false);
    TensorField k2 = grid_flow_velocity(add_scaled(g, 0.5 * dt, k1), kind, false);
    TensorField k3 = grid_flow_velocity(add_scaled(g, 0.5 * dt, k2), kind, false);
    TensorField k4 = grid_flow_velocity(add_scaled(g, dt, k3), kind, false);
    TensorField sum = k1;
    sum += 2.0 * k2;
    sum += 2.0 * k3;
    sum += k4;
    g = add_scaled(g, dt / 6.0, sum);
  }
  return g;
}

}  // namespace

TEST_CASE("the flat torus is stationary for any step size") {
  Grid2 grid = Grid2::unit(32);
  MetricField2 flat(grid);
  TensorField v = grid_flow_velocity(flat, FlowKind::L2Flow, false);
  for (double dt : {1e-6, 1e-2, 1.0}) {
    MetricField2 out = imex_step_raw(flat, v, dt, imex_split_constant(flat));
    CHECK(metric_gap(out, flat) <= 1e-12);
  }
  GridTrajectory traj = run_grid_flow(flat, spec_of(FlowKind::L2Flow, 1e-8), 0.01);
  CHECK(traj.status == TerminationStatus::Completed);
  CHECK(metric_gap(traj.states.back(), flat) <= 1e-12);
}

TEST_CASE("one-step defect of the raw linearly implicit step is O(dt^2)") {
  Grid2 grid = Grid2::unit(32);
  MetricField2 g = conformal_bump_metric(grid, 0.01, 1);
  double c = imex_split_constant(g);
  auto defect = [&](double dt) {
    TensorField v = grid_flow_velocity(g, FlowKind::L2Flow, false);
    MetricField2 imex = imex_step_raw(g, v, dt, c);
    MetricField2 ref = rk4_reference(g, FlowKind::L2Flow, dt, 16);
    return metric_gap(imex, ref);
  };
  double d1 = defect(1e-6), d2 = defect(5e-7);
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.5));  // order-1 scheme
}

TEST_CASE("accepted grid states track a tight explicit reference") {
  Grid2 grid = Grid2::unit(32);
  MetricField2 g0 = conformal_bump_metric(grid, 0.05, 1);
  GridTrajectory traj = run_grid_flow(g0, spec_of(FlowKind::L2Flow, 1e-9), 2e-4);
  MetricField2 ref = rk4_reference(g0, FlowKind::L2Flow, 2e-4, 4000);
  CHECK(metric_gap(traj.states.back(), ref) <= 1e-7);
}

TEST_CASE("rejection at the dt floor flags a singularity candidate") {
  Grid2 grid = Grid2::unit(32);
  FlowSpec spec = spec_of(FlowKind::L2Flow, 1e-15);
  spec.controls.dt_init = 1e-2;
  spec.controls.dt_min = 1e-3;
  GridTrajectory traj = run_grid_flow(random_metric(grid, 3, 0.2, 4), spec, 1.0);
  CHECK(traj.status == TerminationStatus::SingularityCandidate);
}

TEST_CASE("Calabi flow decays toward the flat metric and completes") {
  Grid2 grid = Grid2::unit(64);
  FlowSpec spec;
  spec.kind = FlowKind::SurfaceCalabi;
  spec.geometry = GeometryKind::TorusGrid;
  spec.controls.rel_tol = 1e-7;
  CalabiTrajectory traj = run_calabi_flow(random_calabi_potential(grid, 5, 0.3, 3), spec, 2e-3);
  CHECK(traj.status == TerminationStatus::Completed);
  CHECK(traj.records.back().grad_norm < 0.2 * traj.records.front().grad_norm);
}

TEST_CASE("a degenerating potential ends as PotentialDegenerate, not a crash") {
  Grid2 grid = Grid2::unit(32);
  // start near the edge of the class: h dips close to zero
  CalabiPotential p = random_calabi_potential(grid, 9, 0.995, 2);
  FlowSpec spec;
  spec.kind = FlowKind::SurfaceCalabi;
  spec.geometry = GeometryKind::TorusGrid;
  spec.controls.rel_tol = 1e-7;
  spec.controls.dt_min = 1e-9;
  CalabiTrajectory traj = run_calabi_flow(p, spec, 1.0);
  CHECK((traj.status == TerminationStatus::Completed ||
         traj.status == TerminationStatus::PotentialDegenerate));
}

TEST_CASE("volume grows at rate F/2 along the n = 2 unnormalized flow") {
  GridTrajectory traj = run_grid_flow(conformal_bump_metric(Grid2::unit(64), 0.1, 1),
                                      spec_of(FlowKind::L2Flow, 1e-8), 1e-3);
  for (std::size_t k = 1; k < traj.records.size(); ++k) {
    const auto& a = traj.records[k - 1];
    const auto& b = traj.records[k];
    double rate = (b.vol - a.vol) / (b.t - a.t);
    double expect = 0.25 * (a.energy + b.energy);
    CHECK(std::abs(rate - expect) <= 1e-3 * expect);
  }
}

TEST_CASE("parabolic rescaling: identity, exact scaling, residual band") {
  GridTrajectory traj = run_grid_flow(conformal_bump_metric(Grid2::unit(32), 0.08, 1),
                                      spec_of(FlowKind::L2Flow, 1e-7), 5e-4);
  GridTrajectory ident = parabolic_rescale(traj, {1.0, 0.0});
  CHECK(ident.state_times == traj.state_times);
  CHECK(metric_gap(ident.states.back(), traj.states.back()) == 0.0);

  GridTrajectory doubled = parabolic_rescale(traj, {2.0, 0.0});
  CHECK(doubled.records.front().sup_rm == doctest::Approx(traj.records.front().sup_rm / 2.0).epsilon(1e-12));
  CHECK(doubled.state_times.back() == doctest::Approx(4.0 * traj.state_times.back()));

  double r0 = *std::max_element(flow_residual(traj).begin(), flow_residual(traj).end());
  auto rs = flow_residual(doubled);
  double r1 = *std::max_element(rs.begin(), rs.end());
  CHECK(r1 <= 2.0 * r0 + 1e-14);

  CHECK_THROWS_AS(parabolic_rescale(traj, {2.0, 10.0}), RangeEmpty);
}

TEST_CASE("interior-base rescaling keeps negative times and the scaling chain") {
  GridTrajectory traj = run_grid_flow(conformal_bump_metric(Grid2::unit(32), 0.08, 1),
                                      spec_of(FlowKind::L2Flow, 1e-7), 5e-4);
  double t0 = traj.state_times[traj.state_times.size() / 2];
  GridTrajectory res = parabolic_rescale(traj, {0.5, t0});
  CHECK(res.state_times.front() < 0.0);
  CHECK(res.state_times.back() > 0.0);
  // the state at rescaled time 0 is lambda * g(t0)
  MetricField2 expect = state_scaled(traj.interpolate(t0), 0.5);
  MetricField2 got = res.interpolate(0.0);
  CHECK(metric_gap(got, expect) <= 1e-12);
}

TEST_CASE("flow residual: flat zero, tolerance tightening, fault injection") {
  MetricField2 flat(Grid2::unit(32));
  GridTrajectory ft = run_grid_flow(flat, spec_of(FlowKind::L2Flow, 1e-8), 1e-3);
  auto fr = flow_residual(ft);
  CHECK(*std::max_element(fr.begin(), fr.end()) <= 1e-12);

  MetricField2 g0 = conformal_bump_metric(Grid2::unit(32), 0.08, 1);
  GridTrajectory loose = run_grid_flow(g0, spec_of(FlowKind::L2Flow, 4e-6), 5e-4);
  GridTrajectory tight = run_grid_flow(g0, spec_of(FlowKind::L2Flow, 1e-6), 5e-4);
  auto rl = flow_residual(loose);
  auto rt = flow_residual(tight);
  double ml = *std::max_element(rl.begin(), rl.end());
  double mt = *std::max_element(rt.begin(), rt.end());
  CHECK(mt <= 0.6 * ml);

  GridTrajectory corrupted = loose;
  std::size_t mid = corrupted.states.size() / 2;
  corrupted.states[mid].g11 += 1e-3;
  auto rc = flow_residual(static_cast<const GridTrajectory&>(corrupted));
  std::vector<double> sorted = rc;
  std::sort(sorted.begin(), sorted.end());
  CHECK(*std::max_element(rc.begin(), rc.end()) >= 10.0 * sorted[sorted.size() / 2]);
}

TEST_CASE("normalization correspondence: identity at n = 4 semantics and n = 2 volume") {
  GridTrajectory raw = run_grid_flow(conformal_bump_metric(Grid2::unit(32), 0.1, 1),
                                     spec_of(FlowKind::L2Flow, 1e-7), 2e-3);
  GridTrajectory vn = normalization_correspondence(raw);
  CHECK(vn.spec.kind == FlowKind::VolumeNormalizedL2);
  double vol0 = volume(vn.states.front());
  for (const auto& st : vn.states) CHECK(std::abs(volume(st) - vol0) <= 1e-8 * vol0);
  // time reparametrization is monotone and contracts (volume grows at n = 2)
  for (std::size_t k = 1; k < vn.state_times.size(); ++k) {
    CHECK(vn.state_times[k] > vn.state_times[k - 1]);
    CHECK(vn.state_times[k] <= raw.state_times[k] + 1e-14);
  }
}

TEST_CASE("trajectory interpolation reproduces stored states") {
  GridTrajectory traj = run_grid_flow(conformal_bump_metric(Grid2::unit(32), 0.05, 1),
                                      spec_of(FlowKind::L2Flow, 1e-7), 2e-4);
  std::size_t k = traj.states.size() / 2;
  CHECK(metric_gap(traj.interpolate(traj.state_times[k]), traj.states[k]) <= 1e-13);
}

TEST_CASE("2-d derivative-sup shortcut agrees with the full tensor route") {
  MetricField2 g = random_metric(Grid2::unit(64), 77, 0.1, 3);
  CurvatureBundle b = riemann(g);
  auto fast = deriv_sups(g, b, 2);
  for (int k = 0; k <= 2; ++k) {
    TensorField w = nabla_k_rm(b, k);
    double full = std::sqrt(contract_norm_sq(w, g, b.ginv).maxCoeff());
    CHECK(fast[k] == doctest::Approx(full).epsilon(1e-6));
  }
}
