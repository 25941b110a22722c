#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "focf/functionals.hpp"
#include "focf/presets.hpp"
#include "focf/spectral.hpp"

using namespace focf;

namespace {

double sup(const Plane& p) { return p.abs().maxCoeff(); }

TensorField random_direction(const Grid2& grid, std::uint64_t seed, double amp) {
  TensorField h(grid, 2);
  h.at(0, 0) = amp * random_band_limited(grid, seed * 5 + 1, 3, 2.5);
  h.at(1, 1) = amp * random_band_limited(grid, seed * 5 + 2, 3, 2.5);
  Plane off = amp * random_band_limited(grid, seed * 5 + 3, 3, 2.5);
  h.at(0, 1) = off;
  h.at(1, 0) = off;
  return h;
}

}  // namespace

TEST_CASE("energy: flat torus is the zero of F and the scaling law holds") {
  MetricField2 flat(Grid2::unit(64));
  CHECK(energy(flat) <= 1e-20);

  MetricField2 g = random_metric(Grid2::unit(64), 7, 0.2, 3);
  MetricField2 cg = g;
  cg *= 2.0;
  CHECK(energy(cg) == doctest::Approx(0.5 * energy(g)).epsilon(1e-12));  // F(cg) = c^{-1} F, n=2
}

TEST_CASE("gradient vanishes on the flat torus") {
  CHECK(energy_gradient(MetricField2(Grid2::unit(64))).sup_abs() <= 1e-18);
}

TEST_CASE("variational identity against the finite difference of F") {
  for (int n : {32, 64}) {
    Grid2 grid = Grid2::unit(n);
    MetricField2 g = random_metric(grid, 7, 0.05, 3);
    TensorField grad = energy_gradient(g);
    const double eps = 1e-5;
    for (int k = 0; k < 3; ++k) {
      TensorField h = random_direction(grid, 100 + k, 0.01);
      double dfd = (energy(add_scaled(g, eps, h)) - energy(add_scaled(g, -eps, h))) / (2 * eps);
      double lhs = l2_pairing(grad, h, g);
      CHECK(std::abs(lhs - dfd) / std::abs(dfd) <= 1e-6);
    }
  }
}

TEST_CASE("the form-divergence term integrates to zero trace") {
  Grid2 grid = Grid2::unit(64);
  MetricField2 g = random_metric(grid, 31, 0.15, 3);
  CurvatureBundle b = riemann(g);
  TensorField dd = ricci_form_divergence(g, b);
  Plane tr = grid.zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) tr += b.ginv.at(i, j) * dd.at(i, j);
  double scale = integrate(tr.abs(), g);
  CHECK(std::abs(integrate(tr, g)) <= 1e-10 * scale);
}

TEST_CASE("normalized energy is scale invariant and equals F at n = 4") {
  MetricField2 g = random_metric(Grid2::unit(64), 9, 0.2, 3);
  double base = normalized_energy(g, 2);
  for (double c : {0.5, 2.0, 10.0}) {
    MetricField2 cg = g;
    cg *= c;
    CHECK(normalized_energy(cg, 2) == doctest::Approx(base).epsilon(1e-12));
  }
  CHECK(normalized_energy_from(3.7, 2.2, 4) == 3.7);
}

TEST_CASE("flow velocity: flat is stationary for both grid kinds") {
  MetricField2 flat(Grid2::unit(32));
  CHECK(grid_flow_velocity(flat, FlowKind::L2Flow, true).sup_abs() <= 1e-16);
  CHECK(grid_flow_velocity(flat, FlowKind::VolumeNormalizedL2, true).sup_abs() <= 1e-16);
}

TEST_CASE("volume rate identity: the first variation of Vol along the velocity") {
  // dVol/dt = (1/2) Int tr_g(dg/dt) dV must reproduce (4-n)/4 F under the
  // unnormalized flow and vanish under the normalized one (n = 2).
  Grid2 grid = Grid2::unit(64);
  MetricField2 g = random_metric(grid, 41, 0.15, 3);
  CurvatureBundle b = riemann(g);
  double f = energy(g, b);
  TensorField v = grid_flow_velocity(g, b, FlowKind::L2Flow, false);
  Plane tr = grid.zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) tr += b.ginv.at(i, j) * v.at(i, j);
  double rate = 0.5 * integrate(tr, g);
  CHECK(std::abs(rate - 0.5 * f) <= 1e-8 * f);

  TensorField vn = grid_flow_velocity(g, b, FlowKind::VolumeNormalizedL2, false);
  Plane trn = grid.zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) trn += b.ginv.at(i, j) * vn.at(i, j);
  CHECK(std::abs(0.5 * integrate(trn, g)) <= 1e-8 * f);
}

TEST_CASE("Calabi velocity: flat potential is stationary") {
  CalabiPotential p(Grid2::unit(64));
  CHECK(sup(calabi_velocity(p)) <= 1e-10);
}

TEST_CASE("Calabi mean scalar curvature obeys Gauss-Bonnet") {
  Grid2 grid = Grid2::unit(64);
  CalabiPotential p = random_calabi_potential(grid, 3, 0.4, 3);
  Plane h = calabi_conformal_factor(p);
  Plane s = -flat_laplacian(h.log(), grid) / h;
  MetricField2 g = calabi_metric(p);
  double sbar = integrate(s, g) / volume(g);
  CHECK(std::abs(sbar) <= 1e-8 * integrate(s.abs(), g) / volume(g));
}

TEST_CASE("Calabi velocity linearizes to -(1/2) Lap0^2 phi (Richardson)") {
  Grid2 grid = Grid2::unit(64);
  Plane phi_hat(grid.n1, grid.n2);
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j) phi_hat(i, j) = std::sin(2 * M_PI * grid.x(i));
  Plane lin = -0.5 * flat_bilaplacian(phi_hat, grid);
  auto deviation = [&](double eps) {
    CalabiPotential p(grid);
    p.phi = eps * phi_hat;
    Plane v = calabi_velocity(p);
    return sup(v / eps - lin);
  };
  double d4 = deviation(1e-4), d5 = deviation(1e-5);
  CHECK(d4 / d5 == doctest::Approx(10.0).epsilon(0.5));  // first-order remainder in eps
  CHECK(d5 <= 1e-3 * sup(lin));
}

TEST_CASE("degenerate potentials are rejected") {
  Grid2 grid = Grid2::unit(32);
  CalabiPotential p(grid);
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j)
      p.phi(i, j) = 0.2 * std::cos(2 * M_PI * grid.x(i));  // (1/2)Lap0 phi dips below -1
  CHECK_THROWS_AS(calabi_velocity(p), PotentialDegenerate);
  CHECK_THROWS_AS(calabi_metric(p), PotentialDegenerate);
}
