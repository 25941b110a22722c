#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "focf/flow.hpp"
#include "focf/homogeneous.hpp"

using namespace focf;
namespace h = focf::hom;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}
Eigen::VectorXd vec3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("round product of unit spheres: F = 64 pi^2 and a critical point") {
  auto inv = h::product_sphere_invariants(1.0, 1.0);
  CHECK(inv.energy == doctest::Approx(64.0 * M_PI * M_PI).epsilon(1e-14));
  CHECK(inv.vol == doctest::Approx(16.0 * M_PI * M_PI).epsilon(1e-14));
  CHECK(inv.grad_g1 == 0.0);
  CHECK(inv.grad_g2 == 0.0);
  CHECK(inv.norm_rm_sq == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("product-sphere energy is scale invariant (n = 4)") {
  double base = h::product_sphere_energy(1.3, 0.4);
  for (double c : {0.5, 2.0, 7.0})
    CHECK(h::product_sphere_energy(c * 1.3, c * 0.4) == doctest::Approx(base).epsilon(1e-14));
}

TEST_CASE("flat limit: one huge factor dominates the energy") {
  double a2 = 1e6;
  CHECK(h::product_sphere_energy(a2, 1.0) ==
        doctest::Approx(32.0 * M_PI * M_PI * a2).epsilon(1e-5));
}

TEST_CASE("Milnor frame at the round point reproduces the unit 3-sphere") {
  auto inv = h::milnor_invariants(1.0, 1.0, 1.0);
  CHECK(inv.sec12 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(inv.sec23 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(inv.sec31 == doctest::Approx(1.0).epsilon(1e-14));
  // constant curvature K: |Rm|^2 = 2 n (n-1) K^2 = 12
  CHECK(inv.norm_rm_sq == doctest::Approx(12.0).epsilon(1e-14));
  CHECK(inv.vol == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-14));
  CHECK(inv.scalar == doctest::Approx(6.0).epsilon(1e-14));
  // symmetric space at the round point: all curvature derivatives vanish
  auto sups = h::deriv_sups(h::Family::MilnorFrame, vec3(1, 1, 1), 3);
  CHECK(sups[1] <= 1e-13);
  CHECK(sups[2] <= 1e-13);
}

TEST_CASE("Berger collapse: fiber shrinking keeps curvature bounded") {
  // l3 -> 0 with l1 = l2 = 1: sectionals 4 - 3 l3, l3, l3; |Rm|^2 -> 64
  for (double eps : {1e-2, 1e-4}) {
    auto inv = h::milnor_invariants(1.0, 1.0, eps);
    CHECK(inv.sec12 == doctest::Approx(4.0 - 3.0 * eps).epsilon(1e-12));
    CHECK(inv.sec23 == doctest::Approx(eps).epsilon(1e-10));
    CHECK(inv.sec31 == doctest::Approx(eps).epsilon(1e-10));
  }
  CHECK(h::milnor_invariants(1.0, 1.0, 1e-6).norm_rm_sq == doctest::Approx(64.0).epsilon(1e-4));
}

TEST_CASE("two-axis collapse genuinely blows curvature up") {
  double a = h::milnor_invariants(1e-2, 1e-2, 1.0).norm_rm_sq;
  double b = h::milnor_invariants(1e-3, 1e-3, 1.0).norm_rm_sq;
  CHECK(b / a > 5e3);  // ~ 36/eps^4 growth
  CHECK(b > 1e10);
}

TEST_CASE("curvature scaling on the Milnor family") {
  double base = h::milnor_norm_rm_sq(1.0, 1.7, 0.6);
  CHECK(h::milnor_norm_rm_sq(2.0, 3.4, 1.2) == doctest::Approx(0.25 * base).epsilon(1e-14));
}

TEST_CASE("restricted gradient matches the closed form on product spheres") {
  for (auto [a2, b2] : {std::pair{1.0, 4.0}, {0.7, 0.7}, {2.5, 0.3}}) {
    Eigen::VectorXd l = vec2(a2, b2);
    Eigen::VectorXd v = h::gradient(h::Family::ProductSpheres, l);
    Eigen::VectorXd w = h::product_sphere_gradient_closed_form(l);
    CHECK((v - w).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("restricted gradient passes the finite-difference pairing oracle") {
  auto check_family = [](h::Family fam, const Eigen::VectorXd& l) {
    Eigen::VectorXd v = h::gradient(fam, l);
    for (int i = 0; i < l.size(); ++i) {
      double eps = 1e-6 * l(i);
      Eigen::VectorXd lp = l, lm = l;
      lp(i) += eps;
      lm(i) -= eps;
      double dfd = (h::energy(fam, lp) - h::energy(fam, lm)) / (2 * eps);
      // dF(e_i) = <v, e_i> = Vol d_i v_i / l_i^2
      double pairing = h::volume(fam, l) * h::block_dim(fam) * v(i) / (l(i) * l(i));
      CHECK(std::abs(dfd - pairing) / std::abs(dfd) <= 1e-10);
    }
  };
  check_family(h::Family::ProductSpheres, vec2(1.0, 4.0));
  check_family(h::Family::MilnorFrame, vec3(1.0, 1.7, 0.6));
}

TEST_CASE("radii equalize: the coefficient velocity has the consistent a^2 factor") {
  Eigen::VectorXd l = vec2(1.0, 4.0);
  Eigen::VectorXd v = h::velocity(h::Family::ProductSpheres, l, FlowKind::L2Flow);
  // dl1/dt = l1 (1/l1^2 - 1/l2^2)
  CHECK(v(0) == doctest::Approx(1.0 * (1.0 - 1.0 / 16.0)).epsilon(1e-12));
  CHECK(v(0) > 0.0);
  CHECK(v(1) < 0.0);
}

TEST_CASE("flow from (1,4) converges to the equal-radii critical point") {
  FlowSpec spec;
  spec.kind = FlowKind::L2Flow;
  spec.geometry = GeometryKind::ProductSpheres;
  spec.controls.rel_tol = 1e-9;
  spec.controls.dt_init = 1e-4;
  spec.controls.state_stride = 16;
  CoeffTrajectory traj = run_homogeneous_flow(h::Family::ProductSpheres, vec2(1.0, 4.0), spec, 200.0);
  CHECK(traj.status == TerminationStatus::Completed);
  Eigen::VectorXd lend = traj.states.back();
  CHECK(std::abs(lend(0) - lend(1)) / lend(1) <= 1e-3);
  // F strictly decreasing, volume conserved at n = 4
  double v0 = traj.records.front().vol;
  for (std::size_t k = 1; k < traj.records.size(); ++k) {
    CHECK(traj.records[k].energy <= traj.records[k - 1].energy * (1.0 + 1e-10));
    CHECK(std::abs(traj.records[k].vol - v0) <= 1e-7 * v0);
  }
  // limit value: l1 l2 invariant = 4 so l -> 2, Ftilde -> 64 pi^2
  CHECK(traj.records.back().energy_norm == doctest::Approx(64.0 * M_PI * M_PI).epsilon(1e-6));
}

TEST_CASE("parabolic scale invariance of the n = 4 coefficient dynamics") {
  FlowSpec spec;
  spec.kind = FlowKind::L2Flow;
  spec.geometry = GeometryKind::ProductSpheres;
  spec.controls.rel_tol = 1e-11;
  spec.controls.dt_init = 1e-5;
  const double c = 2.0, t0 = 0.5;
  CoeffTrajectory base = run_homogeneous_flow(h::Family::ProductSpheres, vec2(1.0, 4.0), spec, t0);
  CoeffTrajectory scaled =
      run_homogeneous_flow(h::Family::ProductSpheres, c * vec2(1.0, 4.0), spec, c * c * t0);
  Eigen::VectorXd expect = c * base.states.back();
  CHECK((scaled.states.back() - expect).cwiseAbs().maxCoeff() <= 1e-7 * expect.maxCoeff());
}

TEST_CASE("volume-normalized flow conserves volume on the Milnor family (n = 3)") {
  FlowSpec spec;
  spec.kind = FlowKind::VolumeNormalizedL2;
  spec.geometry = GeometryKind::MilnorFrame;
  spec.controls.rel_tol = 1e-9;
  spec.controls.dt_init = 1e-5;
  CoeffTrajectory traj =
      run_homogeneous_flow(h::Family::MilnorFrame, vec3(1.0, 1.3, 0.7), spec, 1.0);
  CHECK(traj.status == TerminationStatus::Completed);
  double v0 = traj.records.front().vol;
  for (const auto& r : traj.records) CHECK(std::abs(r.vol - v0) <= 1e-7 * v0);
  // Ftilde nonincreasing along the normalized flow
  for (std::size_t k = 1; k < traj.records.size(); ++k)
    CHECK(traj.records[k].energy_norm <= traj.records[k - 1].energy_norm * (1.0 + 1e-9));
}

TEST_CASE("frame recursion: derivative sups scale like c^{-(2+k)/2}") {
  Eigen::VectorXd l = vec3(1.0, 1.7, 0.6);
  auto a = h::deriv_sups(h::Family::MilnorFrame, l, 2);
  auto b = h::deriv_sups(h::Family::MilnorFrame, 2.0 * l, 2);
  for (int k = 0; k <= 2; ++k)
    CHECK(b[k] == doctest::Approx(a[k] * std::pow(2.0, -(2.0 + k) / 2.0)).epsilon(1e-12));
}
