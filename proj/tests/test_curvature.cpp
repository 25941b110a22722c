#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "focf/curvature.hpp"
#include "focf/presets.hpp"
#include "focf/spectral.hpp"

using namespace focf;

namespace {

double sup(const Plane& p) { return p.abs().maxCoeff(); }

Plane smooth_u(const Grid2& g, std::uint64_t seed, double amp) {
  return amp * random_band_limited(g, seed, 3, 2.5);
}

}  // namespace

TEST_CASE("Christoffel symbols vanish on the flat torus") {
  MetricField2 g(Grid2::unit(32));
  CHECK(christoffel(g).sup_abs() <= 1e-13);
}

TEST_CASE("Christoffel symbols match the conformal closed form") {
  Grid2 gr = Grid2::unit(64);
  Plane u = smooth_u(gr, 13, 0.1);
  MetricField2 g = conformal_metric(gr, u);
  TensorField gamma = christoffel(g);
  Plane ux = spectral_partial(u, gr, 1), uy = spectral_partial(u, gr, 2);
  Plane du[2] = {ux, uy};
  double worst = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Plane expect = gr.zero();
        if (k == i) expect += du[j];
        if (k == j) expect += du[i];
        if (i == j) expect -= du[k];
        worst = std::max(worst, sup(gamma.at(k, i, j) - expect));
      }
  CHECK(worst <= 1e-10);
}

TEST_CASE("Christoffel symbols are translation equivariant") {
  Grid2 gr = Grid2::unit(32);
  MetricField2 g = random_metric(gr, 4, 0.3, 3);
  MetricField2 gt = g;
  for (Plane* p : {&gt.g11, &gt.g12, &gt.g22}) *p = translate(*p, 3, 7);
  TensorField a = christoffel(g), b = christoffel(gt);
  double worst = 0.0;
  for (int c = 0; c < a.size(); ++c) worst = std::max(worst, sup(translate(a.comp(c), 3, 7) - b.comp(c)));
  CHECK(worst <= 1e-10);
}

TEST_CASE("flat metric has an all-zero curvature bundle") {
  CurvatureBundle b = riemann(MetricField2(Grid2::unit(32)));
  CHECK(b.rm.sup_abs() <= 1e-12);
  CHECK(sup(b.scalar) <= 1e-12);
  CHECK(b.symmetry_defect == 0.0);
}

TEST_CASE("Gauss curvature matches the conformal oracle to spectral accuracy") {
  Grid2 gr = Grid2::unit(64);
  Plane u = smooth_u(gr, 21, 0.08);
  MetricField2 g = conformal_metric(gr, u);
  CurvatureBundle b = riemann(g);
  Plane k_oracle = -((-2.0 * u).exp()) * flat_laplacian(u, gr);
  CHECK(sup(0.5 * b.scalar - k_oracle) / sup(k_oracle) <= 1e-9);
  CHECK(b.symmetry_defect <= 1e-9);
}

TEST_CASE("curvature scaling: R_{ijkl} by c, |Rm|^2 by c^{-2}") {
  Grid2 gr = Grid2::unit(32);
  MetricField2 g = random_metric(gr, 8, 0.25, 3);
  MetricField2 cg = g;
  cg *= 2.0;
  CurvatureBundle a = riemann(g), b = riemann(cg);
  double worst = 0.0;
  for (int c = 0; c < a.rm.size(); ++c)
    worst = std::max(worst, sup(b.rm.comp(c) - 2.0 * a.rm.comp(c)));
  CHECK(worst / a.rm.sup_abs() <= 1e-12);
  CHECK(sup(b.norm_rm_sq - 0.25 * a.norm_rm_sq) / sup(a.norm_rm_sq) <= 1e-12);
}

TEST_CASE("storage symmetries and first Bianchi are exact after assembly") {
  Grid2 gr = Grid2::unit(32);
  CurvatureBundle b = riemann(random_metric(gr, 15, 0.3, 4));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          CHECK((b.rm.at(i, j, k, l) == -b.rm.at(j, i, k, l)).all());
          CHECK((b.rm.at(i, j, k, l) == -b.rm.at(i, j, l, k)).all());
          CHECK((b.rm.at(i, j, k, l) == b.rm.at(k, l, i, j)).all());
          Plane bianchi = b.rm.at(i, j, k, l) + b.rm.at(j, k, i, l) + b.rm.at(k, i, j, l);
          CHECK(sup(bianchi) == 0.0);
        }
}

TEST_CASE("two-dimensional identities: Rc = (s/2) g and Rcheck = 2 K^2 g") {
  auto defect_at = [](int n) {
    Grid2 gr = Grid2::unit(n);
    MetricField2 g = random_metric(gr, 33, 0.25, 4);
    CurvatureBundle b = riemann(g);
    TensorField gt = g.as_tensor();
    double scale = std::max(sup(b.scalar), 1e-300);
    double d1 = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        d1 = std::max(d1, sup(b.rc.at(i, j) - 0.5 * b.scalar * gt.at(i, j)));
    TensorField rch = rcheck(b, g);
    double d2 = 0.0;
    Plane k2 = 0.25 * b.scalar * b.scalar;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) d2 = std::max(d2, sup(rch.at(i, j) - 2.0 * k2 * gt.at(i, j)));
    return std::pair{d1 / scale, d2 / std::max(sup(k2), 1e-300)};
  };
  auto [rc64, rch64] = defect_at(64);
  CHECK(rc64 <= 1e-6);
  CHECK(rch64 <= 1e-6);
  auto [rc128, rch128] = defect_at(128);
  CHECK(rc128 <= 1e-6 / 16.0);
  CHECK(rch128 <= 1e-6 / 16.0);
}

TEST_CASE("Rcheck agrees with a brute-force contraction and scales by c^{-1}") {
  Grid2 gr = Grid2::unit(32);
  MetricField2 g = random_metric(gr, 44, 0.3, 3);
  CurvatureBundle b = riemann(g);
  TensorField rch = rcheck(b, g);

  TensorField inv = metric_inverse(g);
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Plane brute = gr.zero();
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
          for (int r = 0; r < 2; ++r)
            for (int pp = 0; pp < 2; ++pp)
              for (int qq = 0; qq < 2; ++qq)
                for (int rr = 0; rr < 2; ++rr)
                  brute += b.rm.at(i, p, q, r) * b.rm.at(j, pp, qq, rr) * inv.at(p, pp) *
                           inv.at(q, qq) * inv.at(r, rr);
      worst = std::max(worst, sup(rch.at(i, j) - brute));
    }
  CHECK(worst / rch.sup_abs() <= 1e-12);

  MetricField2 cg = g;
  cg *= 2.0;
  CurvatureBundle b2 = riemann(cg);
  TensorField rch2 = rcheck(b2, cg);
  double w2 = 0.0;
  for (int c = 0; c < rch.size(); ++c) w2 = std::max(w2, sup(rch2.comp(c) - 0.5 * rch.comp(c)));
  CHECK(w2 / rch.sup_abs() <= 1e-12);
}

TEST_CASE("covariant derivative: constants, metric compatibility") {
  Grid2 gr = Grid2::unit(32);
  MetricField2 g = random_metric(gr, 50, 0.3, 3);
  TensorField gamma = christoffel(g);
  TensorField c(gr, 0);
  c.comp(0) = Plane::Constant(gr.n1, gr.n2, 2.5);
  CHECK(covariant_derivative(c, gamma).sup_abs() <= 1e-12);
  CHECK(covariant_derivative(g.as_tensor(), gamma).sup_abs() <= 1e-10);
}

TEST_CASE("Ricci identity on a covector") {
  Grid2 gr = Grid2::unit(64);
  MetricField2 g = random_metric(gr, 52, 0.2, 3);
  CurvatureBundle b = riemann(g);
  TensorField omega(gr, 1);
  omega.at(0) = random_band_limited(gr, 71, 3, 2.5);
  omega.at(1) = random_band_limited(gr, 72, 3, 2.5);
  TensorField dd = covariant_derivative(covariant_derivative(omega, b.gamma), b.gamma);
  double worst = 0.0, scale = dd.sup_abs();
  for (int a = 0; a < 2; ++a)
    for (int bb = 0; bb < 2; ++bb)
      for (int c = 0; c < 2; ++c) {
        Plane anti = dd.at(a, bb, c) - dd.at(bb, a, c);
        Plane expect = gr.zero();
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l)
            expect -= b.ginv.at(k, l) * b.rm.at(a, bb, c, l) * omega.at(k);
        worst = std::max(worst, sup(anti - expect));
      }
  CHECK(worst / scale <= 1e-9);
}

TEST_CASE("rough Laplacian and bilaplacian reduce to flat symbols") {
  Grid2 gr(64, 64, 2.0, 1.0);
  MetricField2 g(gr);
  TensorField f(gr, 0);
  for (int i = 0; i < gr.n1; ++i)
    for (int j = 0; j < gr.n2; ++j) f.comp(0)(i, j) = std::sin(2 * M_PI * gr.x(i) / gr.len1);
  double k2 = std::pow(2 * M_PI / gr.len1, 2);
  TensorField lap = rough_laplacian(f, g);
  CHECK(sup(lap.comp(0) + k2 * f.comp(0)) / k2 <= 1e-10);
  TensorField lap2 = bilaplacian(f, g);
  CHECK(sup(lap2.comp(0) - k2 * k2 * f.comp(0)) / (k2 * k2) <= 1e-9);
  // Lap g = 0 (metric compatibility again, through the second derivative path)
  MetricField2 rg = random_metric(gr, 61, 0.25, 3);
  CHECK(rough_laplacian(rg.as_tensor(), rg).sup_abs() <= 1e-7);
}

TEST_CASE("conformal scalar Laplacian identity in 2d") {
  Grid2 gr = Grid2::unit(64);
  Plane u = smooth_u(gr, 77, 0.1);
  MetricField2 g = conformal_metric(gr, u);
  TensorField f(gr, 0);
  f.comp(0) = random_band_limited(gr, 78, 3, 2.5);
  TensorField lap = rough_laplacian(f, g);
  Plane expect = (-2.0 * u).exp() * flat_laplacian(f.comp(0), gr);
  CHECK(sup(lap.comp(0) - expect) / sup(expect) <= 1e-9);
}

TEST_CASE("derivative cap raises a valence overflow") {
  MetricField2 g = random_metric(Grid2::unit(16), 3, 0.2, 2);
  CHECK_THROWS_AS(nabla_k_rm(g, kDerivCap + 1), Error);
}

TEST_CASE("scaling chain for |nabla^k Rm|^2") {
  Grid2 gr = Grid2::unit(32);
  MetricField2 g = random_metric(gr, 90, 0.25, 3);
  MetricField2 cg = g;
  cg *= 2.0;
  CurvatureBundle a = riemann(g), b = riemann(cg);
  for (int k = 0; k <= 2; ++k) {
    Plane na = contract_norm_sq(nabla_k_rm(a, k), g, a.ginv);
    Plane nb = contract_norm_sq(nabla_k_rm(b, k), cg, b.ginv);
    double factor = std::pow(2.0, -(2.0 + k));
    CHECK(sup(nb - factor * na) / sup(na) <= 1e-9);
  }
}

TEST_CASE("blowup gauge f_m: flat, scaling, direct assembly") {
  Grid2 gr = Grid2::unit(32);
  CHECK(sup(f_m_field(MetricField2(gr), 2)) <= 1e-6);  // machine-noise curvature only

  MetricField2 g = random_metric(gr, 95, 0.25, 3);
  CurvatureBundle b = riemann(g);
  Plane fm = f_m_field(g, b, 2);
  TensorField d1 = nabla_k_rm(b, 1), d2 = nabla_k_rm(b, 2);
  Plane direct = contract_norm_sq(d1, g, b.ginv).sqrt().pow(2.0 / 3.0) +
                 contract_norm_sq(d2, g, b.ginv).sqrt().pow(0.5);
  CHECK(sup(fm - direct) / sup(direct) <= 1e-12);

  MetricField2 cg = g;
  cg *= 2.0;
  Plane fm2 = f_m_field(cg, 2);
  CHECK(sup(fm2 - 0.5 * fm) / sup(fm) <= 1e-9);
}

TEST_CASE("Gauss-Bonnet on the torus for random SPD metrics") {
  for (std::uint64_t seed : {101, 202, 303}) {
    MetricField2 g = random_metric(Grid2::unit(64), seed, 0.3, 4);
    CurvatureBundle b = riemann(g);
    Plane k = 0.5 * b.scalar;
    CHECK(std::abs(integrate(k, g)) <= 1e-8 * integrate(k.abs(), g));
  }
}
