#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <fstream>

#include "focf/cutoff.hpp"
#include "focf/distance.hpp"
#include "focf/metric_ops.hpp"
#include "focf/presets.hpp"
#include "focf/snapshot.hpp"
#include "focf/spectral.hpp"

using namespace focf;

namespace {

Plane wave(const Grid2& g, double mx, double my, double phase = 0.0) {
  Plane f(g.n1, g.n2);
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j)
      f(i, j) = std::sin(2.0 * M_PI * (mx * g.x(i) / g.len1 + my * g.y(j) / g.len2) + phase);
  return f;
}

double sup(const Plane& p) { return p.abs().maxCoeff(); }

}  // namespace

TEST_CASE("spectral derivative of a constant vanishes") {
  Grid2 g = Grid2::unit(32);
  Plane c = Plane::Constant(32, 32, 3.7);
  CHECK(sup(spectral_partial(c, g, 1)) <= 1e-13);
  CHECK(sup(spectral_partial(c, g, 2, 4)) <= 1e-12);
}

TEST_CASE("spectral derivative matches the analytic sine derivative") {
  Grid2 g(64, 32, 2.0, 1.0);
  Plane f = wave(g, 1, 0);
  Plane df = spectral_partial(f, g, 1);
  double k = 2.0 * M_PI / g.len1;
  Plane expect = k * wave(g, 1, 0, M_PI / 2);  // cos
  CHECK(sup(df - expect) / k <= 1e-12);
}

TEST_CASE("spectral result matches 8th-order finite differences at O(h^8)") {
  // same band-limited continuum field on two grids; the FD error must drop by ~2^8
  auto err_at = [](int n) {
    Grid2 g = Grid2::unit(n);
    Plane f = random_band_limited(g, 11, 5, 4.0);
    Plane ds = spectral_partial(f, g, 1);
    Plane dfd = fd_partial(f, g, 1, 1, 8);
    return sup(ds - dfd);
  };
  double e32 = err_at(32), e64 = err_at(64);
  CHECK(e64 < 1e-3);
  CHECK(e32 / e64 > 100.0);  // nominal 256
}

TEST_CASE("mixed spectral partials commute") {
  Grid2 g = Grid2::unit(64);
  Plane f = random_band_limited(g, 3, 6, 4.0);
  Plane a = spectral_partial(spectral_partial(f, g, 1), g, 2);
  Plane b = spectral_partial(spectral_partial(f, g, 2), g, 1);
  CHECK(sup(a - b) <= 1e-10);
}

TEST_CASE("spectral operator rejects non-finite fields") {
  Grid2 g = Grid2::unit(8);
  Plane f = g.zero();
  f(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(spectral_partial(f, g, 1), NonFiniteField);
}

TEST_CASE("metric inverse on constant metrics") {
  Grid2 gr = Grid2::unit(8);
  MetricField2 g(gr);
  TensorField inv = metric_inverse(g);
  CHECK(sup(inv.at(0, 0) - 1.0) == 0.0);
  g.g11 = Plane::Constant(8, 8, 4.0);
  inv = metric_inverse(g);
  CHECK(sup(inv.at(0, 0) - 0.25) <= 1e-15);
  CHECK(sup(inv.at(1, 1) - 1.0) <= 1e-15);
}

TEST_CASE("metric inverse: multiplication oracle on random SPD fields") {
  Grid2 gr = Grid2::unit(32);
  MetricField2 g = random_metric(gr, 5, 0.4, 4);
  TensorField inv = metric_inverse(g);
  // direct per-node multiplication
  Plane e00 = g.g11 * inv.at(0, 0) + g.g12 * inv.at(1, 0);
  Plane e01 = g.g11 * inv.at(0, 1) + g.g12 * inv.at(1, 1);
  Plane e11 = g.g12 * inv.at(0, 1) + g.g22 * inv.at(1, 1);
  CHECK(sup(e00 - 1.0) <= 1e-12);
  CHECK(sup(e01) <= 1e-12);
  CHECK(sup(e11 - 1.0) <= 1e-12);
}

TEST_CASE("metric inverse names the first offending node") {
  Grid2 gr = Grid2::unit(8);
  MetricField2 g(gr);
  g.g12(3, 5) = 2.0;  // det < 0 there
  try {
    metric_inverse(g);
    FAIL("expected NonSPDMetric");
  } catch (const NonSPDMetric& e) {
    CHECK(e.i == 3);
    CHECK(e.j == 5);
  }
}

TEST_CASE("squared norms: zero tensor, scaling law, brute-force oracle") {
  Grid2 gr = Grid2::unit(16);
  MetricField2 g = random_metric(gr, 9, 0.3, 3);
  TensorField t(gr, 4);
  CHECK(sup(contract_norm_sq(t, g)) == 0.0);

  for (int c = 0; c < t.size(); ++c) t.comp(c) = random_band_limited(gr, 40 + c, 3, 2.0);
  Plane n2 = contract_norm_sq(t, g);
  CHECK((n2 >= 0.0).all());

  // brute-force quadruple-index loop with explicit inverse factors
  TensorField inv = metric_inverse(g);
  Plane brute = gr.zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q)
              for (int r = 0; r < 2; ++r)
                for (int s = 0; s < 2; ++s)
                  brute += inv.at(i, p) * inv.at(j, q) * inv.at(k, r) * inv.at(l, s) *
                           t.at(i, j, k, l) * t.at(p, q, r, s);
  CHECK(sup(n2 - brute) / sup(brute) <= 1e-12);
}

TEST_CASE("squared norm scaling under g -> c g") {
  Grid2 gr = Grid2::unit(16);
  MetricField2 g = random_metric(gr, 9, 0.3, 3);
  TensorField t(gr, 3);
  for (int c = 0; c < t.size(); ++c) t.comp(c) = random_band_limited(gr, 60 + c, 3, 2.0);
  MetricField2 cg = g;
  cg *= 2.0;
  Plane a = contract_norm_sq(t, g);
  Plane b = contract_norm_sq(t, cg);
  CHECK(sup(b - a / 8.0) / sup(a) <= 1e-15);  // c^{-3}, exact binary scaling
}

TEST_CASE("norms reject mismatched charts") {
  MetricField2 g(Grid2::unit(16));
  TensorField t(Grid2::unit(32), 2);
  CHECK_THROWS_AS(contract_norm_sq(t, g), ChartMismatch);
}

TEST_CASE("integration: flat volume and conformal scaling") {
  Grid2 gr(64, 32, 2.5, 1.5);
  MetricField2 g(gr);
  Plane one = Plane::Ones(gr.n1, gr.n2);
  CHECK(integrate(one, g) == doctest::Approx(2.5 * 1.5).epsilon(1e-14));
  MetricField2 cg = g;
  cg *= 3.0;
  CHECK(volume(cg) == doctest::Approx(3.0 * 2.5 * 1.5).epsilon(1e-14));  // c^{n/2}, n = 2
}

TEST_CASE("integration matches a separable quadrature oracle") {
  Grid2 gr = Grid2::unit(64);
  // f = a(x) b(y), sqrt(det g) = e^{2u} with separable u = p(x) + q(y)
  Plane u(gr.n1, gr.n2), f(gr.n1, gr.n2);
  for (int i = 0; i < gr.n1; ++i)
    for (int j = 0; j < gr.n2; ++j) {
      double x = gr.x(i), y = gr.y(j);
      u(i, j) = 0.15 * std::cos(2 * M_PI * x) + 0.1 * std::sin(2 * M_PI * y);
      f(i, j) = (2.0 + std::sin(2 * M_PI * x)) * (1.0 + 0.3 * std::cos(2 * M_PI * y));
    }
  MetricField2 g = conformal_metric(gr, u);
  // dense Simpson in 1-D for each factor
  auto simpson = [](auto fn) {
    const int n = 4096;
    double h = 1.0 / n, acc = 0.0;
    for (int k = 0; k < n; ++k) {
      double a = k * h, m = a + 0.5 * h, b = a + h;
      acc += h / 6.0 * (fn(a) + 4.0 * fn(m) + fn(b));
    }
    return acc;
  };
  double ix = simpson([](double x) {
    return (2.0 + std::sin(2 * M_PI * x)) * std::exp(0.3 * std::cos(2 * M_PI * x));
  });
  double iy = simpson([](double y) {
    return (1.0 + 0.3 * std::cos(2 * M_PI * y)) * std::exp(0.2 * std::sin(2 * M_PI * y));
  });
  CHECK(integrate(f, g) == doctest::Approx(ix * iy).epsilon(1e-10));
}

TEST_CASE("integration and norms are translation invariant") {
  Grid2 gr = Grid2::unit(32);
  MetricField2 g = random_metric(gr, 17, 0.3, 4);
  MetricField2 gt = g;
  gt.g11 = translate(g.g11, 5, -3);
  gt.g12 = translate(g.g12, 5, -3);
  gt.g22 = translate(g.g22, 5, -3);
  CHECK(volume(g) == doctest::Approx(volume(gt)).epsilon(1e-13));

  TensorField t(gr, 2);
  for (int c = 0; c < t.size(); ++c) t.comp(c) = random_band_limited(gr, 80 + c, 3, 2.0);
  TensorField tt(gr, 2);
  for (int c = 0; c < t.size(); ++c) tt.comp(c) = translate(t.comp(c), 5, -3);
  Plane a = contract_norm_sq(t, g);
  Plane b = contract_norm_sq(tt, gt);
  CHECK(sup(translate(a, 5, -3) - b) / std::max(sup(a), 1e-300) <= 1e-12);
}

TEST_CASE("grid distances: flat neighbors, wrap loops, triangle inequality") {
  Grid2 gr(32, 64, 1.0, 4.0);
  MetricField2 g(gr);
  CHECK(grid_distance(g, {0, 0}, {1, 0}) == doctest::Approx(gr.h1()).epsilon(1e-12));
  CHECK(wrap_systole(g) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(systole_upper_bound(g) == doctest::Approx(1.0).epsilon(1e-12));

  MetricField2 rg = random_metric(Grid2::unit(16), 23, 0.4, 3);
  Plane d0 = grid_distance_map(rg, {0, 0});
  Plane d1 = grid_distance_map(rg, {7, 4});
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      CHECK(d0(i, j) <= d0(7, 4) + d1(i, j) + 1e-12);
}

TEST_CASE("grid distance matches the 1-D conformal geodesic integral") {
  Grid2 gr = Grid2::unit(64);
  Plane u(gr.n1, gr.n2);
  for (int i = 0; i < gr.n1; ++i)
    for (int j = 0; j < gr.n2; ++j) u(i, j) = 0.3 * std::cos(2 * M_PI * gr.x(i));
  MetricField2 g = conformal_metric(gr, u);
  const int itarget = 20;
  double got = grid_distance(g, {0, 5}, {itarget, 5});
  const int n = 20000;
  double h = gr.x(itarget) / n, acc = 0.0;
  for (int k = 0; k < n; ++k) acc += std::exp(0.3 * std::cos(2 * M_PI * (k + 0.5) * h)) * h;
  CHECK(std::abs(got - acc) <= 3.0 * gr.hmax() * std::exp(0.3));
}

TEST_CASE("cutoff bump: plateau, support, range") {
  Grid2 gr = Grid2::unit(64);
  MetricField2 g(gr);
  CutoffFunction cf = make_cutoff(g, {32, 32}, 0.12);
  Plane dist = grid_distance_map(g, {32, 32});
  for (int i = 0; i < gr.n1; ++i)
    for (int j = 0; j < gr.n2; ++j) {
      CHECK(cf.gamma(i, j) >= 0.0);
      CHECK(cf.gamma(i, j) <= 1.0);
      if (dist(i, j) <= 0.12) CHECK(cf.gamma(i, j) == 1.0);
      if (dist(i, j) >= 0.24) CHECK(cf.gamma(i, j) == 0.0);
    }
}

TEST_CASE("snapshot roundtrip preserves every byte of the planes") {
  Grid2 gr(16, 24, 1.0, 2.0);
  MetricField2 g = random_metric(gr, 31, 0.3, 3);
  auto path = std::filesystem::temp_directory_path() / "focf_test_snapshot.focf";
  write_snapshot(path, g);
  MetricField2 r = read_snapshot(path);
  CHECK(r.grid == g.grid);
  CHECK((r.g11 == g.g11).all());
  CHECK((r.g12 == g.g12).all());
  CHECK((r.g22 == g.g22).all());
  std::filesystem::remove(path);
}

TEST_CASE("snapshot rejects bad magic") {
  auto path = std::filesystem::temp_directory_path() / "focf_test_bad.focf";
  std::ofstream(path) << "not a snapshot";
  CHECK_THROWS_AS(read_snapshot(path), Error);
  std::filesystem::remove(path);
}
