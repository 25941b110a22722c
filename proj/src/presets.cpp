#include "focf/presets.hpp"

#include "focf/spectral.hpp"

namespace focf {

std::uint64_t NormalSampler::next_u64() {
  // splitmix64; stable everywhere
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double NormalSampler::operator()() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  while (u1 <= 1e-300) u1 = (next_u64() >> 11) * 0x1.0p-53;
  double u2 = (next_u64() >> 11) * 0x1.0p-53;
  double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * M_PI * u2);
  have_spare_ = true;
  return r * std::cos(2.0 * M_PI * u2);
}

MetricField2 conformal_metric(const Grid2& grid, const Plane& u) {
  MetricField2 g(grid);
  Plane e = (2.0 * u).exp();
  g.g11 = e;
  g.g22 = e;
  g.g12 = grid.zero();
  return g;
}

MetricField2 conformal_bump_metric(const Grid2& grid, double amplitude, int mode) {
  Plane u(grid.n1, grid.n2);
  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j)
      u(i, j) = amplitude * std::cos(2.0 * M_PI * mode * grid.x(i) / grid.len1) *
                std::cos(2.0 * M_PI * mode * grid.y(j) / grid.len2);
  return conformal_metric(grid, u);
}

Plane random_band_limited(const Grid2& grid, std::uint64_t seed, int max_mode, double taper_mode) {
  NormalSampler rng(seed);
  Plane f = grid.zero();
  for (int m1 = -max_mode; m1 <= max_mode; ++m1) {
    for (int m2 = -max_mode; m2 <= max_mode; ++m2) {
      if (m1 == 0 && m2 == 0) continue;
      if (m1 < 0 || (m1 == 0 && m2 < 0)) continue;  // one coefficient per conjugate pair
      double taper = std::exp(-(m1 * m1 + m2 * m2) / (taper_mode * taper_mode));
      double a = rng() * taper, b = rng() * taper;
      for (int i = 0; i < grid.n1; ++i) {
        double px = 2.0 * M_PI * m1 * grid.x(i) / grid.len1;
        for (int j = 0; j < grid.n2; ++j) {
          double ph = px + 2.0 * M_PI * m2 * grid.y(j) / grid.len2;
          f(i, j) += a * std::cos(ph) + b * std::sin(ph);
        }
      }
    }
  }
  double s = f.abs().maxCoeff();
  if (s > 0.0) f /= s;
  return f;
}

MetricField2 random_metric(const Grid2& grid, std::uint64_t seed, double amplitude, int max_mode) {
  if (!(amplitude < 1.0)) throw Error("random metric amplitude must be < 1");
  double taper = 0.75 * max_mode;
  Plane h11 = random_band_limited(grid, seed * 3 + 0, max_mode, taper);
  Plane h12 = random_band_limited(grid, seed * 3 + 1, max_mode, taper);
  Plane h22 = random_band_limited(grid, seed * 3 + 2, max_mode, taper);
  double s = std::max({h11.abs().maxCoeff(), h12.abs().maxCoeff(), h22.abs().maxCoeff()});
  MetricField2 g(grid);
  g.g11 = 1.0 + amplitude / s * h11;
  g.g12 = amplitude / s * h12;
  g.g22 = 1.0 + amplitude / s * h22;
  g.require_spd();
  return g;
}

CalabiPotential random_calabi_potential(const Grid2& grid, std::uint64_t seed, double amplitude,
                                        int max_mode) {
  if (!(amplitude < 1.0)) throw Error("Calabi amplitude must be < 1 to keep the class");
  CalabiPotential p(grid);
  Plane phi = random_band_limited(grid, seed, max_mode, 0.75 * max_mode);
  Plane lap = 0.5 * flat_laplacian(phi, grid);
  double s = lap.abs().maxCoeff();
  if (s > 0.0) phi *= amplitude / s;
  p.phi = phi;
  calabi_metric(p);  // validates positivity
  return p;
}

}  // namespace focf
