#pragma once

#include <cstdint>

#include "focf/functionals.hpp"

namespace focf {

/// Deterministic normal sampler (Box-Muller over mt19937_64); identical
/// streams across platforms and standard libraries.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : state_(seed) {}
  double operator()();

 private:
  std::uint64_t next_u64();
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// g = e^{2u} delta with u = amplitude cos(2 pi m x/L1) cos(2 pi m y/L2).
MetricField2 conformal_bump_metric(const Grid2& grid, double amplitude, int mode);

/// Conformal metric for an arbitrary u plane.
MetricField2 conformal_metric(const Grid2& grid, const Plane& u);

/// Band-limited random scalar with Gaussian mode taper, sup-normalized to 1.
Plane random_band_limited(const Grid2& grid, std::uint64_t seed, int max_mode, double taper_mode);

/// Rough random metric: g = delta + h, h symmetric band-limited random,
/// sup|h| = amplitude (amplitude < 1 keeps SPD; validated).
MetricField2 random_metric(const Grid2& grid, std::uint64_t seed, double amplitude, int max_mode);

/// Random Kaehler potential with sup|(1/2) Lap0 phi| = amplitude (< 1).
CalabiPotential random_calabi_potential(const Grid2& grid, std::uint64_t seed, double amplitude,
                                        int max_mode);

}  // namespace focf
