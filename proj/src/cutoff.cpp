#include "focf/cutoff.hpp"

#include "focf/curvature.hpp"
#include "focf/distance.hpp"
#include "focf/spectral.hpp"

namespace focf {

namespace {

// quintic ramp: q(0)=1, q(1)=0, q' = q'' = 0 at both ends
double quintic(double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

}  // namespace

CutoffFunction make_cutoff(const MetricField2& g0, Node center, double r) {
  if (!(r > 0.0)) throw Error("cutoff radius must be positive");
  CutoffFunction cf;
  cf.grid = g0.grid;
  cf.center = center;
  cf.inner_r = r;
  Plane dist = grid_distance_map(g0, center);
  cf.gamma = Plane(g0.grid.n1, g0.grid.n2);
  for (int i = 0; i < g0.grid.n1; ++i)
    for (int j = 0; j < g0.grid.n2; ++j) cf.gamma(i, j) = quintic((dist(i, j) - r) / r);
  // coordinate derivative planes are frozen with the profile (FD: the distance
  // field has cut-locus kinks outside the support that spectral stencils smear)
  cf.d1 = fd_partial(cf.gamma, cf.grid, 1, 1);
  cf.d2 = fd_partial(cf.gamma, cf.grid, 2, 1);
  cf.d11 = fd_partial(cf.gamma, cf.grid, 1, 2);
  cf.d22 = fd_partial(cf.gamma, cf.grid, 2, 2);
  cf.d12 = fd_partial(cf.d1, cf.grid, 2, 1);
  return cf;
}

CutoffNorms cutoff_norms(const CutoffFunction& cf, const MetricField2& g) {
  require_same_chart(cf.grid, g.grid);
  TensorField ginv = metric_inverse(g);
  TensorField gamma = christoffel(g);

  TensorField dgam(cf.grid, 1);
  dgam.at(0) = cf.d1;
  dgam.at(1) = cf.d2;

  TensorField hess(cf.grid, 2);
  hess.at(0, 0) = cf.d11 - gamma.at(0, 0, 0) * cf.d1 - gamma.at(1, 0, 0) * cf.d2;
  hess.at(0, 1) = cf.d12 - gamma.at(0, 0, 1) * cf.d1 - gamma.at(1, 0, 1) * cf.d2;
  hess.at(1, 0) = hess.at(0, 1);
  hess.at(1, 1) = cf.d22 - gamma.at(0, 1, 1) * cf.d1 - gamma.at(1, 1, 1) * cf.d2;

  CutoffNorms out;
  out.sup_dgamma = std::sqrt(contract_norm_sq(dgam, g, ginv).maxCoeff());
  out.sup_hess = std::sqrt(contract_norm_sq(hess, g, ginv).maxCoeff());
  return out;
}

}  // namespace focf
