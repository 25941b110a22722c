#pragma once

#include "focf/field.hpp"

namespace focf {

/// Time-independent bump profile: 1 on the inner ball, 0 outside radius 2r,
/// quintic C^2 ramp in between, in graph distance from the center.
/// Coordinate derivative planes are fixed once (8th-order FD) at construction;
/// only the metric norms of dgamma / Hess gamma evolve along a flow.
struct CutoffFunction {
  Grid2 grid;
  Node center;
  double inner_r = 0.0;  // outer radius is 2*inner_r
  Plane gamma;
  Plane d1, d2;          // coordinate partials
  Plane d11, d12, d22;   // coordinate second partials

  double outer_r() const { return 2.0 * inner_r; }
};

/// Build the bump from graph distances measured in g0 (the reference metric).
CutoffFunction make_cutoff(const MetricField2& g0, Node center, double r);

/// sup over nodes of |dgamma|_g and |Hess gamma|_g (Hessian uses g's connection).
struct CutoffNorms {
  double sup_dgamma = 0.0;
  double sup_hess = 0.0;
};
CutoffNorms cutoff_norms(const CutoffFunction& cf, const MetricField2& g);

}  // namespace focf
