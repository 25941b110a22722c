#pragma once

#include "focf/metric_ops.hpp"

namespace focf {

/// Full curvature package of a metric. Index conventions:
///   gamma.at(k,i,j)  = Gamma^k_{ij} (upper slot first, symmetric in i,j)
///   rm.at(i,j,k,l)   = R_{ijkl} = <R(d_i,d_j)d_k, d_l>, fully symmetrized in storage
///   rc.at(j,k)       = g^{il} R_{ijkl}
struct CurvatureBundle {
  Grid2 grid;
  TensorField ginv;
  TensorField gamma;
  TensorField rm;
  TensorField rc;
  Plane scalar;
  Plane norm_rm_sq;
  double symmetry_defect = 0.0;  // pre-symmetrization relative defect; > 1e-6 flags under-resolution

  bool under_resolved() const { return symmetry_defect > 1e-6; }
};

TensorField christoffel(const MetricField2& g);

CurvatureBundle riemann(const MetricField2& g);

/// Quadratic contraction Rcheck_{ij} = R_{ipqr} R_j^{pqr} (three inverse-metric factors).
TensorField rcheck(const CurvatureBundle& b, const MetricField2& g);

/// nabla T: prepends the differentiation slot. Only the connection enters.
TensorField covariant_derivative(const TensorField& t, const TensorField& gamma);
inline TensorField covariant_derivative(const TensorField& t, const MetricField2& g) {
  return covariant_derivative(t, christoffel(g));
}

/// nabla^k Rm; k <= m_max (default cap 4).
inline constexpr int kDerivCap = 4;
TensorField nabla_k_rm(const CurvatureBundle& b, int k);
TensorField nabla_k_rm(const MetricField2& g, int k);

/// Rough Laplacian g^{ab} nabla_a nabla_b, componentwise; and its square.
TensorField rough_laplacian(const TensorField& t, const MetricField2& g, const CurvatureBundle& b);
TensorField bilaplacian(const TensorField& t, const MetricField2& g, const CurvatureBundle& b);
TensorField rough_laplacian(const TensorField& t, const MetricField2& g);
TensorField bilaplacian(const TensorField& t, const MetricField2& g);

/// Pointwise sup-norm |nabla^k Rm| for k = 0..kmax.
std::vector<double> deriv_sups(const MetricField2& g, const CurvatureBundle& b, int kmax);

/// Blowup gauge: f_m = sum_{j=1..m} |nabla^j Rm|^{2/(2+j)} pointwise (0^p := 0).
Plane f_m_field(const MetricField2& g, const CurvatureBundle& b, int m);
Plane f_m_field(const MetricField2& g, int m);
double f_m_sup(const MetricField2& g, int m);

}  // namespace focf
