#include "focf/functionals.hpp"

#include "focf/spectral.hpp"

namespace focf {

double energy(const MetricField2& g, const CurvatureBundle& b) {
  return 0.5 * integrate(b.norm_rm_sq, g);
}

double energy(const MetricField2& g) { return energy(g, riemann(g)); }

TensorField ricci_exterior(const MetricField2& g, const CurvatureBundle& b) {
  TensorField nrc = covariant_derivative(b.rc, b.gamma);  // (k,i,j)
  TensorField drc(g.grid, 3);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) drc.at(k, i, j) = nrc.at(k, i, j) - nrc.at(i, k, j);
  return drc;
}

TensorField ricci_form_divergence(const MetricField2& g, const CurvatureBundle& b) {
  TensorField drc = ricci_exterior(g, b);
  TensorField ndrc = covariant_derivative(drc, b.gamma);  // (a,k,i,j)
  TensorField out(g.grid, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Plane acc = g.grid.zero();
      for (int a = 0; a < 2; ++a)
        for (int k = 0; k < 2; ++k) acc += b.ginv.at(a, k) * ndrc.at(a, k, i, j);
      out.at(i, j) = -2.0 * acc;  // both antisymmetric slots contribute equally
    }
  return out;
}

TensorField energy_gradient(const MetricField2& g, const CurvatureBundle& b) {
  TensorField grad = ricci_form_divergence(g, b);
  TensorField rch = rcheck(b, g);
  TensorField gt = g.as_tensor();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      grad.at(i, j) += -rch.at(i, j) + 0.25 * b.norm_rm_sq * gt.at(i, j);
  // enforce symmetry in storage
  Plane sym = 0.5 * (grad.at(0, 1) + grad.at(1, 0));
  grad.at(0, 1) = sym;
  grad.at(1, 0) = sym;
  return grad;
}

TensorField energy_gradient(const MetricField2& g) { return energy_gradient(g, riemann(g)); }

double normalized_energy_from(double f, double vol, int n) {
  if (!(vol > 0.0)) throw VolumeNonPositive();
  return std::pow(vol, (4.0 - n) / n) * f;
}

double normalized_energy(const MetricField2& g, int n) {
  return normalized_energy_from(energy(g), volume(g), n);
}

TensorField grid_flow_velocity(const MetricField2& g, const CurvatureBundle& b, FlowKind kind,
                               bool dealias) {
  if (kind == FlowKind::SurfaceCalabi)
    throw Error("Calabi flow advances the potential, not the metric");
  TensorField v = energy_gradient(g, b);
  v *= -1.0;
  if (kind == FlowKind::VolumeNormalizedL2) {
    const int n = 2;  // grid flows live on the 2-torus
    double f = energy(g, b);
    double vol = volume(g);
    if (!(vol > 0.0)) throw VolumeNonPositive();
    double coef = (n - 4.0) / (2.0 * n) * f / vol;
    TensorField gt = g.as_tensor();
    for (int c = 0; c < v.size(); ++c) v.comp(c) += coef * gt.comp(c);
  }
  if (dealias) dealias_two_thirds(v);
  return v;
}

TensorField grid_flow_velocity(const MetricField2& g, FlowKind kind, bool dealias) {
  return grid_flow_velocity(g, riemann(g), kind, dealias);
}

Plane calabi_conformal_factor(const CalabiPotential& p) {
  return 1.0 + 0.5 * flat_laplacian(p.phi, p.grid);
}

MetricField2 calabi_metric(const CalabiPotential& p) {
  Plane h = calabi_conformal_factor(p);
  if (!(h > 0.0).all()) throw PotentialDegenerate();
  MetricField2 g(p.grid);
  g.g11 = h;
  g.g22 = h;
  g.g12 = p.grid.zero();
  return g;
}

Plane calabi_velocity(const CalabiPotential& p) {
  Plane h = calabi_conformal_factor(p);
  if (!(h > 0.0).all()) throw PotentialDegenerate();
  // s = 2K, K = -(1/(2h)) Lap0 log h on the conformal chart
  Plane s = -flat_laplacian(h.log(), p.grid) / h;
  MetricField2 g(p.grid);
  g.g11 = h;
  g.g22 = h;
  double sbar = integrate(s, g) / volume(g);
  return s - sbar;
}

}  // namespace focf
