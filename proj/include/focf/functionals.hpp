#pragma once

#include "focf/curvature.hpp"

namespace focf {

enum class FlowKind { L2Flow, VolumeNormalizedL2, SurfaceCalabi };
enum class GeometryKind { TorusGrid, ProductSpheres, MilnorFrame };

inline int dimension_of(GeometryKind g) {
  switch (g) {
    case GeometryKind::TorusGrid: return 2;
    case GeometryKind::MilnorFrame: return 3;
    case GeometryKind::ProductSpheres: return 4;
  }
  return 2;
}

/// Curvature energy F(g) = (1/2) Int |Rm|^2 dV.
double energy(const MetricField2& g);
double energy(const MetricField2& g, const CurvatureBundle& b);

/// (dRc)_{kij} = nabla_k Rc_{ij} - nabla_i Rc_{kj} (antisymmetric form pair k,i).
TensorField ricci_exterior(const MetricField2& g, const CurvatureBundle& b);

/// delta dRc with the divergence taken over both antisymmetric form slots,
/// i.e. -2 g^{kl} nabla_k (dRc)_{lij}. This weight is what the variational
/// identity <grad F, h> = dF(h) demands (tested), and it makes the linearized
/// flow decay at exactly exp(-|xi|^4 t).
TensorField ricci_form_divergence(const MetricField2& g, const CurvatureBundle& b);

/// grad F = deltadRc - Rcheck + (1/4)|Rm|^2 g, symmetric.
TensorField energy_gradient(const MetricField2& g);
TensorField energy_gradient(const MetricField2& g, const CurvatureBundle& b);

/// Scale-invariant energy Ftilde = Vol^{(4-n)/n} F.
double normalized_energy(const MetricField2& g, int n = 2);
double normalized_energy_from(double f, double vol, int n);

/// Flow velocity dg/dt for the grid kinds:
///   L2Flow:              -grad F
///   VolumeNormalizedL2:  -grad F + ((n-4)/(2n)) (F/Vol) g
/// Optionally 2/3-dealiased (the flow-run default).
TensorField grid_flow_velocity(const MetricField2& g, FlowKind kind, bool dealias);
TensorField grid_flow_velocity(const MetricField2& g, const CurvatureBundle& b, FlowKind kind,
                               bool dealias);

/// Kaehler potential on the flat chart; induced conformal factor
/// h = 1 + (1/2) Lap0 phi must stay positive.
struct CalabiPotential {
  Grid2 grid;
  Plane phi;

  CalabiPotential() = default;
  explicit CalabiPotential(const Grid2& gr) : grid(gr), phi(gr.zero()) {}
};

Plane calabi_conformal_factor(const CalabiPotential& p);
/// Induced metric h * delta; throws PotentialDegenerate if h <= 0 anywhere.
MetricField2 calabi_metric(const CalabiPotential& p);
/// dphi/dt = s - sbar (sbar = Int s dV / Vol; Gauss-Bonnet small on the torus).
Plane calabi_velocity(const CalabiPotential& p);

}  // namespace focf
