#pragma once

#include <complex>

#include <Eigen/Dense>

#include "focf/errors.hpp"
#include "focf/functionals.hpp"

namespace focf::hom {

/// Symmetric-ansatz families where the flow reduces to ODEs for the diagonal
/// metric coefficients l_i (length^2):
///   ProductSpheres: g = a2 * ghat1 + b2 * ghat2 on S^2 x S^2, l = (a2, b2), n = 4
///   MilnorFrame:    left-invariant diag(l1,l2,l3) on SU(2), lambda_i = 2, n = 3
enum class Family { ProductSpheres, MilnorFrame };

inline int dimension(Family f) { return f == Family::ProductSpheres ? 4 : 3; }
inline int coeff_count(Family f) { return f == Family::ProductSpheres ? 2 : 3; }
/// Block dimension d_i of each diagonal coefficient.
inline int block_dim(Family f) { return f == Family::ProductSpheres ? 2 : 1; }

using Coeffs = Eigen::VectorXd;

inline void require_valid(Family f, const Coeffs& l) {
  if (l.size() != coeff_count(f)) throw Error("wrong coefficient count for family");
  if (!(l.array() > 0.0).all()) throw Error("homogeneous coefficients must be positive");
}

// ---- closed forms, templated on scalar so gradients come from complex step ----

template <class S>
S product_sphere_energy(S a2, S b2) {
  return 32.0 * M_PI * M_PI * (a2 / b2 + b2 / a2);
}

template <class S>
S product_sphere_volume(S a2, S b2) {
  return 16.0 * M_PI * M_PI * a2 * b2;
}

/// Sectional curvature of the (i,j) coordinate plane in the orthonormal Milnor
/// frame, SU(2) structure constants lambda = 2; `k` is the remaining index.
template <class S>
S milnor_sectional(S li, S lj, S lk) {
  S num = li * li + lj * lj - 3.0 * lk * lk + 2.0 * lk * li + 2.0 * lk * lj - 2.0 * li * lj;
  return num / (li * lj * lk);
}

template <class S>
S milnor_norm_rm_sq(S l1, S l2, S l3) {
  S k12 = milnor_sectional(l1, l2, l3);
  S k23 = milnor_sectional(l2, l3, l1);
  S k31 = milnor_sectional(l3, l1, l2);
  return 4.0 * (k12 * k12 + k23 * k23 + k31 * k31);
}

template <class S>
S milnor_volume(S l1, S l2, S l3) {
  using std::sqrt;
  return 2.0 * M_PI * M_PI * sqrt(l1 * l2 * l3);
}

template <class S>
S milnor_energy(S l1, S l2, S l3) {
  return 0.5 * milnor_norm_rm_sq(l1, l2, l3) * milnor_volume(l1, l2, l3);
}

template <class S>
S energy(Family f, const Eigen::Vector<S, Eigen::Dynamic>& l) {
  if (f == Family::ProductSpheres) return product_sphere_energy(l(0), l(1));
  return milnor_energy(l(0), l(1), l(2));
}

double energy(Family f, const Coeffs& l);
double volume(Family f, const Coeffs& l);
double norm_rm_sq(Family f, const Coeffs& l);
inline double sup_rm(Family f, const Coeffs& l) { return std::sqrt(norm_rm_sq(f, l)); }

struct ProductSphereInvariants {
  double k1, k2;          // factor sectional curvatures 1/a2, 1/b2
  double norm_rm_sq;      // 4/a2^2 + 4/b2^2
  double vol;             // 16 pi^2 a2 b2
  double energy;          // 32 pi^2 (a2/b2 + b2/a2)
  double grad_g1, grad_g2;  // grad F = grad_g1 * g1 (+) grad_g2 * g2 (metric-block basis)
};
ProductSphereInvariants product_sphere_invariants(double a2, double b2);

struct MilnorInvariants {
  double sec12, sec23, sec31;
  double norm_rm_sq;
  double scalar;  // 2 * (sum of sectionals)
  double vol;
  double energy;
};
MilnorInvariants milnor_invariants(double l1, double l2, double l3);

/// L2(g) inner product on the diagonal family: <h,k> = Vol * sum_i d_i h_i k_i / l_i^2,
/// coefficients taken in the unit-block basis (h = sum h_i ghat_i).
double family_inner(Family f, const Coeffs& l, const Coeffs& h, const Coeffs& k);
inline double family_norm(Family f, const Coeffs& l, const Coeffs& h) {
  return std::sqrt(std::max(0.0, family_inner(f, l, h, h)));
}

/// Restricted L2 gradient: coefficients v with dF(h) = <v, h>_{L2(g)} for all
/// diagonal h. Partials of F by complex step (exact to machine precision).
Coeffs gradient(Family f, const Coeffs& l);
/// Closed-form gradient for the product-sphere family (consistency target).
Coeffs product_sphere_gradient_closed_form(const Coeffs& l);

/// Coefficient velocity dl/dt for the declared flow kind.
Coeffs velocity(Family f, const Coeffs& l, FlowKind kind);

/// grad Ftilde coefficients (vn velocity = -Vol^{(n-4)/n} grad Ftilde).
Coeffs normalized_gradient(Family f, const Coeffs& l);

double systole_proxy(Family f, const Coeffs& l);

/// Pointwise |h|_g of a diagonal perturbation (homogeneous, so constant on M).
double family_pointwise_norm(Family f, const Coeffs& l, const Coeffs& h);

/// sup|nabla^k Rm| for k = 0..kmax. Product spheres are symmetric spaces
/// (all zero for k >= 1); the Milnor family uses the frame connection
/// recursion on frame-constant tensors.
std::vector<double> deriv_sups(Family f, const Coeffs& l, int kmax);

/// sup |nabla dg/dt|_g for coefficient velocity v (0 on product spheres).
double grad_dtg_norm(Family f, const Coeffs& l, const Coeffs& v);

}  // namespace focf::hom
