#pragma once

#include "focf/field.hpp"

namespace focf {

/// Per-node 2x2 inverse of an SPD metric, as a valence-2 field (components of g^{-1}).
TensorField metric_inverse(const MetricField2& g);

/// Raise slot `a` of T with the inverse metric: out_{..m..} = ginv^{m i_a} T_{..i_a..}.
TensorField raise_slot(const TensorField& t, const TensorField& ginv, int a);

/// Pointwise |T|^2 with one inverse-metric factor per slot; nonnegative.
Plane contract_norm_sq(const TensorField& t, const MetricField2& g);
Plane contract_norm_sq(const TensorField& t, const MetricField2& g, const TensorField& ginv);

/// Pointwise inner product <A,B>_g of two fields of equal valence.
Plane contract_inner(const TensorField& a, const TensorField& b, const MetricField2& g,
                     const TensorField& ginv);

/// Riemannian integral: sum f sqrt(det g) h1 h2 (trapezoid rule = spectral on the torus).
double integrate(const Plane& f, const MetricField2& g);
double volume(const MetricField2& g);

/// L2(g) pairing of two symmetric 2-tensor fields.
double l2_pairing(const TensorField& a, const TensorField& b, const MetricField2& g);
double l2_norm(const TensorField& a, const MetricField2& g);

}  // namespace focf
