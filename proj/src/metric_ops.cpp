#include "focf/metric_ops.hpp"

namespace focf {

TensorField metric_inverse(const MetricField2& g) {
  g.require_spd();
  Plane det = g.det();
  TensorField inv(g.grid, 2);
  inv.at(0, 0) = g.g22 / det;
  inv.at(0, 1) = -g.g12 / det;
  inv.at(1, 0) = -g.g12 / det;
  inv.at(1, 1) = g.g11 / det;
  return inv;
}

TensorField raise_slot(const TensorField& t, const TensorField& ginv, int a) {
  require_same_chart(t.grid(), ginv.grid());
  TensorField out(t.grid(), t.valence());
  for (int c = 0; c < t.size(); ++c) {
    int ia = t.slot_index(c, a);
    out.comp(c) = ginv.at(ia, 0) * t.comp(t.with_slot(c, a, 0)) +
                  ginv.at(ia, 1) * t.comp(t.with_slot(c, a, 1));
  }
  return out;
}

Plane contract_inner(const TensorField& a, const TensorField& b, const MetricField2& g,
                     const TensorField& ginv) {
  require_same_chart(a.grid(), g.grid);
  require_same_chart(b.grid(), g.grid);
  if (a.valence() != b.valence()) throw Error("valence mismatch in contraction");
  TensorField up = b;
  for (int s = 0; s < b.valence(); ++s) up = raise_slot(up, ginv, s);
  Plane out = g.grid.zero();
  for (int c = 0; c < a.size(); ++c) out += a.comp(c) * up.comp(c);
  return out;
}

Plane contract_norm_sq(const TensorField& t, const MetricField2& g, const TensorField& ginv) {
  if (t.valence() > 8) throw ValenceOverflow(t.valence());
  Plane out = contract_inner(t, t, g, ginv);
  return out.max(0.0);  // clip the roundoff negatives
}

Plane contract_norm_sq(const TensorField& t, const MetricField2& g) {
  return contract_norm_sq(t, g, metric_inverse(g));
}

double integrate(const Plane& f, const MetricField2& g) {
  if (!f.allFinite()) throw NonFiniteField();
  return (f * g.det().sqrt()).sum() * g.grid.h1() * g.grid.h2();
}

double volume(const MetricField2& g) {
  return g.det().sqrt().sum() * g.grid.h1() * g.grid.h2();
}

double l2_pairing(const TensorField& a, const TensorField& b, const MetricField2& g) {
  TensorField ginv = metric_inverse(g);
  return integrate(contract_inner(a, b, g, ginv), g);
}

double l2_norm(const TensorField& a, const MetricField2& g) {
  return std::sqrt(std::max(0.0, l2_pairing(a, a, g)));
}

}  // namespace focf
