#pragma once

#include <array>
#include <vector>

#include "focf/grid.hpp"

namespace focf {

/// Covariant tensor field on a Grid2: one component plane per multi-index.
/// Component (i1,...,iv), each index in {0,1}, is stored at the flat offset
/// i1*2^(v-1) + i2*2^(v-2) + ... + iv (first slot most significant).
class TensorField {
 public:
  TensorField() = default;
  TensorField(const Grid2& grid, int valence)
      : grid_(grid), valence_(valence), comps_(std::size_t(1) << valence) {
    if (valence < 0 || valence > kMaxValence) throw ValenceOverflow(valence);
    for (auto& c : comps_) c = grid.zero();
  }

  static constexpr int kMaxValence = 9;  // 4 (Rm) + m_max (4) + one working slot

  const Grid2& grid() const { return grid_; }
  int valence() const { return valence_; }
  int size() const { return static_cast<int>(comps_.size()); }

  Plane& comp(int flat) { return comps_[flat]; }
  const Plane& comp(int flat) const { return comps_[flat]; }

  template <class... Ix>
  Plane& at(Ix... ix) {
    return comps_[flatten(ix...)];
  }
  template <class... Ix>
  const Plane& at(Ix... ix) const {
    return comps_[flatten(ix...)];
  }

  template <class... Ix>
  int flatten(Ix... ix) const {
    static_assert(((std::is_convertible_v<Ix, int>)&&...));
    int flat = 0;
    ((flat = flat * 2 + static_cast<int>(ix)), ...);
    return flat;
  }

  /// Index of slot `a` (0-based from the left) inside flat offset `flat`.
  int slot_index(int flat, int a) const { return (flat >> (valence_ - 1 - a)) & 1; }
  /// Flat offset with slot `a` replaced by value m.
  int with_slot(int flat, int a, int m) const {
    int bit = valence_ - 1 - a;
    return (flat & ~(1 << bit)) | (m << bit);
  }

  bool all_finite() const {
    for (const auto& c : comps_)
      if (!c.allFinite()) return false;
    return true;
  }

  double sup_abs() const {
    double m = 0.0;
    for (const auto& c : comps_) m = std::max(m, c.abs().maxCoeff());
    return m;
  }

  TensorField& operator+=(const TensorField& o) {
    for (int c = 0; c < size(); ++c) comps_[c] += o.comps_[c];
    return *this;
  }
  TensorField& operator-=(const TensorField& o) {
    for (int c = 0; c < size(); ++c) comps_[c] -= o.comps_[c];
    return *this;
  }
  TensorField& operator*=(double s) {
    for (auto& c : comps_) c *= s;
    return *this;
  }
  friend TensorField operator+(TensorField a, const TensorField& b) { return a += b; }
  friend TensorField operator-(TensorField a, const TensorField& b) { return a -= b; }
  friend TensorField operator*(double s, TensorField a) { return a *= s; }

 private:
  Grid2 grid_;
  int valence_ = 0;
  std::vector<Plane> comps_;
};

/// Symmetric positive definite 2x2 metric field on a Grid2.
struct MetricField2 {
  Grid2 grid;
  Plane g11, g12, g22;

  MetricField2() = default;
  explicit MetricField2(const Grid2& gr)
      : grid(gr), g11(Plane::Ones(gr.n1, gr.n2)), g12(gr.zero()), g22(Plane::Ones(gr.n1, gr.n2)) {}

  static MetricField2 flat(const Grid2& gr) { return MetricField2(gr); }

  Plane det() const { return g11 * g22 - g12 * g12; }

  bool is_spd() const { return (g11 > 0.0).all() && (det() > 0.0).all(); }

  /// Throws NonSPDMetric naming the first offending node.
  void require_spd() const {
    Plane d = det();
    for (int i = 0; i < grid.n1; ++i)
      for (int j = 0; j < grid.n2; ++j)
        if (!(g11(i, j) > 0.0) || !(d(i, j) > 0.0)) throw NonSPDMetric(i, j);
  }

  TensorField as_tensor() const {
    TensorField t(grid, 2);
    t.at(0, 0) = g11;
    t.at(0, 1) = g12;
    t.at(1, 0) = g12;
    t.at(1, 1) = g22;
    return t;
  }

  static MetricField2 from_tensor(const TensorField& t) {
    MetricField2 g(t.grid());
    g.g11 = t.at(0, 0);
    g.g12 = 0.5 * (t.at(0, 1) + t.at(1, 0));
    g.g22 = t.at(1, 1);
    return g;
  }

  MetricField2& operator+=(const MetricField2& o) {
    g11 += o.g11;
    g12 += o.g12;
    g22 += o.g22;
    return *this;
  }
  MetricField2& operator*=(double s) {
    g11 *= s;
    g12 *= s;
    g22 *= s;
    return *this;
  }
  friend MetricField2 operator*(double s, MetricField2 g) { return g *= s; }
};

/// axpy-style helpers used by the integrators (value semantics, no aliasing surprises)
inline MetricField2 lincomb(double a, const MetricField2& g, double b, const MetricField2& h) {
  MetricField2 r(g.grid);
  r.g11 = a * g.g11 + b * h.g11;
  r.g12 = a * g.g12 + b * h.g12;
  r.g22 = a * g.g22 + b * h.g22;
  return r;
}

inline MetricField2 add_scaled(const MetricField2& g, double dt, const TensorField& v) {
  MetricField2 r = g;
  r.g11 += dt * v.at(0, 0);
  r.g12 += dt * 0.5 * (v.at(0, 1) + v.at(1, 0));
  r.g22 += dt * v.at(1, 1);
  return r;
}

}  // namespace focf
