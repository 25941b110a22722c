#include "focf/homogeneous.hpp"

namespace focf::hom {

using Cplx = std::complex<double>;
using CVec = Eigen::Vector<Cplx, Eigen::Dynamic>;

double energy(Family f, const Coeffs& l) {
  require_valid(f, l);
  if (f == Family::ProductSpheres) return product_sphere_energy(l(0), l(1));
  return milnor_energy(l(0), l(1), l(2));
}

double volume(Family f, const Coeffs& l) {
  require_valid(f, l);
  if (f == Family::ProductSpheres) return product_sphere_volume(l(0), l(1));
  return milnor_volume(l(0), l(1), l(2));
}

double norm_rm_sq(Family f, const Coeffs& l) {
  require_valid(f, l);
  if (f == Family::ProductSpheres) return 4.0 / (l(0) * l(0)) + 4.0 / (l(1) * l(1));
  return milnor_norm_rm_sq(l(0), l(1), l(2));
}

ProductSphereInvariants product_sphere_invariants(double a2, double b2) {
  if (!(a2 > 0.0) || !(b2 > 0.0)) throw Error("squared radii must be positive");
  ProductSphereInvariants inv;
  inv.k1 = 1.0 / a2;
  inv.k2 = 1.0 / b2;
  inv.norm_rm_sq = 4.0 / (a2 * a2) + 4.0 / (b2 * b2);
  inv.vol = product_sphere_volume(a2, b2);
  inv.energy = product_sphere_energy(a2, b2);
  inv.grad_g1 = 1.0 / (b2 * b2) - 1.0 / (a2 * a2);
  inv.grad_g2 = -inv.grad_g1;
  return inv;
}

MilnorInvariants milnor_invariants(double l1, double l2, double l3) {
  Coeffs l(3);
  l << l1, l2, l3;
  require_valid(Family::MilnorFrame, l);
  MilnorInvariants inv;
  inv.sec12 = milnor_sectional(l1, l2, l3);
  inv.sec23 = milnor_sectional(l2, l3, l1);
  inv.sec31 = milnor_sectional(l3, l1, l2);
  inv.norm_rm_sq = milnor_norm_rm_sq(l1, l2, l3);
  inv.scalar = 2.0 * (inv.sec12 + inv.sec23 + inv.sec31);
  inv.vol = milnor_volume(l1, l2, l3);
  inv.energy = milnor_energy(l1, l2, l3);
  return inv;
}

double family_inner(Family f, const Coeffs& l, const Coeffs& h, const Coeffs& k) {
  require_valid(f, l);
  double vol = volume(f, l);
  double d = block_dim(f);
  double acc = 0.0;
  for (int i = 0; i < l.size(); ++i) acc += d * h(i) * k(i) / (l(i) * l(i));
  return vol * acc;
}

Coeffs gradient(Family f, const Coeffs& l) {
  require_valid(f, l);
  const double step = 1e-100;
  const double vol = volume(f, l);
  const double d = block_dim(f);
  Coeffs v(l.size());
  for (int i = 0; i < l.size(); ++i) {
    CVec lc = l.cast<Cplx>();
    lc(i) += Cplx(0.0, step);
    double dFdli = energy<Cplx>(f, lc).imag() / step;
    v(i) = dFdli * l(i) * l(i) / (d * vol);
  }
  return v;
}

Coeffs product_sphere_gradient_closed_form(const Coeffs& l) {
  // tensor grad F = (1/b^4 - 1/a^4) g1 (+) (1/a^4 - 1/b^4) g2; in the
  // unit-block basis the block metric g_i contributes its coefficient l_i.
  Coeffs v(2);
  v(0) = (1.0 / (l(1) * l(1)) - 1.0 / (l(0) * l(0))) * l(0);
  v(1) = (1.0 / (l(0) * l(0)) - 1.0 / (l(1) * l(1))) * l(1);
  return v;
}

Coeffs velocity(Family f, const Coeffs& l, FlowKind kind) {
  if (kind == FlowKind::SurfaceCalabi) throw Error("Calabi flow is not a coefficient ODE");
  Coeffs v = -gradient(f, l);
  if (kind == FlowKind::VolumeNormalizedL2) {
    const int n = dimension(f);
    double coef = (n - 4.0) / (2.0 * n) * energy(f, l) / volume(f, l);
    v += coef * l;  // the g-term has coefficient l_i in the unit-block basis
  }
  return v;
}

Coeffs normalized_gradient(Family f, const Coeffs& l) {
  const int n = dimension(f);
  double vol = volume(f, l);
  double fE = energy(f, l);
  Coeffs g = gradient(f, l);
  double coef = (4.0 - n) / (2.0 * n) * fE / vol;
  return std::pow(vol, (4.0 - n) / n) * (g + coef * l);
}

double systole_proxy(Family /*f*/, const Coeffs& l) {
  return 2.0 * M_PI * std::sqrt(l.minCoeff());
}

double family_pointwise_norm(Family f, const Coeffs& l, const Coeffs& h) {
  double d = block_dim(f);
  double acc = 0.0;
  for (int i = 0; i < l.size(); ++i) acc += d * h(i) * h(i) / (l(i) * l(i));
  return std::sqrt(acc);
}

namespace {

// Frame-constant tensors on SU(2) in the orthonormal Milnor frame: components
// over {0,1,2}^v, covariant derivative by the connection coefficient recursion
// (nabla_a T)_I = -sum_s sum_m w[a][I_s][m] T_{I(s->m)}.
struct FrameTensor {
  int valence = 0;
  std::vector<double> c;  // size 3^valence

  explicit FrameTensor(int v) : valence(v), c(static_cast<std::size_t>(std::pow(3.0, v)), 0.0) {}
  double norm_sq() const {
    double s = 0.0;
    for (double x : c) s += x * x;
    return s;
  }
};

using Conn = std::array<std::array<std::array<double, 3>, 3>, 3>;  // w[a][b][c]

Conn milnor_connection(const Coeffs& l) {
  double V = std::sqrt(l(0) * l(1) * l(2));
  double c1 = 2.0 * l(0) / V, c2 = 2.0 * l(1) / V, c3 = 2.0 * l(2) / V;
  double A1 = 0.5 * (-c1 + c2 + c3), A2 = 0.5 * (c1 - c2 + c3), A3 = 0.5 * (c1 + c2 - c3);
  Conn w{};
  w[0][1][2] = A1;
  w[0][2][1] = -A1;
  w[1][2][0] = A2;
  w[1][0][2] = -A2;
  w[2][0][1] = A3;
  w[2][1][0] = -A3;
  return w;
}

FrameTensor frame_cov_deriv(const FrameTensor& t, const Conn& w) {
  FrameTensor out(t.valence + 1);
  const int v = t.valence;
  std::vector<int> idx(v, 0);
  const std::size_t count = t.c.size();
  for (std::size_t flat = 0; flat < count; ++flat) {
    // decode base-3 index (first slot most significant)
    std::size_t rest = flat;
    for (int s = v - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(rest % 3);
      rest /= 3;
    }
    for (int a = 0; a < 3; ++a) {
      double acc = 0.0;  // partials vanish on frame-constant tensors
      for (int s = 0; s < v; ++s) {
        int is = idx[s];
        for (int m = 0; m < 3; ++m) {
          if (w[a][is][m] == 0.0) continue;
          std::size_t jflat = flat + static_cast<std::size_t>(m - is) *
                                         static_cast<std::size_t>(std::pow(3.0, v - 1 - s));
          acc -= w[a][is][m] * t.c[jflat];
        }
      }
      out.c[static_cast<std::size_t>(a) * count + flat] = acc;
    }
  }
  return out;
}

FrameTensor milnor_rm_frame(const Coeffs& l) {
  FrameTensor rm(4);
  auto set = [&](int i, int j, int k, int m, double val) {
    rm.c[static_cast<std::size_t>(((i * 3 + j) * 3 + k) * 3 + m)] = val;
  };
  double K[3][3] = {};
  K[0][1] = K[1][0] = milnor_sectional(l(0), l(1), l(2));
  K[1][2] = K[2][1] = milnor_sectional(l(1), l(2), l(0));
  K[2][0] = K[0][2] = milnor_sectional(l(2), l(0), l(1));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      set(i, j, j, i, K[i][j]);
      set(i, j, i, j, -K[i][j]);
    }
  return rm;
}

}  // namespace

std::vector<double> deriv_sups(Family f, const Coeffs& l, int kmax) {
  std::vector<double> out;
  out.reserve(kmax + 1);
  out.push_back(sup_rm(f, l));
  if (f == Family::ProductSpheres) {
    for (int k = 1; k <= kmax; ++k) out.push_back(0.0);  // symmetric space
    return out;
  }
  Conn w = milnor_connection(l);
  FrameTensor t = milnor_rm_frame(l);
  for (int k = 1; k <= kmax; ++k) {
    t = frame_cov_deriv(t, w);
    out.push_back(std::sqrt(t.norm_sq()));
  }
  return out;
}

double grad_dtg_norm(Family f, const Coeffs& l, const Coeffs& v) {
  if (f == Family::ProductSpheres) return 0.0;  // block metrics are parallel
  Conn w = milnor_connection(l);
  FrameTensor t(2);
  for (int i = 0; i < 3; ++i) t.c[static_cast<std::size_t>(i * 3 + i)] = v(i) / l(i);
  return std::sqrt(frame_cov_deriv(t, w).norm_sq());
}

}  // namespace focf::hom
