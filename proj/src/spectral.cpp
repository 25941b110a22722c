#include "focf/spectral.hpp"

#include <complex>
#include <cstring>
#include <functional>
#include <unordered_map>

#include <unsupported/Eigen/FFT>

namespace focf {

namespace {

using Cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

// 1-D complex transforms along one axis of a real plane, with a per-mode
// complex multiplier applied in frequency space.
Plane apply_axis_multiplier(const Plane& f, int axis, const CVec& mult) {
  const int n1 = static_cast<int>(f.rows());
  const int n2 = static_cast<int>(f.cols());
  auto& fft = fft_engine();
  Plane out(n1, n2);
  if (axis == 1) {
    CVec in(n1), freq(n1);
    for (int j = 0; j < n2; ++j) {
      for (int i = 0; i < n1; ++i) in(i) = Cplx(f(i, j), 0.0);
      fft.fwd(freq, in);
      freq.array() *= mult.array();
      fft.inv(in, freq);
      for (int i = 0; i < n1; ++i) out(i, j) = in(i).real();
    }
  } else {
    CVec in(n2), freq(n2);
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n2; ++j) in(j) = Cplx(f(i, j), 0.0);
      fft.fwd(freq, in);
      freq.array() *= mult.array();
      fft.inv(in, freq);
      for (int j = 0; j < n2; ++j) out(i, j) = in(j).real();
    }
  }
  return out;
}

CVec derivative_multiplier(int n, double len, int order) {
  CVec m(n);
  for (int k = 0; k < n; ++k) {
    double w = Grid2::wavenumber(k, n, len);
    m(k) = std::pow(Cplx(0.0, w), order);
  }
  if (order % 2 == 1) m(n / 2) = 0.0;  // Nyquist carries no sign information
  return m;
}

// At lab grid sizes a one-axis Fourier multiplier is cheaper as a cached real
// matrix (ifft . diag . fft is real for our multipliers) applied by GEMM.
const Eigen::MatrixXd& multiplier_matrix(int n, const CVec& mult, long key) {
  using Key = std::pair<long, int>;
  struct Hash {
    std::size_t operator()(const Key& k) const {
      return std::hash<long>()(k.first * 1315423911L + k.second);
    }
  };
  thread_local std::unordered_map<Key, Eigen::MatrixXd, Hash> cache;
  auto it = cache.find({key, n});
  if (it != cache.end()) return it->second;

  auto& fft = fft_engine();
  Eigen::MatrixXd d(n, n);
  CVec unit(n), freq(n), col(n);
  for (int j = 0; j < n; ++j) {
    unit.setZero();
    unit(j) = 1.0;
    fft.fwd(freq, unit);
    freq.array() *= mult.array();
    fft.inv(col, freq);
    for (int i = 0; i < n; ++i) d(i, j) = col(i).real();
  }
  return cache.emplace(Key{key, n}, std::move(d)).first->second;
}

long multiplier_key(double len, int order, bool filter) {
  // derivative multipliers are determined by (len, order); the 2/3 filter by n alone
  long bits;
  std::memcpy(&bits, &len, sizeof bits);
  return (bits ^ (static_cast<long>(order) << 3)) ^ (filter ? 0x5a5a5a5aL : 0L);
}

Plane apply_multiplier_matrix(const Plane& f, int axis, const Eigen::MatrixXd& d) {
  if (axis == 1) return (d * f.matrix()).array();
  return (f.matrix() * d.transpose()).array();
}

// centered FD stencils for first/second derivative, half-widths up to 4
const double kD1[4][5] = {
    {0.0, 0.5, 0, 0, 0},
    {0.0, 2.0 / 3, -1.0 / 12, 0, 0},
    {0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60, 0},
    {0.0, 4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280}};
const double kD2[4][5] = {
    {-2.0, 1.0, 0, 0, 0},
    {-5.0 / 2, 4.0 / 3, -1.0 / 12, 0, 0},
    {-49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90, 0},
    {-205.0 / 72, 8.0 / 5, -1.0 / 5, 8.0 / 315, -1.0 / 560}};

Plane fd_once(const Plane& f, const Grid2& grid, int axis, int deriv_order, int accuracy) {
  const int hw = accuracy / 2;
  const double* w = (deriv_order == 1) ? kD1[hw - 1] : kD2[hw - 1];
  const double h = (axis == 1) ? grid.h1() : grid.h2();
  const double scale = (deriv_order == 1) ? 1.0 / h : 1.0 / (h * h);
  const int n1 = grid.n1, n2 = grid.n2;
  Plane out = Plane::Zero(n1, n2);
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      double acc = (deriv_order == 2) ? w[0] * f(i, j) : 0.0;
      for (int s = 1; s <= hw; ++s) {
        int ip, im, jp, jm;
        if (axis == 1) {
          ip = grid.wrap1(i + s);
          im = grid.wrap1(i - s);
          jp = jm = j;
        } else {
          jp = grid.wrap2(j + s);
          jm = grid.wrap2(j - s);
          ip = im = i;
        }
        if (deriv_order == 1)
          acc += w[s] * (f(ip, jp) - f(im, jm));
        else
          acc += w[s] * (f(ip, jp) + f(im, jm));
      }
      out(i, j) = acc * scale;
    }
  }
  return out;
}

}  // namespace

Plane spectral_partial(const Plane& f, const Grid2& grid, int axis, int order) {
  if (!f.allFinite()) throw NonFiniteField();
  if (axis != 1 && axis != 2) throw Error("axis must be 1 or 2");
  if (order < 0 || order > 4) throw Error("derivative order must be in [0,4]");
  if (order == 0) return f;
  const int n = (axis == 1) ? grid.n1 : grid.n2;
  const double len = (axis == 1) ? grid.len1 : grid.len2;
  if (n <= 256) {
    const Eigen::MatrixXd& d =
        multiplier_matrix(n, derivative_multiplier(n, len, order), multiplier_key(len, order, false));
    return apply_multiplier_matrix(f, axis, d);
  }
  return apply_axis_multiplier(f, axis, derivative_multiplier(n, len, order));
}

TensorField spectral_partial(const TensorField& f, int axis, int order) {
  TensorField out(f.grid(), f.valence());
  for (int c = 0; c < f.size(); ++c) out.comp(c) = spectral_partial(f.comp(c), f.grid(), axis, order);
  return out;
}

Plane fd_partial(const Plane& f, const Grid2& grid, int axis, int order, int accuracy) {
  if (!f.allFinite()) throw NonFiniteField();
  if (accuracy % 2 != 0 || accuracy < 2 || accuracy > 8) throw Error("fd accuracy in {2,4,6,8}");
  if (order == 0) return f;
  Plane cur = f;
  int rem = order;
  while (rem >= 2) {
    cur = fd_once(cur, grid, axis, 2, accuracy);
    rem -= 2;
  }
  if (rem == 1) cur = fd_once(cur, grid, axis, 1, accuracy);
  return cur;
}

Plane dealias_two_thirds(const Plane& f, const Grid2& grid) {
  auto cutoff_mult = [](int n) {
    CVec m(n);
    for (int k = 0; k < n; ++k) {
      int mm = (k <= n / 2) ? k : k - n;
      m(k) = (std::abs(mm) > n / 3) ? 0.0 : 1.0;
    }
    return m;
  };
  if (grid.n1 <= 256 && grid.n2 <= 256) {
    const Eigen::MatrixXd& d1 =
        multiplier_matrix(grid.n1, cutoff_mult(grid.n1), multiplier_key(0.0, 0, true));
    const Eigen::MatrixXd& d2 =
        multiplier_matrix(grid.n2, cutoff_mult(grid.n2), multiplier_key(0.0, 0, true));
    return apply_multiplier_matrix(apply_multiplier_matrix(f, 1, d1), 2, d2);
  }
  Plane tmp = apply_axis_multiplier(f, 1, cutoff_mult(grid.n1));
  return apply_axis_multiplier(tmp, 2, cutoff_mult(grid.n2));
}

void dealias_two_thirds(TensorField& f) {
  for (int c = 0; c < f.size(); ++c) f.comp(c) = dealias_two_thirds(f.comp(c), f.grid());
}

Plane apply_laplacian_symbol(const Plane& f, const Grid2& grid,
                             const std::function<double(double)>& mult) {
  // separable trick is unavailable for a general function of |k|^2, so do the
  // full 2-D transform: axis-1 lines then axis-2 lines.
  const int n1 = grid.n1, n2 = grid.n2;
  auto& fft = fft_engine();
  Eigen::MatrixXcd F(n1, n2);
  CVec in(n1), freq(n1);
  for (int j = 0; j < n2; ++j) {
    for (int i = 0; i < n1; ++i) in(i) = Cplx(f(i, j), 0.0);
    fft.fwd(freq, in);
    F.col(j) = freq;
  }
  CVec in2(n2), freq2(n2);
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) in2(j) = F(i, j);
    fft.fwd(freq2, in2);
    F.row(i) = freq2.transpose();
  }
  for (int i = 0; i < n1; ++i) {
    double k1 = Grid2::wavenumber(i, n1, grid.len1);
    for (int j = 0; j < n2; ++j) {
      double k2 = Grid2::wavenumber(j, n2, grid.len2);
      F(i, j) *= mult(k1 * k1 + k2 * k2);
    }
  }
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) in2(j) = F(i, j);
    fft.inv(freq2, in2);
    F.row(i) = freq2.transpose();
  }
  Plane out(n1, n2);
  for (int j = 0; j < n2; ++j) {
    for (int i = 0; i < n1; ++i) in(i) = F(i, j);
    fft.inv(freq, in);
    for (int i = 0; i < n1; ++i) out(i, j) = freq(i).real();
  }
  return out;
}

Plane flat_laplacian(const Plane& f, const Grid2& grid) {
  return spectral_partial(f, grid, 1, 2) + spectral_partial(f, grid, 2, 2);
}

Plane flat_bilaplacian(const Plane& f, const Grid2& grid) {
  return flat_laplacian(flat_laplacian(f, grid), grid);
}

Plane translate(const Plane& f, int di, int dj) {
  const int n1 = static_cast<int>(f.rows());
  const int n2 = static_cast<int>(f.cols());
  Plane out(n1, n2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      out(i, j) = f((i - di % n1 + n1) % n1, (j - dj % n2 + n2) % n2);
  return out;
}

}  // namespace focf
