#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "focf/errors.hpp"

namespace focf {

using Plane = Eigen::ArrayXXd;  // n1 x n2, row index = axis-1 node, col = axis-2 node

struct Node {
  int i = 0, j = 0;
  friend bool operator==(const Node&, const Node&) = default;
};

/// Periodic chart of the flat 2-torus: period lengths and node counts per axis.
/// Node (i, j) sits at (i*h1, j*h2); all index arithmetic is modular.
struct Grid2 {
  int n1 = 0, n2 = 0;
  double len1 = 0.0, len2 = 0.0;

  Grid2() = default;
  Grid2(int n1_, int n2_, double l1, double l2) : n1(n1_), n2(n2_), len1(l1), len2(l2) {
    if (n1 < 8 || n2 < 8 || n1 % 2 != 0 || n2 % 2 != 0)
      throw Error("grid sizes must be even and >= 8");
    if (!(len1 > 0.0) || !(len2 > 0.0)) throw Error("grid periods must be positive");
  }
  static Grid2 unit(int n) { return Grid2(n, n, 1.0, 1.0); }

  double h1() const { return len1 / n1; }
  double h2() const { return len2 / n2; }
  double hmax() const { return std::max(h1(), h2()); }
  long nodes() const { return static_cast<long>(n1) * n2; }

  int wrap1(int i) const { return ((i % n1) + n1) % n1; }
  int wrap2(int j) const { return ((j % n2) + n2) % n2; }

  double x(int i) const { return i * h1(); }
  double y(int j) const { return j * h2(); }

  /// Signal wavenumber for mode index m on an axis with n nodes, period len.
  static double wavenumber(int m, int n, double len) {
    int mm = (m <= n / 2) ? m : m - n;
    return 2.0 * M_PI * mm / len;
  }

  Plane zero() const { return Plane::Zero(n1, n2); }

  friend bool operator==(const Grid2& a, const Grid2& b) {
    return a.n1 == b.n1 && a.n2 == b.n2 && a.len1 == b.len1 && a.len2 == b.len2;
  }
};

inline void require_same_chart(const Grid2& a, const Grid2& b) {
  if (!(a == b)) throw ChartMismatch();
}

}  // namespace focf
