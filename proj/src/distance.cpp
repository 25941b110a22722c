#include "focf/distance.hpp"

#include <limits>
#include <queue>

namespace focf {

namespace {

struct QItem {
  double d;
  int idx;
  bool operator<(const QItem& o) const { return d > o.d; }  // min-heap
};

// Dijkstra over an n1 x n2 lattice, 8 neighbors, optional periodic wrap per axis.
// metric(i,j) returns (g11,g12,g22) with i already reduced to the source grid.
template <class MetricAt>
Eigen::ArrayXXd dijkstra(int n1, int n2, double h1, double h2, bool per1, bool per2, int si,
                         int sj, MetricAt&& metric) {
  const double inf = std::numeric_limits<double>::infinity();
  Eigen::ArrayXXd dist = Eigen::ArrayXXd::Constant(n1, n2, inf);
  std::priority_queue<QItem> pq;
  dist(si, sj) = 0.0;
  pq.push({0.0, si * n2 + sj});
  while (!pq.empty()) {
    auto [d, idx] = pq.top();
    pq.pop();
    int i = idx / n2, j = idx % n2;
    if (d > dist(i, j)) continue;
    for (int di = -1; di <= 1; ++di) {
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        int ni = i + di, nj = j + dj;
        if (per1)
          ni = (ni + n1) % n1;
        else if (ni < 0 || ni >= n1)
          continue;
        if (per2)
          nj = (nj + n2) % n2;
        else if (nj < 0 || nj >= n2)
          continue;
        auto [a1, c1, b1] = metric(i, j);
        auto [a2, c2, b2] = metric(ni, nj);
        double a = 0.5 * (a1 + a2), c = 0.5 * (c1 + c2), b = 0.5 * (b1 + b2);
        double vx = di * h1, vy = dj * h2;
        double len = std::sqrt(a * vx * vx + 2.0 * c * vx * vy + b * vy * vy);
        if (dist(i, j) + len < dist(ni, nj)) {
          dist(ni, nj) = dist(i, j) + len;
          pq.push({dist(ni, nj), ni * n2 + nj});
        }
      }
    }
  }
  return dist;
}

}  // namespace

Plane grid_distance_map(const MetricField2& g, Node center) {
  g.require_spd();
  const auto& gr = g.grid;
  auto metric = [&](int i, int j) { return std::tuple{g.g11(i, j), g.g12(i, j), g.g22(i, j)}; };
  return dijkstra(gr.n1, gr.n2, gr.h1(), gr.h2(), true, true, gr.wrap1(center.i),
                  gr.wrap2(center.j), metric);
}

double grid_distance(const MetricField2& g, Node p, Node q) {
  Plane d = grid_distance_map(g, p);
  return d(g.grid.wrap1(q.i), g.grid.wrap2(q.j));
}

double systole_upper_bound(const MetricField2& g) {
  const auto& gr = g.grid;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < gr.n2; ++j) {
    double len = 0.0;
    for (int i = 0; i < gr.n1; ++i) len += std::sqrt(g.g11(i, j)) * gr.h1();
    best = std::min(best, len);
  }
  for (int i = 0; i < gr.n1; ++i) {
    double len = 0.0;
    for (int j = 0; j < gr.n2; ++j) len += std::sqrt(g.g22(i, j)) * gr.h2();
    best = std::min(best, len);
  }
  return best;
}

double wrap_systole(const MetricField2& g, int samples) {
  g.require_spd();
  const auto& gr = g.grid;
  double best = std::numeric_limits<double>::infinity();
  // x-winding loops: unroll axis 1 (rows doubled, y periodic)
  {
    auto metric = [&](int i, int j) {
      int ii = i % gr.n1;
      return std::tuple{g.g11(ii, j), g.g12(ii, j), g.g22(ii, j)};
    };
    int stride = std::max(1, gr.n2 / std::max(1, samples));
    for (int j0 = 0; j0 < gr.n2; j0 += stride) {
      Eigen::ArrayXXd d =
          dijkstra(2 * gr.n1 + 1, gr.n2, gr.h1(), gr.h2(), false, true, 0, j0, metric);
      best = std::min(best, d(gr.n1, j0));
    }
  }
  // y-winding loops
  {
    auto metric = [&](int i, int j) {
      int jj = j % gr.n2;
      return std::tuple{g.g11(i, jj), g.g12(i, jj), g.g22(i, jj)};
    };
    int stride = std::max(1, gr.n1 / std::max(1, samples));
    for (int i0 = 0; i0 < gr.n1; i0 += stride) {
      Eigen::ArrayXXd d =
          dijkstra(gr.n1, 2 * gr.n2 + 1, gr.h1(), gr.h2(), true, false, i0, 0, metric);
      best = std::min(best, d(i0, gr.n2));
    }
  }
  return best;
}

}  // namespace focf
