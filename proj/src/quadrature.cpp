#include "sensornet/quadrature.hpp"

#include <cmath>

namespace sensornet {

QuadratureRule gauss_legendre(int order) {
  if (order < 2) throw DimensionError("quadrature order must be at least 2");
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);

  // Newton iteration on P_n from the Chebyshev-based initial guess.
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

double integrate(const std::function<double(const Vector&)>& f, const Region& region,
                 int order, int panels) {
  const int dim = region.dim();
  if (dim < 1 || dim > 3) throw DimensionError("quadrature regions support 1 to 3 dims");
  if (panels < 1) throw DimensionError("panel count must be positive");
  for (const auto& [lo, hi] : region.bounds) {
    if (!std::isfinite(lo) || !std::isfinite(hi))
      throw DimensionError("integration region must be bounded");
    if (hi <= lo) throw DimensionError("integration region is empty");
  }
  const QuadratureRule rule = gauss_legendre(order);

  // Flattened loop over (panel, node) pairs per axis.
  const int per_axis = panels * order;
  std::vector<double> pts(dim * per_axis);
  std::vector<double> wts(dim * per_axis);
  for (int a = 0; a < dim; ++a) {
    const double lo = region.bounds[a].first;
    const double width = (region.bounds[a].second - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * width;
      for (int q = 0; q < order; ++q) {
        pts[a * per_axis + p * order + q] = mid + 0.5 * width * rule.nodes[q];
        wts[a * per_axis + p * order + q] = 0.5 * width * rule.weights[q];
      }
    }
  }

  double total = 0.0;
  Vector x(dim);
  std::vector<int> idx(dim, 0);
  while (true) {
    double w = 1.0;
    for (int a = 0; a < dim; ++a) {
      x(a) = pts[a * per_axis + idx[a]];
      w *= wts[a * per_axis + idx[a]];
    }
    total += w * f(x);
    int a = 0;
    for (; a < dim; ++a) {
      if (++idx[a] < per_axis) break;
      idx[a] = 0;
    }
    if (a == dim) break;
  }
  return total;
}

}  // namespace sensornet
