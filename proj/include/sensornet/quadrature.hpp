#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "sensornet/types.hpp"

namespace sensornet {

// Gauss-Legendre nodes and weights on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int order);

// Axis-aligned box region; 1 to 3 dimensions.
struct Region {
  std::vector<std::pair<double, double>> bounds;
  int dim() const { return static_cast<int>(bounds.size()); }
};

// Composite tensor-product Gauss-Legendre integral of f over the region,
// each axis split into `panels` equal pieces.
double integrate(const std::function<double(const Vector&)>& f, const Region& region,
                 int order, int panels = 1);

}  // namespace sensornet
