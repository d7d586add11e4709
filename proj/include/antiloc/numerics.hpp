#pragma once

#include <vector>

namespace antiloc {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

}  // namespace antiloc
