#pragma once

#include <vector>

namespace kpz {

// Gauss-Legendre rule on [-1, 1]; tables are cached and immutable.
struct GaussLegendre {
  std::vector<double> x;
  std::vector<double> w;
};

const GaussLegendre& gauss_legendre(int n);

// Composite rule on [a, b] split into equal panels.
void composite_gl(double a, double b, int panels, int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace kpz
