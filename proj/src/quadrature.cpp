#include "kpz/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <map>
#include <memory>
#include <mutex>

#include "kpz/errors.hpp"

namespace kpz {

const GaussLegendre& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  if (n < 1) fail(ErrorKind::Arg, "Gauss-Legendre order must be positive");
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  auto rule = std::make_unique<GaussLegendre>();
  gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(static_cast<size_t>(n));
  rule->x.resize(n);
  rule->w.resize(n);
  for (int i = 0; i < n; ++i) gsl_integration_glfixed_point(-1.0, 1.0, i, &rule->x[i], &rule->w[i], t);
  gsl_integration_glfixed_table_free(t);
  auto& ref = *rule;
  cache.emplace(n, std::move(rule));
  return ref;
}

void composite_gl(double a, double b, int panels, int n, std::vector<double>& x, std::vector<double>& w) {
  const auto& gl = gauss_legendre(n);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < n; ++i) {
      x.push_back(mid + 0.5 * h * gl.x[i]);
      w.push_back(0.5 * h * gl.w[i]);
    }
  }
}

}  // namespace kpz
