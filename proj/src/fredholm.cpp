#include "kpz/fredholm.hpp"

#include <cmath>
#include <vector>

#include "kpz/parallel.hpp"
#include "kpz/quadrature.hpp"

namespace kpz {

NystromOperator make_nystrom(const PointKernel& kernel, const QuadratureGrid& grid) {
  NystromOperator op;
  op.grid = grid;
  const auto n = static_cast<Eigen::Index>(grid.size());
  op.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const cplx v = kernel(grid.nodes[i], grid.nodes[j]) * grid.weights[j];
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) fail(ErrorKind::Numerical, "non-finite kernel entry");
      op.matrix(i, j) = v;
    }
  return op;
}

cplx det_identity_plus(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) fail(ErrorKind::Arg, "determinant of a non-square matrix");
  if (m.rows() == 0) return 1.0;
  Eigen::MatrixXcd a = m;
  a.diagonal().array() += 1.0;
  if (!a.allFinite()) fail(ErrorKind::Numerical, "non-finite matrix entry");
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(a).determinant();
}

DetResult nystrom_det(const PointKernel& kernel, const std::function<QuadratureGrid(int)>& grid_for_n, int n_start,
                      double tol, int n_max) {
  if (n_start < 1) fail(ErrorKind::Arg, "n_start must be positive");
  int n = n_start;
  QuadratureGrid g = grid_for_n(n);
  cplx prev = det_identity_plus(make_nystrom(kernel, g).matrix);
  for (;;) {
    const int next = 2 * n;
    QuadratureGrid g2 = grid_for_n(next);
    if (static_cast<int>(g2.size()) > n_max)
      fail(ErrorKind::Convergence, "node budget exhausted before the determinant settled");
    const cplx cur = det_identity_plus(make_nystrom(kernel, g2).matrix);
    const double err = std::abs(cur - prev);
    if (err < tol) return DetResult{cur, err, static_cast<int>(g2.size())};
    prev = cur;
    n = next;
  }
}

cplx mu_integral(const std::function<cplx(cplx)>& det_of_mu, const QuadratureGrid& mu_grid, bool include_exp_over_mu,
                 int threads) {
  std::vector<cplx> terms(mu_grid.size());
  parallel_for(
      mu_grid.size(),
      [&](std::size_t k) {
        const cplx mu = mu_grid.nodes[k];
        cplx v = det_of_mu(mu) * mu_grid.weights[k];
        if (include_exp_over_mu) v *= std::exp(-mu) / mu;
        terms[k] = v;
      },
      threads);
  cplx sum = 0.0;
  for (const auto& t : terms) sum += t;
  return sum;
}

QuadratureGrid real_line_grid(double s, double length, int panels, int n) {
  if (!(length > 0.0) || panels < 1 || n < 1) fail(ErrorKind::Arg, "bad real-line grid request");
  std::vector<double> x, w;
  composite_gl(s, s + length, panels, n, x, w);
  QuadratureGrid g;
  g.spec.tag = ContourTag::RealLine;
  g.n_per_segment = n;
  g.contour_integral = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    g.nodes.emplace_back(x[i], 0.0);
    g.weights.emplace_back(w[i], 0.0);
  }
  return g;
}

}  // namespace kpz
