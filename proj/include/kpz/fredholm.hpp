#pragma once

#include <Eigen/Dense>
#include <functional>

#include "kpz/contours.hpp"

namespace kpz {

using PointKernel = std::function<cplx(cplx, cplx)>;

struct NystromOperator {
  QuadratureGrid grid;
  Eigen::MatrixXcd matrix;  // K(z_i, z_j) w_j
};

NystromOperator make_nystrom(const PointKernel& kernel, const QuadratureGrid& grid);

struct DetResult {
  cplx value;
  double est_error = 0.0;
  int n_used = 0;
};

// det(I + M) from the pivots of a partially pivoted LU.
cplx det_identity_plus(const Eigen::MatrixXcd& m);

// Doubles the per-segment node count until two successive determinants agree within tol.
DetResult nystrom_det(const PointKernel& kernel, const std::function<QuadratureGrid(int)>& grid_for_n, int n_start,
                      double tol, int n_max = 640);

// sum over the mu grid of [e^{-mu}/mu] det(mu) w_mu, evaluated in parallel over the nodes.
cplx mu_integral(const std::function<cplx(cplx)>& det_of_mu, const QuadratureGrid& mu_grid,
                 bool include_exp_over_mu = true, int threads = 0);

// Gauss-Legendre grid on (s, s + length) with plain real weights.
QuadratureGrid real_line_grid(double s, double length, int panels, int n);

}  // namespace kpz
