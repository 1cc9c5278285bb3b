#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kpz/specialfn.hpp"

namespace kpz {

enum class ContourTag {
  MuContour,
  EtaEdge,
  ZetaEdge,
  EtaLargeT,
  ZetaLargeT,
  EtaCircleEps,
  ZetaCircleEps,
  MuCircleEps,
  AiryRay,
  RealLine,
};

const char* contour_tag_name(ContourTag tag);

// One smooth piece, parametrized over u in [0, 1].
struct Segment {
  std::function<cplx(double)> z;
  std::function<cplx(double)> dz;
  std::string label;
};

struct ContourSpec {
  std::vector<Segment> segments;
  bool closed = false;
  ContourTag tag = ContourTag::RealLine;
};

// Weights already contain the 1/(2 pi i) of a contour integral; real-line grids carry plain weights.
struct QuadratureGrid {
  std::vector<cplx> nodes;
  std::vector<cplx> weights;
  ContourSpec spec;
  int n_per_segment = 0;
  bool contour_integral = true;

  std::size_t size() const { return nodes.size(); }
  ContourTag tag() const { return spec.tag; }
};

// Bump of the edge zeta contour, in the rescaled zeta variable. radius is the guaranteed
// horizontal clearance between the bump tip and the rightmost Gamma pole.
struct DimpleSpec {
  double pole_abscissa = 0.0;
  double radius = 0.0;
  double amplitude = 0.0;
  double half_height = 0.0;
};

// Gauss-Legendre with n nodes on every segment.
QuadratureGrid discretize(const ContourSpec& spec, int n, bool contour_integral = true);
// Periodic trapezoid rule on a single closed segment.
QuadratureGrid discretize_periodic(const ContourSpec& spec, int n);

double segment_gap(const ContourSpec& spec);

QuadratureGrid build_mu_contour(double x_max, int n);

struct EdgeContours {
  QuadratureGrid eta;
  QuadratureGrid zeta;
  DimpleSpec dimple;
  double scale = 1.0;  // zeta = scale * w, scale = min(1, T^{-1/3})
};

inline constexpr double kC3 = 0.39685026299204984;  // 2^{-4/3}

// with_dimple = false gives the fan contours.
EdgeContours build_edge_contours(double T, double X, double tail_height, int n, bool with_dimple = true);

// Rightmost pole of Gamma(2^{1/3} zeta - 2^{1/3} X T^{-1/3}) and its spacing.
double edge_pole_abscissa(double T, double X);
double edge_min_pole_distance(const QuadratureGrid& grid, double T, double X);

struct EpsCircles {
  QuadratureGrid eta;
  QuadratureGrid zeta;
  QuadratureGrid mu;
  double alpha = 1.0;
  double tau = 0.0;
  double delta = 0.0;
  double varsigma = 0.0;
};

EpsCircles build_eps_circles(double eps, double rho_plus, int n_eta = 96, int n_zeta = 96, int n_mu = 128);

std::string grid_to_json(const QuadratureGrid& grid);

}  // namespace kpz
