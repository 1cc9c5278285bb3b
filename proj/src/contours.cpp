#include "kpz/contours.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "kpz/quadrature.hpp"

namespace kpz {

namespace {

const double kCbrt2 = std::cbrt(2.0);

Segment line_segment(cplx a, cplx b, std::string label) {
  return Segment{[a, b](double u) { return a + (b - a) * u; }, [a, b](double) { return b - a; }, std::move(label)};
}

Segment arc_segment(cplx center, double r, double th0, double th1, std::string label) {
  return Segment{[=](double u) { return center + r * std::polar(1.0, th0 + (th1 - th0) * u); },
                 [=](double u) { return cplx(0.0, r * (th1 - th0)) * std::polar(1.0, th0 + (th1 - th0) * u); },
                 std::move(label)};
}

// Splits [y0, y1] into pieces no longer than max_len.
std::vector<double> breakpoints(double y0, double y1, double max_len) {
  const int m = std::max(1, static_cast<int>(std::ceil((y1 - y0) / max_len - 1e-12)));
  std::vector<double> out(m + 1);
  for (int i = 0; i <= m; ++i) out[i] = y0 + (y1 - y0) * i / m;
  return out;
}

// Unit pieces next to the dimple where the two contours interact most, longer pieces further out.
std::vector<double> tail_breakpoints(double yd, double height) {
  const double inner = std::min(height, yd + 5.0);
  auto out = breakpoints(yd, inner, 1.0);
  if (height > inner) {
    auto outer = breakpoints(inner, height, 3.0);
    out.insert(out.end(), outer.begin() + 1, outer.end());
  }
  return out;
}

// Vertical line at Re w = x0 with a cos^2 bump of height amp over |Im w| <= yd; returns segments
// in w, mapped through zeta = scale * (w + shift).
ContourSpec bumped_line(double x0, double amp, double yd, double height, double scale, double shift, ContourTag tag) {
  ContourSpec spec;
  spec.tag = tag;
  auto vertical = [&](double ya, double yb, const char* label) {
    spec.segments.push_back(line_segment(scale * cplx(x0 + shift, ya), scale * cplx(x0 + shift, yb), label));
  };
  const auto br = tail_breakpoints(yd, height);
  for (std::size_t i = br.size() - 1; i > 0; --i) vertical(-br[i], -br[i - 1], "tail-");
  const auto bump = breakpoints(-yd, yd, 1.0);
  for (std::size_t i = 0; i + 1 < bump.size(); ++i) {
    const double ya = bump[i], len = bump[i + 1] - bump[i];
    auto z = [=](double u) {
      const double y = ya + len * u;
      const double c = std::cos(kPi * y / (2.0 * yd));
      return scale * cplx(x0 + shift + amp * c * c, y);
    };
    auto dz = [=](double u) {
      const double y = ya + len * u;
      const double dx = -amp * (kPi / (2.0 * yd)) * std::sin(kPi * y / yd);
      return scale * len * cplx(dx, 1.0);
    };
    spec.segments.push_back(Segment{z, dz, "dimple"});
  }
  for (std::size_t i = 0; i + 1 < br.size(); ++i) vertical(br[i], br[i + 1], "tail+");
  return spec;
}

}  // namespace

const char* contour_tag_name(ContourTag tag) {
  switch (tag) {
    case ContourTag::MuContour: return "MuContour";
    case ContourTag::EtaEdge: return "EtaEdge";
    case ContourTag::ZetaEdge: return "ZetaEdge";
    case ContourTag::EtaLargeT: return "EtaLargeT";
    case ContourTag::ZetaLargeT: return "ZetaLargeT";
    case ContourTag::EtaCircleEps: return "EtaCircleEps";
    case ContourTag::ZetaCircleEps: return "ZetaCircleEps";
    case ContourTag::MuCircleEps: return "MuCircleEps";
    case ContourTag::AiryRay: return "AiryRay";
    case ContourTag::RealLine: return "RealLine";
  }
  return "?";
}

QuadratureGrid discretize(const ContourSpec& spec, int n, bool contour_integral) {
  if (n < 1) fail(ErrorKind::Arg, "node count must be positive");
  const auto& gl = gauss_legendre(n);
  QuadratureGrid g;
  g.spec = spec;
  g.n_per_segment = n;
  g.contour_integral = contour_integral;
  const cplx norm = contour_integral ? 1.0 / kTwoPiI : cplx(1.0);
  for (const auto& seg : spec.segments) {
    for (int i = 0; i < n; ++i) {
      const double u = 0.5 * (gl.x[i] + 1.0);
      g.nodes.push_back(seg.z(u));
      g.weights.push_back(0.5 * gl.w[i] * seg.dz(u) * norm);
    }
  }
  return g;
}

QuadratureGrid discretize_periodic(const ContourSpec& spec, int n) {
  if (n < 2) fail(ErrorKind::Arg, "node count must be at least 2");
  if (!spec.closed || spec.segments.size() != 1) fail(ErrorKind::Arg, "periodic rule needs one closed segment");
  QuadratureGrid g;
  g.spec = spec;
  g.n_per_segment = n;
  const auto& seg = spec.segments.front();
  // half-shifted nodes keep the grid off the real axis
  for (int k = 0; k < n; ++k) {
    const double u = (k + 0.5) / n;
    g.nodes.push_back(seg.z(u));
    g.weights.push_back(seg.dz(u) / (static_cast<double>(n) * kTwoPiI));
  }
  return g;
}

double segment_gap(const ContourSpec& spec) {
  double gap = 0.0;
  for (std::size_t i = 0; i + 1 < spec.segments.size(); ++i)
    gap = std::max(gap, std::abs(spec.segments[i].z(1.0) - spec.segments[i + 1].z(0.0)));
  if (spec.closed && !spec.segments.empty())
    gap = std::max(gap, std::abs(spec.segments.back().z(1.0) - spec.segments.front().z(0.0)));
  return gap;
}

QuadratureGrid build_mu_contour(double x_max, int n) {
  if (!(x_max >= 1.0)) fail(ErrorKind::Arg, "x_max must be at least 1");
  if (n < 8) fail(ErrorKind::Arg, "mu contour needs n >= 8");
  std::vector<double> br{0.0};
  for (double b : {2.0, 6.0, 14.0})
    if (b < x_max) br.push_back(b);
  br.push_back(x_max);

  ContourSpec spec;
  spec.tag = ContourTag::MuContour;
  const cplx I(0.0, 1.0);
  // counter-clockwise around the origin: top ray leftward, left semicircle, bottom ray rightward
  for (std::size_t i = br.size() - 1; i > 0; --i)
    spec.segments.push_back(line_segment(br[i] + I, br[i - 1] + I, "ray+"));
  spec.segments.push_back(arc_segment(0.0, 1.0, kPi / 2, kPi, "arc+"));
  spec.segments.push_back(arc_segment(0.0, 1.0, kPi, 1.5 * kPi, "arc-"));
  for (std::size_t i = 0; i + 1 < br.size(); ++i)
    spec.segments.push_back(line_segment(br[i] - I, br[i + 1] - I, "ray-"));
  return discretize(spec, n);
}

double edge_pole_abscissa(double T, double X) { return X / std::cbrt(T); }

double edge_min_pole_distance(const QuadratureGrid& grid, double T, double X) {
  const double p = edge_pole_abscissa(T, X);
  const double spacing = 1.0 / kCbrt2;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& z : grid.nodes) {
    // nearest pole p - k*spacing, k >= 0
    const double k = std::max(0.0, std::round((p - z.real()) / spacing));
    for (double kk : {k - 1.0, k, k + 1.0}) {
      if (kk < 0) continue;
      best = std::min(best, std::abs(z - cplx(p - kk * spacing, 0.0)));
    }
  }
  return best;
}

EdgeContours build_edge_contours(double T, double X, double tail_height, int n, bool with_dimple) {
  if (!(T > 0.0) || !std::isfinite(T)) fail(ErrorKind::Arg, "T must be positive");
  if (!std::isfinite(X)) fail(ErrorKind::Arg, "X must be finite");
  if (!(tail_height >= 4.0)) fail(ErrorKind::Arg, "tail_height must be at least 4");
  if (n < 8) fail(ErrorKind::Arg, "edge contours need n >= 8");

  const double scale = std::min(1.0, 1.0 / std::cbrt(T));
  const double height = tail_height * std::max(1.0, 1.0 / std::sqrt(T));
  const double clearance = 0.5;

  EdgeContours out;
  out.scale = scale;
  double amp = 0.0, yd = 1.0;
  const double p_w = edge_pole_abscissa(T, X) / scale;
  if (with_dimple) {
    amp = std::max(0.7, p_w + kC3 / 2 + clearance);
    yd = std::max(2.0, 2.0 * amp);
    if (yd + 1.0 > height) fail(ErrorKind::Geometry, "dimple does not fit inside the truncated contour");
  }
  out.dimple = DimpleSpec{edge_pole_abscissa(T, X), clearance * scale, amp * scale, yd * scale};

  const bool large = scale < 1.0;
  const ContourTag zt = large ? ContourTag::ZetaLargeT : ContourTag::ZetaEdge;
  const ContourTag et = large ? ContourTag::EtaLargeT : ContourTag::EtaEdge;
  out.zeta = discretize(bumped_line(-kC3 / 2, amp, yd, height, scale, 0.0, zt), n);
  out.eta = discretize(bumped_line(-kC3 / 2, amp, yd, height, scale, kC3, et), n);
  return out;
}

EpsCircles build_eps_circles(double eps, double rho_plus, int n_eta, int n_zeta, int n_mu) {
  if (!(eps > 0.0 && eps < 0.25)) fail(ErrorKind::Arg, "eps must lie in (0, 1/4)");
  if (!(rho_plus > 0.0 && rho_plus <= 1.0)) fail(ErrorKind::Arg, "rho_plus must lie in (0, 1]");
  EpsCircles c;
  const double gamma = std::sqrt(eps);
  const double q = 0.5 * (1.0 + gamma), p = 0.5 * (1.0 - gamma);
  c.tau = p / q;
  c.alpha = (1.0 - rho_plus) / rho_plus;
  c.delta = 0.5 * gamma;
  c.varsigma = 0.5 * gamma;
  const double left_limit = c.alpha > 0.0 ? -1.0 / c.alpha : -std::numeric_limits<double>::infinity();
  if (!std::isfinite(left_limit)) fail(ErrorKind::Arg, "rho_plus = 1 puts the circles at infinity");

  auto circle = [](double lo, double hi, ContourTag tag) {
    ContourSpec s;
    s.tag = tag;
    s.closed = true;
    s.segments.push_back(arc_segment(0.5 * (lo + hi), 0.5 * (hi - lo), 0.0, 2.0 * kPi, "circle"));
    return s;
  };
  c.eta = discretize_periodic(circle(left_limit + 2.0 * c.delta, 1.0 - c.delta, ContourTag::EtaCircleEps), n_eta);
  c.zeta = discretize_periodic(circle(left_limit + c.varsigma, 1.0 + c.varsigma, ContourTag::ZetaCircleEps), n_zeta);
  const double r_mu = 0.5 * (1.0 + c.tau);
  c.mu = discretize_periodic(circle(-r_mu, r_mu, ContourTag::MuCircleEps), n_mu);

  double min_ratio = std::numeric_limits<double>::infinity(), max_ratio = 0.0;
  for (const auto& z : c.zeta.nodes)
    for (const auto& e : c.eta.nodes) {
      const double r = std::abs(z) / std::abs(e);
      min_ratio = std::min(min_ratio, r);
      max_ratio = std::max(max_ratio, r);
    }
  if (!(min_ratio > 1.0) || !(max_ratio < 1.0 / c.tau))
    fail(ErrorKind::Constraint, "|zeta/eta| leaves (1, 1/tau) on the node grid");
  return c;
}

std::string grid_to_json(const QuadratureGrid& grid) {
  nlohmann::json j;
  j["tag"] = contour_tag_name(grid.tag());
  j["n_per_segment"] = grid.n_per_segment;
  j["closed"] = grid.spec.closed;
  auto& nodes = j["nodes"] = nlohmann::json::array();
  auto& weights = j["weights"] = nlohmann::json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    nodes.push_back({grid.nodes[i].real(), grid.nodes[i].imag()});
    weights.push_back({grid.weights[i].real(), grid.weights[i].imag()});
  }
  return j.dump();
}

}  // namespace kpz
