#include "kpz/validation.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <random>

#include "kpz/asep.hpp"
#include "kpz/kernels.hpp"

namespace kpz {

namespace {

double shape1(double a, double b) {
  const double A = 1.0 + std::abs(a);
  return std::tgamma(b / A) / A + 1.0 / b;
}

double shape2(double a, double b) {
  const double A = 1.0 + std::abs(a), e = 0.5;
  return std::tgamma(b / A) / A + 1.0 / (b * std::pow(A, 1.5)) + std::pow(A, e) * std::pow(b, -1.0 - e);
}

double shape3(double a, double) {
  return std::exp(-2.0 / 3.0 * std::pow(a, 1.5)) * std::pow(1.0 + a, -0.25);
}

double shape4(double a, double b) {
  // any c > pi/2 is allowed; c = 2
  return std::exp(2.0 * b * std::sqrt(std::abs(a)));
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (double a = lo; a <= hi + 1e-12; a += step) g.push_back(a);
  return g;
}

FittedBound fit(const std::string& name, const std::function<double(double)>& ratio, const std::vector<double>& coarse,
                const std::vector<double>& fine) {
  FittedBound f;
  f.name = name;
  for (double a : coarse) f.C = std::max(f.C, ratio(a));
  double m = 0.0;
  for (double a : fine) m = std::max(m, ratio(a));
  f.points = coarse.size() + fine.size();
  f.drift = f.C > 0.0 ? m / f.C : std::numeric_limits<double>::infinity();
  return f;
}

Check make_check(std::string name, double value, double limit, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.limit = limit;
  c.pass = std::isfinite(value) && value <= limit;
  c.detail = std::move(detail);
  return c;
}

}  // namespace

std::vector<FittedBound> airy_transform_bounds(const std::vector<double>& b_values) {
  std::vector<FittedBound> out;
  for (double b : b_values) {
    const std::string tag = "(b=" + std::to_string(b).substr(0, 4) + ")";
    auto ag = [b](double a) { return std::abs(airy_gamma({a, b, 0.0})); };
    auto ar = [b](double a) { return std::abs(airy_recip_gamma({a, b, 0.0})); };
    out.push_back(fit("AiGamma a>=0 " + tag, [&](double a) { return ag(a) / shape1(a, b); }, grid(0, 8, 2),
                      grid(0, 14, 0.5)));
    out.push_back(fit("AiGamma a<=0 " + tag, [&](double a) { return ag(a) / shape2(a, b); }, grid(-8, 0, 2),
                      grid(-14, 0, 0.5)));
    out.push_back(fit("AiGamma_recip a>=0 " + tag, [&](double a) { return ar(a) / shape3(a, b); }, grid(0, 8, 2),
                      grid(0, 14, 0.5)));
    out.push_back(fit("AiGamma_recip a<=0 " + tag, [&](double a) { return ar(a) / shape4(a, b); }, grid(-8, 0, 2),
                      grid(-14, 0, 0.5)));
  }
  return out;
}

double prefactor_deviation(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorKind::Arg, "eps must lie in (0, 1)");
  const double g = std::sqrt(eps), tau = (1.0 - g) / (1.0 + g);
  double worst = 0.0;
  for (int ir = 0; ir <= 8; ++ir)
    for (int ia = 0; ia < 32; ++ia) {
      const cplx mu = std::polar(0.25 * ir, 2.0 * kPi * ia / 32.0);
      worst = std::max(worst, std::abs(prefactor_product(g * mu, tau) - std::exp(-0.5 * mu)));
    }
  return worst / g;
}

TailTable tail_table(const std::vector<double>& T, const std::vector<double>& y, const NumericConfig& cfg) {
  TailTable t;
  const double anchor = 1.0 - f_edge(1.0, 0.0, tail_argument(1.0, 1.0), cfg);
  t.c1 = anchor / tail_bound_edge(1.0, 1.0, 1.0, t.c2, t.c3);
  for (double TT : T)
    for (double yy : y) {
      TailRow r;
      r.T = TT;
      r.y = yy;
      r.one_minus_F = 1.0 - f_edge(TT, 0.0, tail_argument(TT, yy), cfg);
      r.bound = tail_bound_edge(TT, yy, t.c1, t.c2, t.c3);
      t.rows.push_back(r);
    }
  return t;
}

std::vector<SandwichRow> sandwich_table(const std::vector<double>& T, const std::vector<double>& y,
                                        const NumericConfig& cfg) {
  std::vector<SandwichRow> rows;
  for (double TT : T)
    for (double yy : y) rows.push_back({TT, yy, eq_sandwich_edge(TT, yy, cfg)});
  return rows;
}

std::vector<Check> run_validation(const NumericConfig& cfg, bool full) {
  std::vector<Check> out;
  std::mt19937_64 rng(20110);
  std::uniform_real_distribution<double> U(0.0, 1.0);

  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const cplx mu = std::polar(0.2 + 4.8 * U(rng), kPi * (0.5 + U(rng)));
    const cplx z(-1.8 + 1.6 * U(rng), -3.0 + 6.0 * U(rng));
    worst = std::max(worst, std::abs(csc_integral_quadrature(mu, z) - csc_integral_closed(mu, z)));
  }
  out.push_back(make_check("csc identity", worst, 1e-8, "20 random (mu, z)"));

  worst = 0.0;
  for (auto [b, c] : std::vector<std::pair<double, double>>{{0.5, 0.0}, {1.0, -1.0}, {0.3, 2.0}, {1.5, 0.5}})
    worst = std::max(worst, std::abs(airy_moment_contour_side(b, c) - airy_moment_closed_side(b, c)));
  out.push_back(make_check("Airy moment identity", worst, 1e-8, "4 (b, c) pairs"));

  worst = 0.0;
  for (cplx r : {cplx(0.0), cplx(1.0), cplx(2.0, 1.0)})
    worst = std::max(worst, std::abs(airy_ai_contour(r) - airy_ai_series(r)));
  out.push_back(make_check("Airy contour vs series", worst, 1e-8));

  worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const cplx z(-10.0 + 20.0 * U(rng), -10.0 + 20.0 * U(rng));
    const cplx g1 = gamma_complex(z + 1.0);
    if (std::abs(z - std::round(z.real())) < 1e-3) continue;
    worst = std::max(worst, std::abs(g1 - z * gamma_complex(z)) / std::abs(g1));
  }
  out.push_back(make_check("Gamma functional equation", worst, 1e-10));

  out.push_back(make_check("Gartner identity", std::max(gartner_identity_check(0.1), gartner_identity_check(0.01)),
                           1e-12, "eps 0.1, 0.01"));

  {
    const double e1 = std::abs(q_gamma(0.99, cplx(2.5, 1.0)) - gamma_complex(cplx(2.5, 1.0)));
    const double e2 = std::abs(q_gamma(0.999, cplx(2.5, 1.0)) - gamma_complex(cplx(2.5, 1.0)));
    out.push_back(make_check("q-Gamma limit", e2, std::min(e1, 1e-2),
                             "q=0.99: " + std::to_string(e1) + ", q=0.999: " + std::to_string(e2)));
  }

  {
    const double C = prefactor_deviation(1e-2), d = prefactor_deviation(1e-4);
    out.push_back(make_check("prefactor asymptotics", d, C, "C fitted at eps=1e-2 is " + std::to_string(C)));
  }

  for (const auto& f : airy_transform_bounds())
    out.push_back(make_check("transform bound " + f.name, f.drift, 10.0, "C = " + std::to_string(f.C)));

  if (full) {
    const double a = f_edge(10.0, 0.0, 0.0, cfg), b = ktilde_point(10.0, 0.0, cfg).F;
    out.push_back(make_check("representation triangle", std::abs(a - b), 1e-4, "T=10, s=0"));
  }
  return out;
}

std::string checks_to_json(const std::vector<Check>& checks) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& c : checks)
    j.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}, {"detail", c.detail}});
  return j.dump(2);
}

std::string tails_to_json(const TailTable& t, const std::vector<SandwichRow>& s) {
  nlohmann::json j;
  j["upper_tail_bound"] = {{"c1", t.c1}, {"c2", t.c2}, {"c3", t.c3}, {"rows", nlohmann::json::array()}};
  for (const auto& r : t.rows)
    j["upper_tail_bound"]["rows"].push_back(
        {{"T", r.T}, {"y", r.y}, {"one_minus_F", r.one_minus_F}, {"bound", r.bound}, {"holds", r.holds()}});
  j["equilibrium"] = nlohmann::json::array();
  for (const auto& r : s)
    j["equilibrium"].push_back({{"T", r.T},
                                {"y", r.y},
                                {"lower_tail", {r.b.lower_lo, r.b.lower_hi}},
                                {"upper_tail", {r.b.upper_lo, r.b.upper_hi}},
                                {"ordered", r.ordered()}});
  return j.dump(2);
}

}  // namespace kpz
