#include "calabi/model_params.hpp"

#include <cmath>

namespace calabi {

static void check_spec(double m, double beta0, double alpha) {
  if (!(m > 0.0)) throw domain_error("ProblemSpec: m must be positive");
  if (!(beta0 > 0.0)) throw domain_error("ProblemSpec: beta0 must be positive");
  if (!(alpha < beta0)) throw domain_error("ProblemSpec: alpha must be < beta0");
}

ProblemSpec ProblemSpec::from_alpha(double m, double beta0, double alpha) {
  check_spec(m, beta0, alpha);
  return ProblemSpec{m, beta0, alpha, beta0 - alpha};
}

ProblemSpec ProblemSpec::from_angles(double m, double beta0, double beta_inf) {
  if (!(beta_inf > 0.0)) throw domain_error("ProblemSpec: beta_inf must be positive");
  check_spec(m, beta0, beta0 - beta_inf);
  return ProblemSpec{m, beta0, beta0 - beta_inf, beta_inf};
}

ConicalCoeffs conical_coeffs(const ProblemSpec& spec) {
  check_spec(spec.m, spec.beta0, spec.alpha);
  const double m = spec.m;
  const double denom = m * (m + 2.0);
  const double b0 = spec.beta0;
  const double bi = spec.beta_inf;
  ConicalCoeffs c;
  c.B = -4.0 * (b0 + bi) / denom;
  c.C = 2.0 * (b0 * (m + 1.0) * (m + 1.0) + bi) / denom;
  return c;
}

double poly_p(double gamma, const ConicalCoeffs& c) {
  return 0.5 * c.B * gamma * gamma + c.C;
}

double poly_p_gamma(double gamma, const ConicalCoeffs& c) {
  return poly_p(gamma, c) * gamma;
}

PolyInfo poly_info(const ConicalCoeffs& c, double m) {
  if (!(c.B < 0.0) || !(c.C > 0.0))
    throw domain_error("poly_info: requires B < 0 and C > 0");
  PolyInfo info;
  info.gamma0 = std::sqrt(-2.0 * c.C / c.B);
  const double g00 = std::sqrt(-2.0 * c.C / (3.0 * c.B));
  if (g00 >= 1.0 && g00 <= m + 1.0) info.gamma00 = g00;
  return info;
}

double integral_P(double gamma, const ConicalCoeffs& c) {
  const double g2 = gamma * gamma;
  return c.B * (g2 * g2 - 1.0) / 8.0 + c.C * (g2 - 1.0) / 2.0;
}

double derivative_Q(double gamma, double m) {
  const double g2m1 = gamma * gamma - 1.0;
  return g2m1 * g2m1 / (2.0 * m * (m + 2.0));
}

double poly_q(double gamma, double m) {
  return 2.0 * gamma * (gamma + 1.0) * (gamma - 1.0) / (m * (m + 2.0));
}

SmoothCoeffs smooth_coeffs(double C, double m) {
  if (!(m > 0.0)) throw domain_error("smooth_coeffs: m must be positive");
  const double mp1sq = (m + 1.0) * (m + 1.0);
  SmoothCoeffs s;
  s.A = (3.0 * C / m) * (1.0 - 1.0 / mp1sq) - (6.0 / m) * (1.0 + 1.0 / mp1sq);
  s.B = -(2.0 * C / m) * (m + 1.0 - 1.0 / mp1sq) + (4.0 / m) * (m + 1.0 + 1.0 / mp1sq);
  s.C = C;
  return s;
}

} // namespace calabi
