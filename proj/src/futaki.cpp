#include "calabi/futaki.hpp"

#include <cmath>

#include "calabi/quadrature.hpp"

namespace calabi {

namespace {

FutakiEvaluation evaluate(double m, double beta0, double beta_inf,
                          const MomentumProfile& p) {
  FutakiEvaluation ev;
  auto f = [&](double g) {
    const double r = p.phi_at(g) / g;
    return r * r;
  };
  ev.i_phi = gauss_legendre(f, 1.0, 1.0 + m, 64);
  const double coupling = (4.0 / 3.0) * (m * m + 3.0 * m + 3.0) / (m + 2.0);
  ev.boundary_term = 2.0 * (beta0 + (m + 1.0) * beta_inf);
  ev.integral_term = 0.5 * ev.i_phi;
  ev.angle0_term = -coupling * beta0;
  ev.angle_inf_term = -coupling * beta_inf;
  ev.value = ev.boundary_term + ev.integral_term + ev.angle0_term + ev.angle_inf_term;
  return ev;
}

} // namespace

FutakiEvaluation logbf_conical(double m, double beta0, double beta_inf,
                               const MomentumProfile& p) {
  return evaluate(m, beta0, beta_inf, p);
}

FutakiEvaluation logbf_smooth_quadrature(double m, double beta0, double beta_inf,
                                         const MomentumProfile& p) {
  return evaluate(m, beta0, beta_inf, p);
}

double logbf_extremal_closed_form(double m, double C_star, double beta0,
                                  double beta_inf) {
  const double mp1sq = (m + 1.0) * (m + 1.0);
  const double mp2 = m + 2.0;
  const double c_term = -m * m * m * (m * m + 6.0 * m + 6.0) / (12.0 * mp1sq) * C_star;
  const double const_term = m * m * mp2 * mp2 * mp2 / (6.0 * mp1sq);
  const double beta0_term = -2.0 * m * (2.0 * m + 3.0) / (3.0 * mp2) * beta0;
  const double beta_inf_term = 2.0 * m * (m + 3.0) / (3.0 * mp2) * beta_inf;
  return c_term + const_term + beta0_term + beta_inf_term;
}

ConeAngleLine cone_angle_line(double m, double C_star) {
  ConeAngleLine line;
  const double mp1sq = (m + 1.0) * (m + 1.0);
  const double mp2 = m + 2.0;
  line.coef_beta_inf = 2.0 * (m + 3.0) / mp2;
  line.coef_beta0 = -2.0 * (2.0 * m + 3.0) / mp2;
  line.rhs = m * m * (m * m + 6.0 * m + 6.0) / (4.0 * mp1sq) * C_star -
             m * mp2 * mp2 * mp2 / (2.0 * mp1sq);
  return line;
}

ProbeResult conjecture_probe(double m, double beta0, const SolveReport& conical,
                             const SmoothSolveReport& smooth) {
  const ConeAngleLine line = cone_angle_line(m, smooth.C_star);
  ProbeResult probe;
  probe.beta_inf_shooting = conical.spec.beta_inf;
  probe.beta_inf_line = line.beta_inf_on_line(beta0);
  probe.line_residual = line.residual(beta0, conical.spec.beta_inf);
  return probe;
}

} // namespace calabi
