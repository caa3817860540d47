#pragma once

#include "calabi/profile.hpp"
#include "calabi/shooting.hpp"

namespace calabi {

// Top log Bando-Futaki evaluation. The four summands:
//   value = 2(beta0 + (m+1) beta_inf)            boundary_term
//         + (1/2) int_1^{m+1} (phi/g)^2 dg       integral_term
//         - (4/3) (m^2+3m+3)/(m+2) beta0         angle0_term
//         - (4/3) (m^2+3m+3)/(m+2) beta_inf      angle_inf_term
struct FutakiEvaluation {
  double value = 0.0;
  double i_phi = 0.0; // int (phi/g)^2 dg
  double boundary_term = 0.0;
  double integral_term = 0.0;
  double angle0_term = 0.0;
  double angle_inf_term = 0.0;
};

FutakiEvaluation logbf_conical(double m, double beta0, double beta_inf,
                               const MomentumProfile& p);

// Same three-term structure with the smooth profile psi; the cone angles enter
// only through the closed-form terms.
FutakiEvaluation logbf_smooth_quadrature(double m, double beta0, double beta_inf,
                                         const MomentumProfile& p);

// Closed form at the smooth higher-extremal solution:
//   -m^3(m^2+6m+6)/(12(m+1)^2) C + m^2(m+2)^3/(6(m+1)^2)
//   - 2m(2m+3)/(3(m+2)) beta0 + 2m(m+3)/(3(m+2)) beta_inf
double logbf_extremal_closed_form(double m, double C_star, double beta0,
                                  double beta_inf);

// Zero locus of the invariant in the (beta0, beta_inf) plane at fixed m:
//   coef_beta_inf * beta_inf + coef_beta0 * beta0 = rhs
struct ConeAngleLine {
  double coef_beta_inf = 0.0; // 2(m+3)/(m+2), > 0 for all m > 0
  double coef_beta0 = 0.0;    // -2(2m+3)/(m+2)
  double rhs = 0.0;

  double beta_inf_on_line(double beta0) const {
    return (rhs - coef_beta0 * beta0) / coef_beta_inf;
  }
  double residual(double beta0, double beta_inf) const {
    return coef_beta_inf * beta_inf + coef_beta0 * beta0 - rhs;
  }
};

ConeAngleLine cone_angle_line(double m, double C_star);

// Where the shooting angles land relative to the line; reported, never asserted.
struct ProbeResult {
  double line_residual = 0.0;
  double beta_inf_shooting = 0.0;
  double beta_inf_line = 0.0;
};

ProbeResult conjecture_probe(double m, double beta0, const SolveReport& conical,
                             const SmoothSolveReport& smooth);

} // namespace calabi
