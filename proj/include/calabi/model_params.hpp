#pragma once

#include <optional>
#include <stdexcept>

namespace calabi {

// Thrown when inputs violate the admissible parameter ranges.
struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// One conical boundary-value instance on the momentum interval [1, m+1].
// alpha = beta0 - beta_inf is the free shooting parameter; beta_inf is derived.
struct ProblemSpec {
  double m = 0.0;        // Kahler-class parameter, > 0
  double beta0 = 0.0;    // cone angle at the zero divisor / 2*pi, > 0
  double alpha = 0.0;    // beta0 - beta_inf, < beta0
  double beta_inf = 0.0; // derived, = beta0 - alpha, > 0

  static ProblemSpec from_alpha(double m, double beta0, double alpha);
  static ProblemSpec from_angles(double m, double beta0, double beta_inf);
};

// Coefficients of the conical momentum ODE (2g + phi) phi' = B g^3/2 + C g.
struct ConicalCoeffs {
  double B = 0.0; // < 0 for valid specs
  double C = 0.0; // > 0 for valid specs
};

// Coefficients of the smooth ODE (2x + psi) psi' = A x^4/3 + B x^3/2 + C x.
struct SmoothCoeffs {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
};

// Sign structure of p(g)g on [1, m+1]: gamma0 is its unique root there,
// gamma00 the critical point (reported only when it lies inside the interval).
struct PolyInfo {
  double gamma0 = 0.0;
  std::optional<double> gamma00;
};

ConicalCoeffs conical_coeffs(const ProblemSpec& spec);

// p(g) = B g^2/2 + C and the cubic p(g) g.
double poly_p(double gamma, const ConicalCoeffs& c);
double poly_p_gamma(double gamma, const ConicalCoeffs& c);

PolyInfo poly_info(const ConicalCoeffs& c, double m);

// P(g) = int_1^g p(y) y dy, in closed form.
double integral_P(double gamma, const ConicalCoeffs& c);

// Q(g) = int_1^g q(y) dy = (g^2-1)^2 / (2 m (m+2)); q = dQ/dg.
double derivative_Q(double gamma, double m);
double poly_q(double gamma, double m);

// Smooth-case coefficient maps A(C), B(C) at fixed m.
SmoothCoeffs smooth_coeffs(double C, double m);

} // namespace calabi
