#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "calabi/ivp.hpp"
#include "calabi/model_params.hpp"

namespace calabi {

struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One probe of the shooting map: residual = v(m+1) - 2(m+1)^2, or a breakdown
// (counted as "below target"; residual then holds -inf).
struct BracketPoint {
  double param = 0.0; // alpha for the conical solve, C for the smooth solve
  double residual = 0.0;
  bool breakdown = false;
};

struct SolveReport {
  ProblemSpec spec; // with the solved alpha and beta_inf
  ConicalCoeffs coeffs;
  double residual = 0.0;
  int iterations = 0;
  std::vector<BracketPoint> bracket_history;
  Trajectory trajectory;
};

struct SmoothSolveReport {
  double C_star = 0.0;
  SmoothCoeffs coeffs;
  double residual = 0.0;
  int iterations = 0;
  std::vector<BracketPoint> bracket_history;
  Trajectory trajectory;
};

// Shooting over alpha for the conical problem. Convergence criterion:
// |v(m+1) - 2(m+1)^2| <= tol * (m+1)^2. An optional hint seeds the search
// (a hint already satisfying the criterion converges immediately).
SolveReport solve_conical(double m, double beta0, double tol = 1e-10,
                          std::optional<double> alpha_hint = std::nullopt,
                          std::size_t grid_n = 4097);

// Shooting over C for the smooth problem; the residual is checked for
// monotonicity over the probe points and the solve aborts if that fails.
SmoothSolveReport solve_smooth(double m, double tol = 1e-10,
                               std::optional<double> c_hint = std::nullopt,
                               std::size_t grid_n = 4097);

// Boundary M(m, beta0) of the full-existence interval (M, beta0): integration
// at M + tol is Full, at M - tol it breaks down.
double locate_breakdown_boundary(double m, double beta0, double tol = 1e-10);

// Integrator settings used by the solvers for a given shooting tolerance.
IntegratorConfig solver_integrator_config(double tol);

} // namespace calabi
