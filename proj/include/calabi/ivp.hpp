#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "calabi/model_params.hpp"

namespace calabi {

// Right-hand-side source polynomial q(g) = c4 g^4 + c3 g^3 + c1 g.
// Conical problem: c4 = 0, c3 = B/2, c1 = C.  Smooth problem: c4 = A/3.
struct SourcePoly {
  double c4 = 0.0;
  double c3 = 0.0;
  double c1 = 0.0;

  double value(double g) const { return ((c4 * g + c3) * g * g + c1) * g; }
  double deriv(double g) const { return (4.0 * c4 * g + 3.0 * c3) * g * g + c1; }

  static SourcePoly conical(const ConicalCoeffs& c) { return {0.0, 0.5 * c.B, c.C}; }
  static SourcePoly smooth(const SmoothCoeffs& c) { return {c.A / 3.0, 0.5 * c.B, c.C}; }
};

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double breakdown_floor = 1e-12;
  std::size_t max_steps = 1000000;
  std::size_t dense_grid_n = 4097;
};

struct BreakdownInfo {
  double gamma_star = 0.0;     // in (1, m+1]
  double v_prime_limit = 0.0;  // < 0
};

struct integration_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical solution of v' = 2*sqrt(2)*sqrt(v) + q(g), v(1) = 2, on [1, m+1]
// or up to the breakdown point where v reaches zero.
struct Trajectory {
  std::vector<double> grid;    // uniform dense grid starting at 1
  std::vector<double> values;  // v on the grid, >= 0
  std::vector<double> derivs;  // v' on the grid (from the right-hand side)
  std::optional<BreakdownInfo> breakdown;

  // accepted integration steps, kept for continuous evaluation
  std::vector<double> knot_gamma;
  std::vector<double> knot_v;
  std::vector<double> knot_dv;

  SourcePoly source;
  double m = 0.0;
  double gamma0 = 0.0; // sign-change point of the source on [1, m+1]

  double end_gamma() const { return knot_gamma.back(); }
  double final_value() const { return knot_v.back(); }
  double eval(double gamma) const;       // cubic Hermite between accepted steps
  double eval_deriv(double gamma) const; // right-hand side at (gamma, eval(gamma))
};

enum class EndpointClass { Full, Breakdown };

Trajectory integrate(const ConicalCoeffs& c, double m, const IntegratorConfig& cfg = {});

// Generic entry point shared by the conical and smooth problems. gamma0 is the
// point where the source turns negative; breakdown is only admitted past it.
Trajectory integrate_source(const SourcePoly& q, double gamma0, double m,
                            const IntegratorConfig& cfg = {});

EndpointClass classify_endpoint(const Trajectory& t, double m);

struct LocalMax {
  double t_max = 0.0;
  double v_max = 0.0;
};

// Interior local maximum of v, if any; trajectories here have at most one.
std::optional<LocalMax> local_max(const Trajectory& t);

} // namespace calabi
