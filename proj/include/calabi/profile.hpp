#pragma once

#include <stdexcept>
#include <vector>

#include "calabi/ivp.hpp"
#include "calabi/model_params.hpp"

namespace calabi {

struct profile_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Momentum profile phi on [1, m+1], reconstructed from a full trajectory via
// phi = sqrt(2 v) - 2 gamma. The derivative fields come from the ODE and its
// gamma-derivative in closed form, not from finite differences.
struct MomentumProfile {
  std::vector<double> grid;
  std::vector<double> phi;
  std::vector<double> dphi;
  std::vector<double> ddphi;

  double m = 0.0;
  double beta0 = 0.0;    // expected slope at gamma = 1 (1 for the smooth case)
  double beta_inf = 0.0; // expected -slope at gamma = m+1
  SourcePoly source;

  // step mesh copied from the trajectory, for evaluation between grid points
  std::vector<double> knot_gamma;
  std::vector<double> knot_v;
  std::vector<double> knot_dv;

  double v_at(double gamma) const;
  double phi_at(double gamma) const;
  double dphi_at(double gamma) const;
  double ddphi_at(double gamma) const;
  // higher scalar curvature from the closed-form derivative fields
  double lambda_at(double gamma) const;
};

MomentumProfile profile_from_trajectory(const Trajectory& t, const ConicalCoeffs& c);
MomentumProfile profile_from_smooth_trajectory(const Trajectory& t,
                                               const SmoothCoeffs& c);

// Pointwise lambda over the interior grid points (endpoints excluded), from the
// profile's stored fields so that perturbed fields register as non-constant.
std::vector<double> higher_scalar_curvature(const MomentumProfile& p);

// Legendre-transform reconstruction: s(tau) = int_{m/2}^{tau} dy / phi(y) with
// tau = gamma - 1, plus f''(s) = phi(tau(s)) sampled along the tau grid.
struct PotentialReconstruction {
  std::vector<double> tau_grid;
  std::vector<double> s_values;
  std::vector<double> fpp_values;
};

struct reconstruction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PotentialReconstruction legendre_reconstruct(const MomentumProfile& p);

// s(tau) anchored at s(m/2) = 0; tau must stay inside the endpoint exclusion
// zone [1e-8 m, m - 1e-8 m].
double legendre_s(const MomentumProfile& p, double tau);

// Extrapolated boundary slopes: phi(tau)/tau -> beta0 and
// phi(tau)/(m - tau) -> beta_inf.
struct ConeCheck {
  double c2_zero = 0.0;
  double c2_inf = 0.0;
};

ConeCheck asymptotic_cone_check(const MomentumProfile& p);

// Extrapolated logarithmic slopes of the reconstructed s:
// ds/d(ln tau) -> 1/beta0 at tau = 0 and ds/d(ln(m - tau)) -> -1/beta_inf.
double legendre_log_slope_zero(const MomentumProfile& p);
double legendre_log_slope_inf(const MomentumProfile& p);

// Richardson extrapolation to zero of f sampled on h0, h0/2, ..., h0/2^(n-1).
double richardson_limit(const std::vector<double>& values);

} // namespace calabi
