#pragma once

#include <functional>
#include <vector>

#include "calabi/profile.hpp"

namespace calabi {

struct InvariantEntry {
  double computed = 0.0;
  double target = 0.0;
  double deviation = 0.0;
};

InvariantEntry make_entry(double computed, double target);

struct Volumes {
  double vol_x = 0.0;    // quadrature of 2(2pi)^2 int gamma dgamma
  double vol_s0 = 0.0;   // 2 pi
  double vol_sinf = 0.0; // 2 pi (m+1)
};

struct AverageCurvatures {
  double lambda0 = 0.0;          // -8 / (m(m+2))
  double lambda1 = 0.0;          // -4 (beta0+beta_inf) / (m(m+2))
  double relation_residual = 0.0; // lambda0 vs lambda1 + divisor corrections
};

// Integral of the top Chern representative: quadrature of the interior term
// d/dg[(phi/g + 2) phi'] plus the exact divisor corrections 2(beta-1).
double chern_integral(const MomentumProfile& p, double beta0, double beta_inf);

// Interior term alone (the quadrature part of chern_integral).
double chern_interior_term(const MomentumProfile& p);

Volumes volumes(const MomentumProfile& p, double m);

AverageCurvatures average_curvatures(double m, double beta0, double beta_inf);

// Radial mollifier identity: values of int_0^inf 2 r eps^2/(r^2+eps^2)^2 g(r) dr
// per eps; the sequence converges to g(0).
std::vector<double> mollifier_limit(const std::function<double(double)>& g,
                                    const std::vector<double>& eps_sequence);

struct InvariantReport {
  InvariantEntry chern;      // target -4
  InvariantEntry vol_x;      // target (2pi)^2 m(m+2)
  InvariantEntry vol_s0;     // target 2pi
  InvariantEntry vol_sinf;   // target 2pi(m+1)
  InvariantEntry lambda0;    // target -8/(m(m+2))
  InvariantEntry lambda1;    // target -4(beta0+beta_inf)/(m(m+2))
  double relation_residual = 0.0;
  double interior_chern_term = 0.0;  // quadrature value, target -2(beta0+beta_inf)
  double lambda1_quadrature = 0.0;   // 2 * interior term / (m(m+2))
};

InvariantReport invariant_report(const MomentumProfile& p, double m, double beta0,
                                 double beta_inf);

} // namespace calabi
