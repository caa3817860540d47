#include "calabi/invariants.hpp"

#include <cmath>

#include "calabi/quadrature.hpp"

namespace calabi {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
}

InvariantEntry make_entry(double computed, double target) {
  return InvariantEntry{computed, target, std::abs(computed - target)};
}

double chern_interior_term(const MomentumProfile& p) {
  // d/dg[(phi/g + 2) phi'] = phi'(phi' g - phi)/g^2 + (phi/g + 2) phi''
  auto f = [&](double g) {
    const double fi = p.phi_at(g);
    const double d = p.dphi_at(g);
    const double dd = p.ddphi_at(g);
    return d * (d * g - fi) / (g * g) + (fi / g + 2.0) * dd;
  };
  return gauss_legendre(f, 1.0, 1.0 + p.m, 64);
}

double chern_integral(const MomentumProfile& p, double beta0, double beta_inf) {
  return chern_interior_term(p) + 2.0 * (beta0 - 1.0) + 2.0 * (beta_inf - 1.0);
}

Volumes volumes(const MomentumProfile& p, double m) {
  (void)p; // the phi-dependence cancels; the fibre integral leaves 2 int gamma
  Volumes v;
  v.vol_x = kTwoPi * kTwoPi *
            gauss_legendre([](double g) { return 2.0 * g; }, 1.0, 1.0 + m, 64);
  v.vol_s0 = kTwoPi;
  v.vol_sinf = kTwoPi * (m + 1.0);
  return v;
}

AverageCurvatures average_curvatures(double m, double beta0, double beta_inf) {
  if (!(m > 0.0) || !(beta0 > 0.0) || !(beta_inf > 0.0))
    throw domain_error("average_curvatures: inputs must be positive");
  AverageCurvatures a;
  const double denom = m * (m + 2.0);
  a.lambda0 = -8.0 / denom;
  a.lambda1 = -4.0 * (beta0 + beta_inf) / denom;
  const double vol_x = kTwoPi * kTwoPi * denom;
  const double vol_s0 = kTwoPi;
  const double vol_sinf = kTwoPi * (m + 1.0);
  const double rhs = a.lambda1 + 8.0 * M_PI * (beta0 - 1.0) * vol_s0 / vol_x +
                     8.0 * M_PI * (beta_inf - 1.0) / (m + 1.0) * vol_sinf / vol_x;
  a.relation_residual = a.lambda0 - rhs;
  return a;
}

std::vector<double> mollifier_limit(const std::function<double(double)>& g,
                                    const std::vector<double>& eps_sequence) {
  // substitute u = r^2/(r^2+eps^2); the kernel becomes du exactly
  std::vector<double> out;
  out.reserve(eps_sequence.size());
  for (double eps : eps_sequence) {
    if (!(eps > 0.0)) throw domain_error("mollifier_limit: eps must be positive");
    auto integrand = [&](double u) {
      const double r = eps * std::sqrt(u / (1.0 - u));
      return g(r);
    };
    double total = 0.0;
    // panels refined dyadically toward both ends of (0, 1)
    double a = std::ldexp(1.0, -48);
    total += integrand(0.5 * a) * a; // sliver at u ~ 0, g continuous at 0
    while (a < 0.5) {
      total += gauss_legendre_panel(integrand, a, 2.0 * a);
      a *= 2.0;
    }
    double b = std::ldexp(1.0, -48);
    total += integrand(1.0 - 0.5 * b) * b;
    while (b < 0.5) {
      total += gauss_legendre_panel(integrand, 1.0 - 2.0 * b, 1.0 - b);
      b *= 2.0;
    }
    if (!std::isfinite(total))
      throw std::runtime_error("mollifier_limit: quadrature did not converge");
    out.push_back(total);
  }
  return out;
}

InvariantReport invariant_report(const MomentumProfile& p, double m, double beta0,
                                 double beta_inf) {
  InvariantReport rep;
  const double interior = chern_interior_term(p);
  rep.interior_chern_term = interior;
  rep.chern = make_entry(interior + 2.0 * (beta0 - 1.0) + 2.0 * (beta_inf - 1.0), -4.0);
  const Volumes v = volumes(p, m);
  rep.vol_x = make_entry(v.vol_x, kTwoPi * kTwoPi * m * (m + 2.0));
  rep.vol_s0 = make_entry(v.vol_s0, kTwoPi);
  rep.vol_sinf = make_entry(v.vol_sinf, kTwoPi * (m + 1.0));
  const AverageCurvatures a = average_curvatures(m, beta0, beta_inf);
  rep.lambda0 = make_entry(a.lambda0, -8.0 / (m * (m + 2.0)));
  rep.lambda1 = make_entry(a.lambda1, -4.0 * (beta0 + beta_inf) / (m * (m + 2.0)));
  rep.relation_residual = a.relation_residual;
  rep.lambda1_quadrature = 2.0 * interior / (m * (m + 2.0));
  return rep;
}

} // namespace calabi
