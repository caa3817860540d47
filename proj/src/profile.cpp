#include "calabi/profile.hpp"

#include <algorithm>
#include <cmath>

#include "calabi/quadrature.hpp"

namespace calabi {

namespace {

double hermite_eval(const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::vector<double>& dys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double h = xs[i + 1] - xs[i];
  const double t = (x - xs[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * ys[i] + (t3 - 2.0 * t2 + t) * h * dys[i] +
         (-2.0 * t3 + 3.0 * t2) * ys[i + 1] + (t3 - t2) * h * dys[i + 1];
}

MomentumProfile build_profile(const Trajectory& t, const SourcePoly& q) {
  if (t.breakdown)
    throw profile_error("profile_from_trajectory: trajectory ends in breakdown");

  MomentumProfile p;
  p.m = t.m;
  p.source = q;
  p.beta0 = q.value(1.0) / 2.0;
  p.beta_inf = -q.value(1.0 + t.m) / (2.0 * (1.0 + t.m));
  p.knot_gamma = t.knot_gamma;
  p.knot_v = t.knot_v;
  p.knot_dv = t.knot_dv;

  const std::size_t n = t.grid.size();
  p.grid = t.grid;
  p.phi.resize(n);
  p.dphi.resize(n);
  p.ddphi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double g = t.grid[i];
    const double root = std::sqrt(2.0 * std::max(t.values[i], 0.0)); // = 2g + phi
    p.phi[i] = root - 2.0 * g;
    p.dphi[i] = q.value(g) / root;
    p.ddphi[i] = (q.deriv(g) - (2.0 + p.dphi[i]) * p.dphi[i]) / root;
  }
  return p;
}

} // namespace

double MomentumProfile::v_at(double gamma) const {
  return std::max(hermite_eval(knot_gamma, knot_v, knot_dv, gamma), 0.0);
}

double MomentumProfile::phi_at(double gamma) const {
  return std::sqrt(2.0 * v_at(gamma)) - 2.0 * gamma;
}

double MomentumProfile::dphi_at(double gamma) const {
  return source.value(gamma) / std::sqrt(2.0 * v_at(gamma));
}

double MomentumProfile::ddphi_at(double gamma) const {
  const double d = dphi_at(gamma);
  return (source.deriv(gamma) - (2.0 + d) * d) / std::sqrt(2.0 * v_at(gamma));
}

double MomentumProfile::lambda_at(double gamma) const {
  const double f = phi_at(gamma);
  const double d = dphi_at(gamma);
  const double dd = ddphi_at(gamma);
  return (gamma * (f + 2.0 * gamma) * dd + d * (d * gamma - f)) / (gamma * gamma * gamma);
}

MomentumProfile profile_from_trajectory(const Trajectory& t, const ConicalCoeffs& c) {
  return build_profile(t, SourcePoly::conical(c));
}

MomentumProfile profile_from_smooth_trajectory(const Trajectory& t,
                                               const SmoothCoeffs& c) {
  return build_profile(t, SourcePoly::smooth(c));
}

std::vector<double> higher_scalar_curvature(const MomentumProfile& p) {
  std::vector<double> lambda;
  if (p.grid.size() < 3) return lambda;
  lambda.reserve(p.grid.size() - 2);
  for (std::size_t i = 1; i + 1 < p.grid.size(); ++i) {
    const double g = p.grid[i];
    const double f = p.phi[i];
    const double d = p.dphi[i];
    const double dd = p.ddphi[i];
    lambda.push_back((g * (f + 2.0 * g) * dd + d * (d * g - f)) / (g * g * g));
  }
  return lambda;
}

namespace {

constexpr double kTauExclusion = 1e-8; // times m, at both endpoints

// int_{ga}^{gb} dy / phi(y), adaptively on panels refined toward the
// endpoints, where 1/phi behaves like 1/(beta (y - endpoint)).
double inverse_phi_integral(const MomentumProfile& p, double ga, double gb) {
  if (ga == gb) return 0.0;
  if (ga > gb) return -inverse_phi_integral(p, gb, ga);
  auto f = [&](double g) { return 1.0 / p.phi_at(g); };
  const double lo_end = 1.0;
  const double hi_end = 1.0 + p.m;
  double total = 0.0;
  double a = ga;
  while (a < gb) {
    // panel width stays below half the distance to the nearer endpoint, where
    // 1/phi has its poles; the mesh is geometric toward both ends
    const double step = 0.5 * std::min(a - lo_end, hi_end - a);
    double b = std::min(gb, a + std::max(step, 1e-300));
    if (b <= a) b = gb;
    total += adaptive_gauss(f, a, b, 1e-13, 8);
    a = b;
  }
  return total;
}

} // namespace

double legendre_s(const MomentumProfile& p, double tau) {
  const double m = p.m;
  if (!(tau >= kTauExclusion * m) || !(tau <= m - kTauExclusion * m))
    throw reconstruction_error("legendre_s: tau outside the endpoint exclusion zone");
  return inverse_phi_integral(p, 1.0 + m / 2.0, 1.0 + tau);
}

PotentialReconstruction legendre_reconstruct(const MomentumProfile& p) {
  const double m = p.m;
  std::vector<double> taus;
  // dyadic approach to tau = 0, uniform middle, dyadic approach to tau = m
  for (int k = 24; k >= 3; --k) taus.push_back(m * std::ldexp(1.0, -k));
  const int mid_n = 33;
  for (int i = 0; i < mid_n; ++i)
    taus.push_back(m * (0.25 + 0.5 * static_cast<double>(i) / (mid_n - 1)));
  for (int k = 3; k <= 24; ++k) taus.push_back(m * (1.0 - std::ldexp(1.0, -k)));

  PotentialReconstruction rec;
  rec.tau_grid = taus;
  rec.s_values.resize(taus.size());
  rec.fpp_values.resize(taus.size());

  // cumulative integration along the grid, then shift so that s(m/2) = 0
  rec.s_values[0] = 0.0;
  for (std::size_t i = 1; i < taus.size(); ++i)
    rec.s_values[i] = rec.s_values[i - 1] +
                      inverse_phi_integral(p, 1.0 + taus[i - 1], 1.0 + taus[i]);
  std::size_t anchor = 0;
  for (std::size_t i = 0; i < taus.size(); ++i)
    if (std::abs(taus[i] - m / 2.0) < std::abs(taus[anchor] - m / 2.0)) anchor = i;
  const double shift = rec.s_values[anchor];
  for (auto& s : rec.s_values) s -= shift;
  for (std::size_t i = 0; i < taus.size(); ++i)
    rec.fpp_values[i] = p.phi_at(1.0 + taus[i]);
  return rec;
}

double richardson_limit(const std::vector<double>& values) {
  std::vector<double> t = values;
  const std::size_t n = t.size();
  for (std::size_t j = 1; j < n; ++j) {
    const double pow2 = std::ldexp(1.0, static_cast<int>(j));
    for (std::size_t i = n - 1; i >= j; --i) {
      t[i] = (pow2 * t[i] - t[i - 1]) / (pow2 - 1.0);
      if (i == j) break;
    }
  }
  return t[n - 1];
}

ConeCheck asymptotic_cone_check(const MomentumProfile& p) {
  const double m = p.m;
  const int terms = 8;
  std::vector<double> near_zero(terms), near_inf(terms);
  double tau = m / 64.0;
  for (int k = 0; k < terms; ++k, tau *= 0.5) {
    near_zero[k] = p.phi_at(1.0 + tau) / tau;
    near_inf[k] = p.phi_at(1.0 + m - tau) / tau;
  }
  return ConeCheck{richardson_limit(near_zero), richardson_limit(near_inf)};
}

double legendre_log_slope_zero(const MomentumProfile& p) {
  const int terms = 8;
  const double ln2 = std::log(2.0);
  double tau = std::min(1e-3, p.m / 16.0);
  std::vector<double> slopes(terms);
  for (int k = 0; k < terms; ++k, tau *= 0.5)
    slopes[k] = (legendre_s(p, tau) - legendre_s(p, tau * 0.5)) / ln2;
  return richardson_limit(slopes);
}

double legendre_log_slope_inf(const MomentumProfile& p) {
  const int terms = 8;
  const double ln2 = std::log(2.0);
  double u = std::min(1e-3, p.m / 16.0);
  std::vector<double> slopes(terms);
  for (int k = 0; k < terms; ++k, u *= 0.5)
    slopes[k] = (legendre_s(p, p.m - u) - legendre_s(p, p.m - u * 0.5)) / ln2;
  return richardson_limit(slopes);
}

} // namespace calabi
