#include "calabi/ivp.hpp"

#include <algorithm>
#include <cmath>

namespace calabi {

namespace {

const double kSqrt8 = 2.0 * std::sqrt(2.0);

inline double rhs(const SourcePoly& q, double g, double v) {
  return kSqrt8 * std::sqrt(std::max(v, 0.0)) + q.value(g);
}

// cubic Hermite on one interval
inline double hermite(double t, double h, double v0, double d0, double v1, double d1) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * v0 + (t3 - 2.0 * t2 + t) * h * d0 +
         (-2.0 * t3 + 3.0 * t2) * v1 + (t3 - t2) * h * d1;
}

} // namespace

double Trajectory::eval(double gamma) const {
  const auto& gs = knot_gamma;
  if (gamma <= gs.front()) return knot_v.front();
  if (gamma >= gs.back()) return knot_v.back();
  const auto it = std::upper_bound(gs.begin(), gs.end(), gamma);
  const std::size_t i = static_cast<std::size_t>(it - gs.begin()) - 1;
  const double h = gs[i + 1] - gs[i];
  const double t = (gamma - gs[i]) / h;
  const double v = hermite(t, h, knot_v[i], knot_dv[i], knot_v[i + 1], knot_dv[i + 1]);
  return std::max(v, 0.0);
}

double Trajectory::eval_deriv(double gamma) const {
  return rhs(source, gamma, eval(gamma));
}

Trajectory integrate(const ConicalCoeffs& c, double m, const IntegratorConfig& cfg) {
  const double gamma0 = poly_info(c, m).gamma0;
  return integrate_source(SourcePoly::conical(c), gamma0, m, cfg);
}

Trajectory integrate_source(const SourcePoly& q, double gamma0, double m,
                            const IntegratorConfig& cfg) {
  if (!(m > 0.0)) throw domain_error("integrate_source: m must be positive");
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0) || !(cfg.breakdown_floor > 0.0) ||
      cfg.max_steps == 0 || cfg.dense_grid_n < 2)
    throw domain_error("integrate_source: configuration fields must be positive");

  // Dormand-Prince 5(4) pair with FSAL.
  static const double a21 = 1.0 / 5.0;
  static const double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static const double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static const double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                      a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static const double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                      a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                      a65 = -5103.0 / 18656.0;
  static const double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                      b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  static const double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                      e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  static const double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

  const double g_end = 1.0 + m;

  Trajectory traj;
  traj.source = q;
  traj.m = m;
  traj.gamma0 = gamma0;

  double g = 1.0;
  double v = 2.0;
  double f0 = rhs(q, g, v);

  traj.knot_gamma.push_back(g);
  traj.knot_v.push_back(v);
  traj.knot_dv.push_back(f0);

  double h = 1e-4 * m;
  double facold = 1e-4;
  const double safety = 0.9, beta_pi = 0.04, expo1 = 0.2 - beta_pi * 0.75;
  const double facmin = 0.2, facmax = 5.0;

  std::size_t steps = 0;
  bool done = false;
  while (!done) {
    if (++steps > cfg.max_steps)
      throw integration_error("integrate_source: step budget exhausted");

    // keep the non-Lipschitz region resolved near v = 0
    if (v < 1e-4) h = std::min(h, std::sqrt(std::max(v, 1e-300)) / 10.0);
    // refine the step mesh toward both interval ends: downstream quadratures
    // divide by phi, which vanishes there, so interpolation error is magnified
    h = std::min(h, std::max(0.25 * (g - 1.0), 1e-4 * m));
    h = std::min(h, std::max(0.25 * (g_end - g), 1e-8 * m));
    if (g + h >= g_end) {
      h = g_end - g;
      done = true;
    }
    if (!(h > 0.0) || g + h == g)
      throw integration_error("integrate_source: step size underflow");

    const double k1 = f0;
    const double k2 = rhs(q, g + c2 * h, v + h * a21 * k1);
    const double k3 = rhs(q, g + c3 * h, v + h * (a31 * k1 + a32 * k2));
    const double k4 = rhs(q, g + c4 * h, v + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 =
        rhs(q, g + c5 * h, v + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 =
        rhs(q, g + h, v + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double v1 = v + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double g1 = g + h;
    const double k7 = rhs(q, g1, v1);

    const double err_raw =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(v), std::abs(v1));
    const double err = std::abs(err_raw) / scale;

    if (!std::isfinite(err) || err > 1.0) {
      const double fac11 = std::pow(std::max(err, 1e-10), expo1);
      h *= std::max(facmin, safety / fac11);
      done = false;
      continue;
    }

    if (v1 < 0.0) {
      // the solution is crossing zero inside the step
      if (v < 1e-6 && f0 < 0.0 && g > gamma0) {
        BreakdownInfo bd;
        bd.gamma_star = std::min(g + h * v / (v - v1), g_end);
        bd.v_prime_limit = f0;
        traj.breakdown = bd;
        break;
      }
      h *= 0.25;
      done = false;
      continue;
    }

    g = done ? g_end : g1; // land exactly on the endpoint
    v = v1;
    f0 = k7;
    traj.knot_gamma.push_back(g);
    traj.knot_v.push_back(v);
    traj.knot_dv.push_back(f0);

    if (v < cfg.breakdown_floor * (1.0 + g * g) && f0 < 0.0 && g > gamma0) {
      const std::size_t n = traj.knot_gamma.size();
      const double gp = traj.knot_gamma[n - 2];
      const double vp = traj.knot_v[n - 2];
      BreakdownInfo bd;
      bd.gamma_star = std::min(gp + (g - gp) * vp / (vp - v + 1e-300), g_end);
      bd.gamma_star = std::max(bd.gamma_star, g);
      bd.v_prime_limit = f0;
      traj.breakdown = bd;
      break;
    }

    const double fac11 = std::pow(std::max(err, 1e-10), expo1);
    double fac = fac11 / std::pow(facold, beta_pi);
    fac = std::max(1.0 / facmax, std::min(1.0 / facmin, fac / safety));
    h = h / fac;
    facold = std::max(err, 1e-4);
  }

  // dense output on a uniform grid over the covered interval
  const std::size_t n = std::max<std::size_t>(cfg.dense_grid_n, 2);
  const double end = traj.knot_gamma.back();
  traj.grid.resize(n);
  traj.values.resize(n);
  traj.derivs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double gi = 1.0 + (end - 1.0) * static_cast<double>(i) / (n - 1);
    traj.grid[i] = gi;
    traj.values[i] = traj.eval(gi);
    traj.derivs[i] = rhs(q, gi, traj.values[i]);
  }
  return traj;
}

EndpointClass classify_endpoint(const Trajectory& t, double m) {
  (void)m;
  return t.breakdown ? EndpointClass::Breakdown : EndpointClass::Full;
}

std::optional<LocalMax> local_max(const Trajectory& t) {
  const auto& g = t.grid;
  const auto& d = t.derivs;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    if (d[i] > 0.0 && d[i + 1] <= 0.0) {
      double lo = g[i], hi = g[i + 1];
      for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (t.eval_deriv(mid) > 0.0)
          lo = mid;
        else
          hi = mid;
      }
      const double tm = 0.5 * (lo + hi);
      return LocalMax{tm, t.eval(tm)};
    }
  }
  return std::nullopt;
}

} // namespace calabi
