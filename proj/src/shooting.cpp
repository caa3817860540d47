#include "calabi/shooting.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "calabi/log.hpp"

namespace calabi {

namespace {

constexpr double kMinParam = 1e-6; // coefficients blow up as 1/(m(m+2))
constexpr int kMaxExpansions = 60;
constexpr int kMaxIterations = 200;

std::string history_string(const std::vector<BracketPoint>& hist) {
  std::ostringstream os;
  for (const auto& p : hist) {
    os << " (" << p.param << ", ";
    if (p.breakdown)
      os << "breakdown";
    else
      os << p.residual;
    os << ")";
  }
  return os.str();
}

struct Probe {
  double residual = 0.0; // v(m+1) - 2(m+1)^2; -inf on breakdown
  bool breakdown = false;
  Trajectory trajectory;
};

// Monotone one-parameter shooting on [lo, hi]. `sign` orients the residual so
// that sign*residual is increasing in the parameter; breakdown counts as
// v(m+1) below target (residual -inf). Secant steps are tried when both
// anchors carry finite residuals and fall back to bisection when the iterate
// leaves the bracket. A positive `slope_bound` (a proven lower bound on the
// residual derivative) additionally tightens the bracket after every finite
// evaluation: the root sits within |residual| / slope_bound of the probe.
template <typename Eval>
std::pair<double, Probe> bracket_root(Eval eval, double sign, double lo, double hi,
                                      Probe plo, Probe phi_probe, double target_tol,
                                      double slope_bound, int& iters,
                                      std::vector<BracketPoint>& hist) {
  double neg_pos = lo, pos_pos = hi;
  double neg_res = sign * plo.residual, pos_res = sign * phi_probe.residual;
  const double slope_margin = slope_bound > 0.0 ? target_tol / slope_bound : 0.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    double cand = 0.5 * (lo + hi);
    if (std::isfinite(neg_res) && std::isfinite(pos_res)) {
      const double denom = pos_res - neg_res;
      if (denom > 0.0) {
        const double sec = pos_pos - pos_res * (pos_pos - neg_pos) / denom;
        if (sec > lo + 0.05 * (hi - lo) && sec < hi - 0.05 * (hi - lo)) cand = sec;
      }
    }
    ++iters;
    Probe pc = eval(cand);
    hist.push_back({cand, pc.residual, pc.breakdown});
    if (!pc.breakdown && std::abs(pc.residual) <= target_tol)
      return {cand, std::move(pc)};
    const double ordered = sign * pc.residual;
    if (ordered < 0.0) {
      lo = cand;
      neg_pos = cand;
      neg_res = ordered;
      plo = std::move(pc);
    } else {
      hi = cand;
      pos_pos = cand;
      pos_res = ordered;
      phi_probe = std::move(pc);
    }
    if (slope_bound > 0.0 && std::isfinite(ordered)) {
      // the root lies within |ordered|/slope_bound of the candidate
      if (ordered > 0.0)
        lo = std::max(lo, cand - ordered / slope_bound - slope_margin);
      else
        hi = std::min(hi, cand - ordered / slope_bound + slope_margin);
      if (!(lo < hi)) {
        lo = std::min(lo, cand);
        hi = std::max(hi, cand);
      }
    }
  }
  throw solver_error("shooting iteration budget exhausted; history:" +
                     history_string(hist));
}

// First sign change of the source polynomial on [1, m+1]; the smooth-case
// coefficient maps force q(1) = 2 and q(m+1) = -2(m+1), so one exists.
double source_sign_change(const SourcePoly& q, double m) {
  const int n = 1024;
  if (q.value(1.0) <= 0.0) return 1.0;
  for (int i = 1; i <= n; ++i) {
    const double g = 1.0 + m * static_cast<double>(i) / n;
    if (q.value(g) <= 0.0) {
      double lo = 1.0 + m * static_cast<double>(i - 1) / n;
      double hi = g;
      for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        (q.value(mid) > 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 1.0 + m; // no sign change: breakdown impossible anyway
}

// Residual must be monotone over the probe points (sign*residual increasing).
void check_probe_monotonicity(const std::vector<BracketPoint>& hist, double sign,
                              const char* who) {
  for (std::size_t i = 0; i < hist.size(); ++i)
    for (std::size_t j = i + 1; j < hist.size(); ++j) {
      const auto& a = hist[i].param < hist[j].param ? hist[i] : hist[j];
      const auto& b = hist[i].param < hist[j].param ? hist[j] : hist[i];
      if (a.breakdown || b.breakdown) continue;
      const double ra = sign * a.residual;
      const double rb = sign * b.residual;
      if (ra > rb + 1e-6 * (1.0 + std::abs(rb)))
        throw solver_error(std::string(who) + ": residual not monotone; history:" +
                           history_string(hist));
    }
}

} // namespace

IntegratorConfig solver_integrator_config(double tol) {
  IntegratorConfig cfg;
  cfg.rel_tol = std::min(1e-10, tol / 100.0);
  cfg.abs_tol = cfg.rel_tol / 100.0;
  return cfg;
}

SolveReport solve_conical(double m, double beta0, double tol,
                          std::optional<double> alpha_hint, std::size_t grid_n) {
  if (!(m >= kMinParam) || !(beta0 >= kMinParam))
    throw domain_error("solve_conical: m and beta0 must be >= 1e-6");
  if (!(tol > 0.0)) throw domain_error("solve_conical: tol must be positive");

  const double target = 2.0 * (m + 1.0) * (m + 1.0);
  const double target_tol = tol * (m + 1.0) * (m + 1.0);
  IntegratorConfig cfg = solver_integrator_config(tol);
  cfg.dense_grid_n = grid_n;

  auto eval = [&](double alpha) -> Probe {
    const ProblemSpec spec = ProblemSpec::from_alpha(m, beta0, alpha);
    const ConicalCoeffs c = conical_coeffs(spec);
    Probe p;
    p.trajectory = integrate(c, m, cfg);
    p.breakdown = p.trajectory.breakdown.has_value();
    p.residual = p.breakdown ? -std::numeric_limits<double>::infinity()
                             : p.trajectory.final_value() - target;
    return p;
  };

  std::vector<BracketPoint> hist;
  int iters = 0;

  auto finish = [&](double alpha, Probe p) {
    SolveReport rep;
    rep.spec = ProblemSpec::from_alpha(m, beta0, alpha);
    rep.coeffs = conical_coeffs(rep.spec);
    rep.residual = p.residual;
    rep.iterations = iters;
    rep.bracket_history = std::move(hist);
    rep.trajectory = std::move(p.trajectory);
    return rep;
  };

  if (alpha_hint && *alpha_hint < beta0) {
    ++iters;
    Probe p = eval(*alpha_hint);
    hist.push_back({*alpha_hint, p.residual, p.breakdown});
    if (!p.breakdown && std::abs(p.residual) <= target_tol)
      return finish(*alpha_hint, std::move(p));
  }

  // upper bracket end: the shooting map tends to a value above target there
  const double alpha_hi = beta0 * (1.0 - 1e-6);
  ++iters;
  Probe phi_probe = eval(alpha_hi);
  hist.push_back({alpha_hi, phi_probe.residual, phi_probe.breakdown});
  if (phi_probe.breakdown || phi_probe.residual <= 0.0)
    throw solver_error("solve_conical: residual not positive at the upper bracket "
                       "end; history:" +
                       history_string(hist));

  // march down from 0 in doubling steps until below target
  double alpha_lo = 0.0;
  Probe plo;
  bool found_lo = false;
  double step = 0.5 * std::max(1.0, beta0);
  for (int k = 0; k < kMaxExpansions; ++k) {
    alpha_lo = -step;
    ++iters;
    plo = eval(alpha_lo);
    hist.push_back({alpha_lo, plo.residual, plo.breakdown});
    if (!plo.breakdown && std::abs(plo.residual) <= target_tol)
      return finish(alpha_lo, std::move(plo));
    if (plo.breakdown || plo.residual < 0.0) {
      found_lo = true;
      break;
    }
    step *= 2.0;
  }
  if (!found_lo)
    throw solver_error("solve_conical: bracket expansion failed; history:" +
                       history_string(hist));

  // dR/dalpha is bounded below by Q(m+1) = m(m+2)/2 on the full-existence set
  auto [alpha, probe] =
      bracket_root(eval, +1.0, alpha_lo, alpha_hi, std::move(plo),
                   std::move(phi_probe), target_tol, 0.5 * m * (m + 2.0), iters,
                   hist);
  CALABI_LOG_DEBUG("solve_conical m=%g beta0=%g alpha=%.17g iters=%d", m, beta0, alpha,
                   iters);
  return finish(alpha, std::move(probe));
}

SmoothSolveReport solve_smooth(double m, double tol, std::optional<double> c_hint,
                               std::size_t grid_n) {
  if (!(m >= kMinParam)) throw domain_error("solve_smooth: m must be >= 1e-6");
  if (!(tol > 0.0)) throw domain_error("solve_smooth: tol must be positive");

  const double target = 2.0 * (m + 1.0) * (m + 1.0);
  const double target_tol = tol * (m + 1.0) * (m + 1.0);
  IntegratorConfig cfg = solver_integrator_config(tol);
  cfg.dense_grid_n = grid_n;

  auto eval = [&](double C) -> Probe {
    const SourcePoly q = SourcePoly::smooth(smooth_coeffs(C, m));
    Probe p;
    p.trajectory = integrate_source(q, source_sign_change(q, m), m, cfg);
    p.breakdown = p.trajectory.breakdown.has_value();
    p.residual = p.breakdown ? -std::numeric_limits<double>::infinity()
                             : p.trajectory.final_value() - target;
    return p;
  };

  std::vector<BracketPoint> hist;
  int iters = 0;

  auto finish = [&](double C, Probe p) {
    // the residual decreases in C here; abort if the probes disagree
    check_probe_monotonicity(hist, -1.0, "solve_smooth");
    SmoothSolveReport rep;
    rep.C_star = C;
    rep.coeffs = smooth_coeffs(C, m);
    rep.residual = p.residual;
    rep.iterations = iters;
    rep.bracket_history = std::move(hist);
    rep.trajectory = std::move(p.trajectory);
    return rep;
  };

  if (c_hint && *c_hint > 0.0) {
    ++iters;
    Probe p = eval(*c_hint);
    hist.push_back({*c_hint, p.residual, p.breakdown});
    if (!p.breakdown && std::abs(p.residual) <= target_tol)
      return finish(*c_hint, std::move(p));
  }

  // residual is positive at C = 2 and falls through zero above it
  double c_lo = 2.0;
  ++iters;
  Probe plo = eval(c_lo);
  hist.push_back({c_lo, plo.residual, plo.breakdown});
  if (!plo.breakdown && std::abs(plo.residual) <= target_tol)
    return finish(c_lo, std::move(plo));
  if (plo.breakdown || plo.residual < 0.0)
    throw solver_error("solve_smooth: residual not positive at C = 2; history:" +
                       history_string(hist));

  double c_hi = 0.0;
  Probe phi_probe;
  bool found_hi = false;
  double step = 2.0;
  for (int k = 0; k < kMaxExpansions; ++k) {
    c_hi = 2.0 + step;
    ++iters;
    Probe cand = eval(c_hi);
    hist.push_back({c_hi, cand.residual, cand.breakdown});
    if (!cand.breakdown && std::abs(cand.residual) <= target_tol)
      return finish(c_hi, std::move(cand));
    if (cand.breakdown || cand.residual < 0.0) {
      phi_probe = std::move(cand);
      found_hi = true;
      break;
    }
    c_lo = c_hi;
    plo = std::move(cand);
    step *= 2.0;
  }
  if (!found_hi)
    throw solver_error("solve_smooth: bracket expansion failed; history:" +
                       history_string(hist));

  auto [C, probe] = bracket_root(eval, -1.0, c_lo, c_hi, std::move(plo),
                                 std::move(phi_probe), target_tol, 0.0, iters, hist);
  CALABI_LOG_DEBUG("solve_smooth m=%g C=%.17g iters=%d", m, C, iters);
  return finish(C, std::move(probe));
}

double locate_breakdown_boundary(double m, double beta0, double tol) {
  if (!(m >= kMinParam) || !(beta0 >= kMinParam))
    throw domain_error("locate_breakdown_boundary: m and beta0 must be >= 1e-6");
  if (!(tol > 0.0))
    throw domain_error("locate_breakdown_boundary: tol must be positive");

  const IntegratorConfig cfg = solver_integrator_config(tol);
  auto is_full = [&](double alpha) {
    const ConicalCoeffs c = conical_coeffs(ProblemSpec::from_alpha(m, beta0, alpha));
    return !integrate(c, m, cfg).breakdown.has_value();
  };

  double hi = 0.0; // alpha = 0 is always Full
  if (!is_full(hi))
    throw solver_error("locate_breakdown_boundary: unexpected breakdown at alpha = 0");
  double lo = 0.0;
  double step = std::max(1.0, beta0);
  bool found = false;
  for (int k = 0; k < kMaxExpansions; ++k) {
    lo = -step;
    if (!is_full(lo)) {
      found = true;
      break;
    }
    hi = lo;
    step *= 2.0;
  }
  if (!found)
    throw solver_error("locate_breakdown_boundary: expansion failed to reach the "
                       "breakdown region");

  while (hi - lo > tol * 0.5) {
    const double mid = 0.5 * (lo + hi);
    (is_full(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace calabi
