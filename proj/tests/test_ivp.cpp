#include <doctest.h>

#include <cmath>

#include "calabi/ivp.hpp"
#include "rk4_oracle.hpp"

using namespace calabi;

namespace {

ConicalCoeffs coeffs_for(double m, double beta0, double alpha) {
  return conical_coeffs(ProblemSpec::from_alpha(m, beta0, alpha));
}

double max_abs_source(const ConicalCoeffs& c, double m) {
  double worst = 0.0;
  for (int i = 0; i <= 256; ++i) {
    const double g = 1.0 + m * i / 256.0;
    worst = std::max(worst, std::abs(poly_p_gamma(g, c)));
  }
  return worst;
}

} // namespace

TEST_CASE("initial value and initial slope") {
  for (double beta0 : {0.5, 1.0, 2.0}) {
    const auto c = coeffs_for(1.0, beta0, 0.25 * beta0);
    const auto t = integrate(c, 1.0);
    CHECK(t.values.front() == 2.0);
    // v'(1) = 2 sqrt2 sqrt2 + p(1) = 4 + 2 beta0
    CHECK(t.derivs.front() == doctest::Approx(2.0 * (beta0 + 2.0)).epsilon(1e-13));
  }
}

TEST_CASE("nonnegative alpha never breaks down and stays above 2 + P") {
  for (double alpha : {0.0, 0.3, 0.7}) {
    const double m = 1.0, beta0 = 1.0;
    const auto c = coeffs_for(m, beta0, alpha * beta0);
    const auto t = integrate(c, m);
    CHECK(!t.breakdown);
    CHECK(classify_endpoint(t, m) == EndpointClass::Full);
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
      CHECK(t.values[i] >= 2.0 + integral_P(t.grid[i], c) - 1e-8);
      CHECK(t.values[i] >= 2.0 - 1e-12);
    }
  }
}

TEST_CASE("endpoint value pinned by the reference integrator") {
  // fixed-step RK4 at h = 2^-20 with Richardson extrapolation
  const auto t = integrate(coeffs_for(1.0, 1.0, 0.0), 1.0);
  CHECK(t.final_value() == doctest::Approx(8.42245588322660067).epsilon(5e-12));
}

TEST_CASE("reference integrator agrees with itself at coarser steps") {
  // guards the frozen constant above against transcription slips
  const auto v = oracle::endpoint(oracle::conical_poly(1.0L, 1.0L, 0.0L), 1.0L,
                                  1u << 14);
  REQUIRE(v.has_value());
  CHECK(static_cast<double>(*v) == doctest::Approx(8.42245588322660067).epsilon(1e-12));
}

TEST_CASE("dense output satisfies the reported ODE residual bound") {
  const IntegratorConfig cfg;
  const auto c = coeffs_for(2.0, 1.5, -0.5);
  const auto t = integrate(c, 2.0, cfg);
  const double sqrt8 = 2.0 * std::sqrt(2.0);
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    const double rhs = sqrt8 * std::sqrt(std::max(t.values[i], 0.0)) +
                       poly_p_gamma(t.grid[i], c);
    CHECK(std::abs(t.derivs[i] - rhs) <= 10.0 * cfg.rel_tol * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("v is strictly increasing up to gamma0") {
  for (double alpha : {-3.0, -1.0, 0.0, 0.5}) {
    const double m = 1.0, beta0 = 1.0;
    const auto c = coeffs_for(m, beta0, alpha);
    const double g0 = poly_info(c, m).gamma0;
    const auto t = integrate(c, m);
    for (std::size_t i = 0; i < t.grid.size(); ++i)
      if (t.grid[i] <= g0 - 1e-9) CHECK(t.derivs[i] > 0.0);
  }
}

TEST_CASE("breakdown trajectories") {
  const double m = 1.0, beta0 = 1.0;
  const double alpha = -6.0; // well below the breakdown boundary
  const auto c = coeffs_for(m, beta0, alpha);
  const auto t = integrate(c, m);
  REQUIRE(t.breakdown.has_value());
  CHECK(classify_endpoint(t, m) == EndpointClass::Breakdown);
  CHECK(t.breakdown->gamma_star > poly_info(c, m).gamma0);
  CHECK(t.breakdown->gamma_star <= m + 1.0);
  CHECK(t.breakdown->v_prime_limit < 0.0);

  // exactly one interior maximum, pinned by the critical-point identity
  const auto peak = local_max(t);
  REQUIRE(peak.has_value());
  CHECK(peak->t_max > poly_info(c, m).gamma0);
  const double pg = poly_p_gamma(peak->t_max, c);
  CHECK(std::abs(peak->v_max - pg * pg / 8.0) < 1e-8 * peak->v_max);

  // the reference integrator agrees on the breakdown location
  const auto run = oracle::rk4(oracle::conical_poly(1.0L, 1.0L, -6.0L), 1.0L, 1u << 18);
  CHECK(!run.full);
  CHECK(t.breakdown->gamma_star ==
        doctest::Approx(static_cast<double>(run.gamma_stop)).epsilon(2e-4));
}

TEST_CASE("strictly increasing trajectories report no local maximum") {
  const auto t = integrate(coeffs_for(1.0, 1.0, 0.0), 1.0);
  CHECK(!local_max(t).has_value());
}

TEST_CASE("full trajectories can still carry one interior maximum") {
  // beta_inf > 2 makes v' negative at the right end, so the crest is interior
  const auto c = coeffs_for(1.0, 1.0, -1.5);
  const auto t = integrate(c, 1.0);
  REQUIRE(!t.breakdown);
  CHECK(t.derivs.back() < 0.0);
  const auto peak = local_max(t);
  REQUIRE(peak.has_value());
  CHECK(peak->t_max > poly_info(c, 1.0).gamma0);
  const double pg = poly_p_gamma(peak->t_max, c);
  CHECK(std::abs(peak->v_max - pg * pg / 8.0) < 1e-8 * peak->v_max);
}

TEST_CASE("configuration fields must be positive") {
  IntegratorConfig cfg;
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(integrate(coeffs_for(1.0, 1.0, 0.0), 1.0, cfg), domain_error);
  IntegratorConfig cfg2;
  cfg2.dense_grid_n = 1;
  CHECK_THROWS_AS(integrate(coeffs_for(1.0, 1.0, 0.0), 1.0, cfg2), domain_error);
}

TEST_CASE("halving the tolerances barely moves the endpoint") {
  const auto c = coeffs_for(1.0, 1.0, -0.2);
  IntegratorConfig cfg;
  const auto a = integrate(c, 1.0, cfg);
  IntegratorConfig half = cfg;
  half.rel_tol *= 0.5;
  half.abs_tol *= 0.5;
  const auto b = integrate(c, 1.0, half);
  CHECK(std::abs(a.final_value() - b.final_value()) <
        10.0 * cfg.rel_tol * a.final_value());
}

TEST_CASE("solutions stay under the Gronwall envelope") {
  for (double alpha : {-2.0, 0.0, 0.5}) {
    const double m = 1.0, beta0 = 1.0;
    const auto c = coeffs_for(m, beta0, alpha);
    const auto t = integrate(c, m);
    const double l = max_abs_source(c, m);
    const double sqrt2 = std::sqrt(2.0);
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
      CHECK(std::isfinite(t.values[i]));
      const double bound =
          (3.0 + l / sqrt2) * std::exp(sqrt2 * (t.grid[i] - 1.0)) - 1.0 - l / sqrt2;
      CHECK(t.values[i] <= bound);
    }
  }
}

TEST_CASE("step budget exhaustion raises an integration error") {
  IntegratorConfig cfg;
  cfg.max_steps = 10;
  CHECK_THROWS_AS(integrate(coeffs_for(1.0, 1.0, 0.0), 1.0, cfg), integration_error);
}

TEST_CASE("dense grid size follows the configuration") {
  IntegratorConfig cfg;
  cfg.dense_grid_n = 129;
  const auto t = integrate(coeffs_for(1.0, 1.0, 0.0), 1.0, cfg);
  CHECK(t.grid.size() == 129);
  CHECK(t.grid.front() == 1.0);
  CHECK(t.grid.back() == doctest::Approx(2.0).epsilon(1e-15));
}
