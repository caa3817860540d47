#include "calabi/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace calabi {

namespace {

constexpr int kNodes = 32;

struct GaussRule {
  std::array<double, kNodes> x{}; // nodes on (-1, 1)
  std::array<double, kNodes> w{};
};

// Nodes and weights by Newton iteration on the Legendre polynomial.
GaussRule build_rule() {
  GaussRule rule;
  const int n = kNodes;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.w[n - 1 - i] = rule.w[i];
  }
  return rule;
}

const GaussRule& rule() {
  static const GaussRule r = build_rule();
  return r;
}

} // namespace

double gauss_legendre_panel(const std::function<double(double)>& f, double a, double b) {
  const GaussRule& r = rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < kNodes; ++i) sum += r.w[i] * f(mid + half * r.x[i]);
  return half * sum;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int panels) {
  if (panels < 1) throw std::invalid_argument("gauss_legendre: panels must be >= 1");
  double sum = 0.0;
  const double h = (b - a) / panels;
  for (int k = 0; k < panels; ++k)
    sum += gauss_legendre_panel(f, a + k * h, a + (k + 1) * h);
  return sum;
}

namespace {

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double whole, double tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = gauss_legendre_panel(f, a, mid);
  const double right = gauss_legendre_panel(f, mid, b);
  const double delta = left + right - whole;
  if (std::abs(delta) <= tol || depth <= 0) return left + right;
  return adaptive_rec(f, a, mid, left, 0.5 * tol, depth - 1) +
         adaptive_rec(f, mid, b, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_gauss(const std::function<double(double)>& f, double a, double b,
                      double tol, int max_depth) {
  return adaptive_rec(f, a, b, gauss_legendre_panel(f, a, b), tol, max_depth);
}

} // namespace calabi
