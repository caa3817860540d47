#pragma once

#include <functional>

namespace calabi {

// Composite Gauss-Legendre quadrature: 32 nodes per panel, `panels` equal panels.
double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int panels = 64);

// Single 32-node panel on [a, b].
double gauss_legendre_panel(const std::function<double(double)>& f, double a, double b);

// Panel-splitting adaptive variant; compares one panel against its two halves.
double adaptive_gauss(const std::function<double(double)>& f, double a, double b,
                      double tol, int max_depth = 30);

} // namespace calabi
