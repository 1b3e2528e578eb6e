#pragma once

#include <functional>
#include <vector>

namespace starwell {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule: integrates f against exp(-x^2) over the real line.
QuadratureRule gauss_hermite(int n);

/// Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// Composite Gauss-Legendre integral of f over [a, b].
double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels,
                        int nodes_per_panel = 16);

/// Scaled complementary error function exp(x^2) erfc(x) for x >= 0.
double erfcx(double x);

}  // namespace starwell
