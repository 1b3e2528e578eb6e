#include "starwell/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <complex>
#include <lapacke.h>

namespace starwell {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights come
// from the first eigenvector components.
QuadratureRule golub_welsch(std::vector<double> offdiag, double weight_total) {
  const auto n = static_cast<lapack_int>(offdiag.size() + 1);
  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
  std::vector<double> z(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  const int info =
      LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', n, diag.data(), offdiag.data(), z.data(), n);
  if (info != 0)
    throw std::runtime_error("gauss rule: dstev failed with info = " + std::to_string(info));
  QuadratureRule r;
  r.nodes = std::move(diag);
  r.weights.resize(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < r.weights.size(); ++i) {
    const double v0 = z[i * static_cast<std::size_t>(n)];
    r.weights[i] = weight_total * v0 * v0;
  }
  return r;
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: order must be positive");
  std::vector<double> off(static_cast<std::size_t>(n - 1));
  for (int k = 1; k < n; ++k) off[static_cast<std::size_t>(k - 1)] = std::sqrt(k / 2.0);
  return golub_welsch(std::move(off), std::sqrt(std::numbers::pi));
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  std::vector<double> off(static_cast<std::size_t>(n - 1));
  for (int k = 1; k < n; ++k)
    off[static_cast<std::size_t>(k - 1)] = k / std::sqrt(4.0 * k * k - 1.0);
  return golub_welsch(std::move(off), 2.0);
}

double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels,
                        int nodes_per_panel) {
  static thread_local int cached_order = 0;
  static thread_local QuadratureRule rule;
  if (cached_order != nodes_per_panel) {
    rule = gauss_legendre(nodes_per_panel);
    cached_order = nodes_per_panel;
  }
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      acc += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
  }
  return acc * 0.5 * h;
}

double erfcx(double x) {
  if (x < 20.0) return std::exp(x * x) * std::erfc(x);
  // asymptotic series, relative error < 1e-12 for x >= 20
  const double ix2 = 1.0 / (x * x);
  return (1.0 - 0.5 * ix2 * (1.0 - 1.5 * ix2 * (1.0 - 2.5 * ix2))) /
         (x * std::sqrt(std::numbers::pi));
}

}  // namespace starwell
