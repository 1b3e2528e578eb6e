#include "starwell/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "starwell/errors.hpp"

namespace starwell {

using std::numbers::pi;

namespace {

Complex ipow(Complex base, int e) {
  Complex r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

double hopping_fn(const ReducedParams& p, int n4, double x) {
  const double num = p.J * p.J * (4.0 * p.U * (p.N + 1) + 2.0 * p.sigma + x);
  const double a = 4.0 * p.U * (p.N - 2 * n4) + 2.0 * p.sigma + x;
  const double den = a * a - 16.0 * p.U * p.U;
  if (std::abs(den) < 1e-9)
    throw SingularParameter("hopping_fn: denominator " + std::to_string(den) +
                            " vanishes (sigma near sigma_crit?)");
  return num / den;
}

double effective_hopping(const ReducedParams& p, int n4) { return hopping_fn(p, n4, 0.0); }

double sigma_crit(const ReducedParams& p) { return 2.0 * p.U * (1 - p.N); }

std::array<double, 4> populations_resonant(const FockState& ini, const ReducedParams& p,
                                           double t) {
  const double jeff = effective_hopping(p, ini[3]);
  const double s2 = std::pow(std::sin(1.5 * jeff * t), 2);
  std::array<double, 4> out{};
  const int N = ini.total();
  for (int j = 0; j < 3; ++j)
    out[static_cast<std::size_t>(j)] = ini[j] + (4.0 / 9.0) * (N - 3 * ini[j] - ini[3]) * s2;
  out[3] = ini[3];
  return out;
}

double zeta(const ReducedParams& p, const FieldConfig& f, int n4) {
  const double jn = hopping_fn(p, n4, f.nu());
  return jn * (1.0 + jn / (3.0 * f.nu()));
}

double transfer_time(double zeta_value) {
  if (zeta_value == 0.0)
    throw SingularParameter("transfer_time: zeta = 0");
  return pi / (2.0 * std::abs(zeta_value));
}

double channel_separation_ratio(const ReducedParams& p, const FieldConfig& f, int n4) {
  return std::abs(f.nu() / hopping_fn(p, n4, f.nu()));
}

std::array<double, 4> populations_broken(const FockState& ini, const ReducedParams& p,
                                         const FieldConfig& f, double t) {
  const double s2 = std::pow(std::sin(zeta(p, f, ini[3]) * t), 2);
  std::array<double, 4> out{};
  for (int j = 1; j <= 3; ++j) {
    if (j == f.k()) {
      out[static_cast<std::size_t>(j - 1)] = ini[j - 1];
    } else {
      const int partner = 6 - j - f.k();
      out[static_cast<std::size_t>(j - 1)] =
          ini[j - 1] + (ini[partner - 1] - ini[j - 1]) * s2;
    }
  }
  out[3] = ini[3];
  return out;
}

FockState routing_table(const FockState& ini, int k) {
  if (k < 1 || k > 3)
    throw std::invalid_argument("routing_table: k must be in 1..3");
  const auto ch = FieldConfig(1.0, k).channel();
  FockState out = ini;
  out.n[ch[0] - 1] = ini[ch[1] - 1];
  out.n[ch[1] - 1] = ini[ch[0] - 1];
  return out;
}

CoherentPairState coherent_pair(double q, int n1, std::pair<int, int> sites, int n4) {
  if (q < 0.0 || q > 1.0)
    throw std::invalid_argument("coherent_pair: q must lie in [0,1]");
  if (n1 < 0 || n4 < 0)
    throw std::invalid_argument("coherent_pair: negative occupation");
  const auto [i, j] = sites;
  if (i < 1 || i > 3 || j < 1 || j > 3 || i == j)
    throw std::invalid_argument("coherent_pair: sites must be distinct edge wells 1..3");
  CoherentPairState cps;
  cps.alpha = std::cos(q * pi / 2.0);
  cps.beta = Complex(0.0, -1.0) * std::sin(q * pi / 2.0);
  cps.site_i = i;
  cps.site_j = j;
  cps.pair_count = n1;
  cps.central_count = n4;
  return cps;
}

StateVector expand_to_fock(const CoherentPairState& cps, const FockBasis& basis) {
  const int n1 = cps.pair_count;
  if (n1 + cps.central_count != basis.particles())
    throw std::invalid_argument("expand_to_fock: particle count mismatch");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.size()));
  // amplitude of m bosons on site_i: sqrt(C(n1,m)) alpha^m beta^(n1-m)
  double binom = 1.0;
  for (int m = 0; m <= n1; ++m) {
    FockState s{};
    s.n[cps.site_i - 1] = m;
    s.n[cps.site_j - 1] = n1 - m;
    s.n[3] = cps.central_count;
    const Complex amp = std::sqrt(binom) * ipow(cps.alpha, m) * ipow(cps.beta, n1 - m);
    v[static_cast<Eigen::Index>(basis.index_of(s))] = amp;
    binom = binom * (n1 - m) / (m + 1);
  }
  return StateVector(std::move(v), basis.particles());
}

double imbalance_prediction(double q, int k) {
  if (q < 0.0 || q > 1.0)
    throw std::invalid_argument("imbalance_prediction: q must lie in [0,1]");
  if (k != 2 && k != 3)
    throw std::invalid_argument("imbalance_prediction: k must be 2 or 3");
  const double sign = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^(k+1)
  return sign * std::cos(q * pi);
}

double amplitude_a1(double q, int n1) { return n1 * std::pow(std::cos(q * pi / 2.0), 2); }
double amplitude_a2(double q, int n1) { return n1 * std::pow(std::sin(q * pi / 2.0), 2); }

std::array<double, 4> populations_two_stage(double q, int k, int n1, int n4,
                                            const ReducedParams& p, const FieldConfig& f,
                                            double t) {
  if (q < 0.0 || q > 1.0)
    throw std::invalid_argument("populations_two_stage: q must lie in [0,1]");
  if (k != 1 && k != 2)
    throw std::invalid_argument("populations_two_stage: k must be 1 or 2");
  const double z = zeta(p, f, n4);
  const std::array<double, 2> amp = {amplitude_a1(q, n1), amplitude_a2(q, n1)};
  std::array<double, 4> out{};
  for (int j = 1; j <= 2; ++j) {
    const double arg = (j == k) ? 0.0 : z * t;
    out[static_cast<std::size_t>(j - 1)] =
        amp[static_cast<std::size_t>(j - 1)] * std::pow(std::cos(arg), 2);
  }
  out[2] = amp[static_cast<std::size_t>(3 - k - 1)] * std::pow(std::sin(z * t), 2);
  out[3] = n4;
  return out;
}

double transferred_phase(const ReducedParams& p, const FieldConfig& f) {
  return 3.0 * f.nu() * transfer_time(zeta(p, f, 0)) + pi / 2.0;
}

EffectiveModeDecomposition symmetric_modes(double Jeff) {
  EffectiveModeDecomposition d;
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0), r6 = std::sqrt(6.0);
  d.transform << 1.0 / r2, -1.0 / r2, 0.0,
                 1.0 / r3, 1.0 / r3, 1.0 / r3,
                 1.0 / r6, 1.0 / r6, -2.0 / r6;
  d.frequencies << -Jeff, 2.0 * Jeff, -Jeff;
  return d;
}

EffectiveModeDecomposition broken_modes(double nu, double zeta_value) {
  EffectiveModeDecomposition d;
  const double r2 = std::sqrt(2.0);
  d.transform << 1.0 / r2, 1.0 / r2, 0.0,
                 1.0 / r2, -1.0 / r2, 0.0,
                 0.0, 0.0, 1.0;
  d.frequencies << nu + zeta_value, nu - zeta_value, -2.0 * nu;
  return d;
}

double mode_expectation(const FockState& ini, const EffectiveModeDecomposition& d, double t,
                        int j) {
  if (j < 1 || j > 3)
    throw std::invalid_argument("mode_expectation: j must be in 1..3");
  const Eigen::Matrix3d& M = d.transform;
  if ((M * M.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("mode_expectation: transform is not orthogonal");
  const int col = j - 1;
  Complex acc = 0.0;
  for (int k = 0; k < 3; ++k) {
    for (int l = 0; l < 3; ++l) {
      const Complex phase = std::exp(Complex(0.0, t * (d.frequencies[l] - d.frequencies[k])));
      double wq = 0.0;
      for (int q = 0; q < 3; ++q) wq += M(k, q) * M(l, q) * ini[q];
      acc += M(k, col) * M(l, col) * wq * phase;
    }
  }
  if (std::abs(acc.imag()) >= 1e-10)
    throw InternalConsistencyError("mode_expectation: imaginary residue " +
                                   std::to_string(acc.imag()));
  return acc.real();
}

}  // namespace starwell
