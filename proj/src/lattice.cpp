#include "starwell/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "starwell/quadrature.hpp"

namespace starwell {

namespace {

using std::numbers::pi;
using Eigen::Vector2d;

std::array<Vector2d, 3> beam_vectors() {
  const double r3 = std::sqrt(3.0);
  return {Vector2d(r3 / 2.0, 0.5), Vector2d(-r3 / 2.0, 0.5), Vector2d(0.0, 1.0)};
}

std::array<double, 3> beam_phases() {
  // Phi_i = (0, 2 pi / 3) . u_i centers the plaquette at the origin.
  std::array<double, 3> phi{};
  const auto u = beam_vectors();
  for (int i = 0; i < 3; ++i) phi[static_cast<std::size_t>(i)] = 2.0 * pi / 3.0 * u[static_cast<std::size_t>(i)].y();
  return phi;
}

double wavenumber(const LatticeConfig& cfg) { return 2.0 * pi / cfg.wavelength; }

Vector2d displacement_vector(const LatticeConfig& cfg) {
  const auto sites = site_positions(cfg);
  const int k = cfg.displacement_site;
  if (k < 1 || k > 3)
    throw std::invalid_argument("lattice: displacement site must be in 1..3");
  const Vector2d unit = sites[static_cast<std::size_t>(k - 1)].normalized();
  return cfg.displacement * unit;
}

}  // namespace

double recoil_energy(const LatticeConfig& cfg) {
  return constants::planck * constants::planck /
         (2.0 * cfg.mass * cfg.wavelength * cfg.wavelength);
}

double site_spacing(const LatticeConfig& cfg) { return cfg.wavelength / 3.0; }

std::array<Vector2d, 4> site_positions(const LatticeConfig& cfg) {
  const double l = site_spacing(cfg);
  const double r3 = std::sqrt(3.0);
  return {Vector2d(0.0, l), l * Vector2d(-r3 / 2.0, -0.5), l * Vector2d(r3 / 2.0, -0.5),
          Vector2d(0.0, 0.0)};
}

TrapFrequencies trap_frequencies(const LatticeConfig& cfg) {
  if (cfg.V0 < 0.0 || cfg.V1 < 0.0)
    throw std::invalid_argument("trap_frequencies: depths must be non-negative");
  const double er = recoil_energy(cfg);
  const double l = site_spacing(cfg);
  TrapFrequencies t;
  t.omega = pi / l * std::sqrt(2.0 * cfg.V0 * er / (3.0 * cfg.mass));
  const double k = wavenumber(cfg);
  t.omega_z = std::sqrt(2.0 * cfg.V1 * er * k * k / cfg.mass);
  t.kappa = std::sqrt(t.omega_z / t.omega);
  t.eta_xy = cfg.mass * t.omega / (2.0 * constants::hbar);
  t.eta_z = cfg.mass * t.omega_z / (2.0 * constants::hbar);
  return t;
}

double trap_potential_xy(const LatticeConfig& cfg, const Vector2d& r) {
  const double er = recoil_energy(cfg);
  const double k = wavenumber(cfg);
  const auto u = beam_vectors();
  const auto phi = beam_phases();
  double v = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double c = std::cos(k * r.dot(u[static_cast<std::size_t>(i)]) + phi[static_cast<std::size_t>(i)]);
    v += cfg.V0 * er * c * c;
  }
  return v;
}

double external_potential(const LatticeConfig& cfg, const Vector2d& r) {
  const double er = recoil_energy(cfg);
  const double k = wavenumber(cfg);
  const auto u = beam_vectors();
  double v = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double c = std::cos(k * r.dot(u[static_cast<std::size_t>(i)]));
    v += cfg.V2 * er * c * c;
  }
  const Vector2d d = r - displacement_vector(cfg);
  v += 2.0 * cfg.V3 * er / (cfg.waist * cfg.waist) * d.squaredNorm();
  return v;
}

double site_external_energy(const LatticeConfig& cfg, int site, int order) {
  if (site < 1 || site > 4)
    throw std::invalid_argument("site_external_energy: site must be in 1..4");
  const auto rule = gauss_hermite(order);
  const TrapFrequencies t = trap_frequencies(cfg);
  const double scale = 1.0 / std::sqrt(2.0 * t.eta_xy);
  const Vector2d center = site_positions(cfg)[static_cast<std::size_t>(site - 1)];
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const Vector2d r = center + scale * Vector2d(rule.nodes[i], rule.nodes[j]);
      acc += rule.weights[i] * rule.weights[j] * external_potential(cfg, r);
    }
  return acc / pi;
}

FieldTerms field_terms(const LatticeConfig& cfg) {
  const double er = recoil_energy(cfg);
  const TrapFrequencies t = trap_frequencies(cfg);
  const double l = site_spacing(cfg);
  const double x = std::exp(-2.0 * pi * pi / (9.0 * l * l * t.eta_xy));
  const double v2 = cfg.V2 * er, v3 = cfg.V3 * er;
  const double w2 = cfg.waist * cfg.waist;
  FieldTerms f;
  f.sigma = -9.0 / 8.0 * x * v2 + l * l / w2 * v3;
  f.nu = 2.0 * l * cfg.displacement * v3 / w2;
  f.lambda = 3.0 / 8.0 * (4.0 + x) * v2 +
             v3 / w2 * (l * l + 2.0 * cfg.displacement * cfg.displacement + 1.0 / t.eta_xy);
  return f;
}

FieldTerms decompose_site_energies(const std::array<double, 4>& e, int k) {
  if (k < 1 || k > 3)
    throw std::invalid_argument("decompose_site_energies: k must be in 1..3");
  const auto ch = FieldConfig(1.0, k).channel();
  FieldTerms f;
  f.sigma = ((e[0] + e[1] + e[2]) / 3.0 - e[3]) / 2.0;
  f.nu = ((e[static_cast<std::size_t>(ch[0] - 1)] + e[static_cast<std::size_t>(ch[1] - 1)]) / 2.0 -
          e[static_cast<std::size_t>(k - 1)]) /
         3.0;
  f.lambda = e[3] + f.sigma;
  return f;
}

double dipole_pair_energy(const LatticeConfig& cfg, double d) {
  const TrapFrequencies t = trap_frequencies(cfg);
  const double mu_d = cfg.dipole_moment * constants::bohr_magneton;
  const double c = constants::mu0 * mu_d * mu_d / (4.0 * pi * pi);
  const double s_xy = std::sqrt(t.eta_xy);
  const double s_z = std::sqrt(t.eta_z);
  const double qmax = 14.0 * s_xy;
  const int panels = 24 + static_cast<int>(d * qmax / pi);
  auto f = [&](double q) {
    const double iz =
        4.0 / 3.0 * std::sqrt(pi) * s_z - pi * q * erfcx(q / (2.0 * s_z));
    return q * std::cyl_bessel_j(0, q * d) * std::exp(-q * q / (4.0 * t.eta_xy)) * iz;
  };
  return c * integrate_panels(f, 0.0, qmax, panels, 24);
}

double point_dipole_energy(const LatticeConfig& cfg, double d) {
  const double mu_d = cfg.dipole_moment * constants::bohr_magneton;
  return constants::mu0 * mu_d * mu_d / (4.0 * pi * d * d * d);
}

double dipolar_length(const LatticeConfig& cfg) {
  const double mu_d = cfg.dipole_moment * constants::bohr_magneton;
  return constants::mu0 * mu_d * mu_d * cfg.mass /
         (12.0 * pi * constants::hbar * constants::hbar);
}

InteractionEnergies interaction_energies(const LatticeConfig& cfg) {
  const TrapFrequencies t = trap_frequencies(cfg);
  InteractionEnergies u;
  const double g = 4.0 * pi * constants::hbar * constants::hbar *
                   (cfg.scattering_length * constants::bohr_radius) / cfg.mass;
  u.Uc = g * std::sqrt(t.eta_xy / pi) * std::sqrt(t.eta_xy / pi) * std::sqrt(t.eta_z / pi);
  u.Udip = dipole_pair_energy(cfg, 0.0);
  const double l = site_spacing(cfg);
  u.U_center = dipole_pair_energy(cfg, l);
  u.U_edge = dipole_pair_energy(cfg, std::sqrt(3.0) * l);
  return u;
}

double hopping_integral(const LatticeConfig& cfg) {
  const TrapFrequencies t = trap_frequencies(cfg);
  const double eta = t.eta_xy;
  const double l = site_spacing(cfg);
  const double s = std::exp(-eta * l * l / 2.0);  // 2D Gaussian overlap
  const double kinetic =
      constants::hbar * constants::hbar * eta / (2.0 * cfg.mass) * (2.0 - eta * l * l) * s;
  const double z_energy = 0.5 * constants::hbar * t.omega_z * s;

  // potential term over the product Gaussian at the bond midpoint
  const auto sites = site_positions(cfg);
  const Vector2d mid = 0.5 * (sites[0] + sites[3]);
  const auto rule = gauss_hermite(48);
  const double scale = 1.0 / std::sqrt(2.0 * eta);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const Vector2d r = mid + scale * Vector2d(rule.nodes[i], rule.nodes[j]);
      acc += rule.weights[i] * rule.weights[j] * trap_potential_xy(cfg, r);
    }
  const double potential = s * acc / pi;

  return std::abs(kinetic + potential + z_energy);
}

HubbardParams hubbard_params(const LatticeConfig& cfg) {
  HubbardParams hp{};
  const InteractionEnergies u = interaction_energies(cfg);
  const FieldTerms f = field_terms(cfg);
  hp.Uc = u.Uc;
  hp.Udip = u.Udip;
  hp.U0 = u.Uc + u.Udip;
  hp.U_edge = u.U_edge;
  hp.U_center = u.U_center;
  hp.J = hopping_integral(cfg);
  hp.sigma = f.sigma;
  hp.nu = f.nu;
  hp.lambda = f.lambda;
  hp.U = (hp.U0 - hp.U_center) / 4.0;
  hp.trap = trap_frequencies(cfg);
  hp.U_over_J = hp.U / hp.J;
  hp.sigma_over_J = hp.sigma / hp.J;
  hp.nu_over_J = hp.nu / hp.J;
  hp.lambda_over_J = hp.lambda / hp.J;
  return hp;
}

ReducedDerivation derive_reduced(const HubbardParams& hp, double sigma4_over_J, int N) {
  ReducedDerivation d;
  d.params.U = hp.U_over_J;
  d.params.sigma = hp.sigma_over_J;
  d.params.J = 1.0;
  d.params.N = N;
  d.integrability_residual = hp.U0 != 0.0 ? std::abs(hp.U_edge - hp.U0) / std::abs(hp.U0) : 0.0;
  d.dropped_constant = hp.U0 / hp.J * N * (N - 1) / 2.0 - d.params.U * N * N +
                       (d.params.sigma + sigma4_over_J) * N;
  return d;
}

}  // namespace starwell
