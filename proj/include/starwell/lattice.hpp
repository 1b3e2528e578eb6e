#pragma once

#include <Eigen/Dense>
#include <array>

#include "starwell/hamiltonians.hpp"

namespace starwell {

/// CODATA 2018 values, SI units.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double planck = 6.62607015e-34;         // J s
inline constexpr double mu0 = 1.25663706212e-6;          // N A^-2
inline constexpr double bohr_radius = 5.29177210903e-11; // m
inline constexpr double bohr_magneton = 9.2740100783e-24;// J T^-1
inline constexpr double atomic_mass = 1.66053906660e-27; // kg
inline constexpr double dy164_mass = 163.9291819 * atomic_mass;
}  // namespace constants

/// Laboratory settings of the hexagonal lattice plus the plaquette-selecting
/// external field. Depths are in units of the recoil energy.
struct LatticeConfig {
  double wavelength = 1064e-9;    // m
  double V0 = 70.96;              // E_r
  double V1 = 0.75 * 70.96;       // E_r, vertical lattice
  double V2 = 0.0004 * 70.96;     // E_r, second (isolating) lattice
  double V3 = 0.005 * 70.96;      // E_r, Gaussian beam
  double waist = 2e-6;            // m
  double displacement = -1064e-9 / 6.0;  // Delta_l (m), signed; -l/2 default
  int displacement_site = 3;      // k, the well the beam is displaced toward
  double mass = constants::dy164_mass;      // kg
  double scattering_length = 0.0; // Bohr radii; not printed in the source data
  double dipole_moment = 9.93;    // Bohr magnetons
};

double recoil_energy(const LatticeConfig& cfg);  // h^2 / (2 m lambda^2), J

/// Nearest-neighbor distance l = lambda/3.
double site_spacing(const LatticeConfig& cfg);

/// Positions of wells 1..4; well 4 is the origin.
std::array<Eigen::Vector2d, 4> site_positions(const LatticeConfig& cfg);

struct TrapFrequencies {
  double omega;    // rad/s, xy plane
  double omega_z;  // rad/s
  double kappa;    // aspect ratio, kappa^2 = omega_z / omega
  double eta_xy;   // Gaussian width parameter m*omega/(2 hbar), 1/m^2
  double eta_z;
};
TrapFrequencies trap_frequencies(const LatticeConfig& cfg);

/// In-plane trap potential at r (J): V0 sum_i cos^2(k r.u_i + Phi_i).
double trap_potential_xy(const LatticeConfig& cfg, const Eigen::Vector2d& r);

/// External-field potential at r (J): the second lattice plus the displaced
/// Gaussian-beam harmonic term.
double external_potential(const LatticeConfig& cfg, const Eigen::Vector2d& r);

/// int |phi_i|^2 V_ext by 2D Gauss-Hermite quadrature; site in 1..4.
double site_external_energy(const LatticeConfig& cfg, int site, int order = 48);

struct FieldTerms {
  double sigma;   // J
  double nu;      // J
  double lambda;  // J
};

/// Closed forms of the external-field decomposition.
FieldTerms field_terms(const LatticeConfig& cfg);

/// Decomposition of per-site field energies into (sigma, nu, lambda) with the
/// displacement toward well k.
FieldTerms decompose_site_energies(const std::array<double, 4>& site_energy, int k);

struct InteractionEnergies {
  double Uc;        // contact on-site, J
  double Udip;      // dipolar on-site, J
  double U_edge;    // U12 = U23 = U13, J
  double U_center;  // U14 = U24 = U34, J
};

/// Contact energy in closed Gaussian form; dipolar energies by momentum-space
/// quadrature of the dipole kernel against the Gaussian densities.
InteractionEnergies interaction_energies(const LatticeConfig& cfg);

/// Dipole-dipole energy of two identical Gaussian clouds separated in-plane
/// by distance d (z-polarized dipoles).
double dipole_pair_energy(const LatticeConfig& cfg, double d);

/// Point-dipole limit mu0 mu_d^2 / (4 pi d^3) for in-plane separation.
double point_dipole_energy(const LatticeConfig& cfg, double d);

/// mu0 mu_d^2 m / (12 pi hbar^2), in meters. Diagnostic.
double dipolar_length(const LatticeConfig& cfg);

/// Lowest-band hopping rate between the center and an edge well from the
/// Gaussian-orbital integral against the full trigonometric trap. The raw
/// integral's sign tracks the arbitrary zero of the trap potential (the
/// orbitals are not orthogonal); the rate is its magnitude.
double hopping_integral(const LatticeConfig& cfg);

struct HubbardParams {
  double U0;        // Uc + Udip, J
  double U_edge;    // J
  double U_center;  // J
  double J;         // J
  double sigma;     // J
  double nu;        // J
  double lambda;    // J
  double U;         // (U0 - U_center)/4, J
  double Uc;
  double Udip;
  TrapFrequencies trap;
  double U_over_J;
  double sigma_over_J;
  double nu_over_J;
  double lambda_over_J;
};

HubbardParams hubbard_params(const LatticeConfig& cfg);

/// Map HubbardParams onto the reduced model (units of J) and report how far
/// the configuration sits from the integrable manifold U_edge = U0.
struct ReducedDerivation {
  ReducedParams params;
  double integrability_residual;  // |U_edge - U0| / U0
  double dropped_constant;        // units of J, depends on the sigma4 gauge
};
ReducedDerivation derive_reduced(const HubbardParams& hp, double sigma4_over_J, int N);

}  // namespace starwell
