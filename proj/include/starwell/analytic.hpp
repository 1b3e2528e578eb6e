#pragma once

#include <array>
#include <complex>
#include <utility>

#include "starwell/fock.hpp"
#include "starwell/hamiltonians.hpp"

namespace starwell {

/// Second-order hopping rate
///   J(x) = J^2 [4U(N+1) + 2 sigma + x] / ([4U(N-2 n4) + 2 sigma + x]^2 - (4U)^2),
/// in units of J. Throws SingularParameter near the pole.
double hopping_fn(const ReducedParams& p, int n4, double x);

/// Jeff = J(0).
double effective_hopping(const ReducedParams& p, int n4 = 0);

/// Field gradient 2U(1-N) at which Jeff diverges.
double sigma_crit(const ReducedParams& p);

/// Edge populations under the resonant effective dynamics,
///   <N_j> = n_j + (4/9)(N - 3 n_j - n4) sin^2(3 Jeff t / 2),  <N4> = n4.
std::array<double, 4> populations_resonant(const FockState& ini, const ReducedParams& p,
                                           double t);

/// Effective channel frequency zeta = J(nu) [1 + J(nu)/(3 nu)].
double zeta(const ReducedParams& p, const FieldConfig& f, int n4 = 0);

/// Full-transfer time tau = pi / (2 |zeta|).
double transfer_time(double zeta_value);

/// Ratio nu / J(nu); the channel reduction assumes it is large. Diagnostic.
double channel_separation_ratio(const ReducedParams& p, const FieldConfig& f, int n4 = 0);

/// Populations under the broken-symmetry field F_k,
///   <N_j>_k = n_j + (n_{6-j-k} - n_j)(1 - delta_{j,k}) sin^2(zeta t),  <N4> = n4.
std::array<double, 4> populations_broken(const FockState& ini, const ReducedParams& p,
                                         const FieldConfig& f, double t);

/// Occupations at t = tau under F_k: the two channel wells swap, n_k and n4
/// stay put.
FockState routing_table(const FockState& ini, int k);

/// n1 bosons in the single-particle superposition alpha a_i^dag + beta a_j^dag,
/// with alpha = cos(q pi/2), beta = -i sin(q pi/2); well 4 holds n4 spectators
/// and the remaining well is empty.
struct CoherentPairState {
  Complex alpha;
  Complex beta;
  int site_i;
  int site_j;
  int pair_count;     // n1
  int central_count;  // n4
};

CoherentPairState coherent_pair(double q, int n1, std::pair<int, int> sites, int n4 = 0);

/// Binomial expansion of a CoherentPairState over the Fock basis.
StateVector expand_to_fock(const CoherentPairState& cps, const FockBasis& basis);

/// Endpoint imbalance <N2 - N3>/n1 = (-1)^{k+1} cos(q pi) of the two-stage
/// amplitude-control run under F_{k=2,3} then F_1.
double imbalance_prediction(double q, int k);

/// Oscillation amplitudes of the prepared pair: A1 = n1 cos^2(q pi/2),
/// A2 = n1 sin^2(q pi/2); A1 + A2 = n1.
double amplitude_a1(double q, int n1);
double amplitude_a2(double q, int n1);

/// Stage-two populations of the two-source protocol under F_{k=1,2}:
///   <N_j> = A_j(q) cos^2[(1-delta_{j,k}) zeta t]  (j = 1,2),
///   <N_3> = A_{3-k}(q) sin^2(zeta t),  <N4> = n4.
std::array<double, 4> populations_two_stage(double q, int k, int n1, int n4,
                                            const ReducedParams& p, const FieldConfig& f,
                                            double t);

/// Relative phase 3 nu tau + pi/2 carried into the transferred pair state.
double transferred_phase(const ReducedParams& p, const FieldConfig& f);

/// Orthogonal mode transform b = M a of the three edge modes together with
/// the mode frequencies Omega, diagonalizing an effective Hamiltonian.
struct EffectiveModeDecomposition {
  Eigen::Matrix3d transform;     // M, rows are mode vectors
  Eigen::Vector3d frequencies;   // Omega
};

/// Modes of the symmetric effective Hamiltonian: Omega = (-Jeff, 2Jeff, -Jeff).
EffectiveModeDecomposition symmetric_modes(double Jeff);

/// Modes of the k=3 broken effective Hamiltonian: Omega = (nu+zeta, nu-zeta, -2nu).
EffectiveModeDecomposition broken_modes(double nu, double zeta_value);

/// <N_j>(t) from a mode decomposition,
///   sum_{k,l,q} M_{kj} M_{kq} M_{lj} M_{lq} e^{i t (Omega_l - Omega_k)} n_q.
/// j is 1-based in 1..3. Throws if M is not orthogonal.
double mode_expectation(const FockState& ini, const EffectiveModeDecomposition& d, double t,
                        int j);

}  // namespace starwell
