#pragma once

#include <array>

#include "starwell/fock.hpp"

namespace starwell {

/// Parameters of the star-plaquette extended Bose-Hubbard Hamiltonian.
/// The star geometry forces U12=U23=U13 (edge pairs) and U14=U24=U34
/// (center-edge pairs), so only those two inter-site values are stored.
struct FullParams {
  double U0 = 0.0;        // on-site energy, units of J
  double U_edge = 0.0;    // U12 = U23 = U13
  double U_center = 0.0;  // U14 = U24 = U34
  double J = 1.0;         // hopping rate (internal units fix J = 1)
  std::array<double, 4> sigma_site{};  // local field strengths
};

/// Parameters of the reduced integrable Hamiltonian
///   H = U X^2 + sigma X - J [a4^dag(a1+a2+a3) + h.c.],  X = N1+N2+N3-N4.
struct ReducedParams {
  double U = 0.0;      // effective interaction (U0 - U14)/4, units of J
  double sigma = 0.0;  // gradient between center and edge subsystem
  double J = 1.0;
  int N = 0;           // total particles (used by the closed forms)
};

/// Symmetry-breaking field displaced toward well k: adds nu*(Ni+Nj-2Nk).
/// nu = 0 and k outside 1..3 are rejected at construction.
class FieldConfig {
 public:
  FieldConfig(double nu, int k);

  double nu() const { return nu_; }
  int k() const { return k_; }
  /// The two channel wells {1,2,3} \ {k}, ascending.
  std::array<int, 2> channel() const;

 private:
  double nu_;
  int k_;
};

LinearOperator ebhm_hamiltonian(const FockBasis& basis, const FullParams& p);
LinearOperator reduced_hamiltonian(const FockBasis& basis, const ReducedParams& p);
LinearOperator broken_hamiltonian(const FockBasis& basis, const ReducedParams& p,
                                  const FieldConfig& f);

/// Conserved charge Q = u^dag u with u = (a1 - a2)/sqrt(2),
/// i.e. (N1 + N2 - a1^dag a2 - a2^dag a1)/2.
LinearOperator charge_q(const FockBasis& basis);

/// Conserved charge Qt = v^dag v with v = (a1 + a2 - 2 a3)/sqrt(6).
LinearOperator charge_q_tilde(const FockBasis& basis);

/// Charge of the broken-symmetry sector: Qk = (Ni + Nj - tau_ij)/2 with
/// {i,j} = {1,2,3} \ {k}. charge_qk(basis, 3) equals charge_q(basis).
LinearOperator charge_qk(const FockBasis& basis, int k);

/// Second-order resonant Hamiltonian Jeff*(tau12 + tau23 + tau13),
/// identically Jeff*[2(N1+N2+N3) - 3(Q + Qt)].
LinearOperator effective_hamiltonian(const FockBasis& basis, double Jeff);

/// Broken-symmetry effective Hamiltonian zeta*tau_ij + nu*(Ni+Nj-2Nk).
LinearOperator effective_broken_hamiltonian(const FockBasis& basis, const ReducedParams& p,
                                            const FieldConfig& f);

/// max|AB - BA|.
double commutator_norm(const LinearOperator& a, const LinearOperator& b);

/// Reduction of FullParams to ReducedParams plus the dropped global constant
/// U0*N*(N-1)/2 - U*N^2 + (sigma+sigma4)*N. Requires the edge fields equal;
/// the edge/on-site interaction mismatch is not checked here (it is what the
/// integrability residual measures).
struct ReductionResult {
  ReducedParams params;
  double constant;
};
ReductionResult reduce_params(const FullParams& p, int N);

/// Resonance diagnostic |U(N-2*n4) + sigma/2| / J. Reported, never enforced.
double resonance_ratio(const ReducedParams& p, int n4);

}  // namespace starwell
