#pragma once

#include <span>
#include <utility>
#include <vector>

#include "starwell/fock.hpp"
#include "starwell/hamiltonians.hpp"

namespace starwell {

/// Full Hermitian eigendecomposition H = V diag(w) V^dag, eigenvalues
/// ascending. Backed by LAPACK (dsyevd for real-valued operators, zheevd
/// otherwise). Reconstruction and unitarity residuals are exercised by the
/// test suite rather than re-verified per construction.
class SpectralDecomposition {
 public:
  static SpectralDecomposition compute(const LinearOperator& h);

  const Eigen::VectorXd& eigenvalues() const { return w_; }
  const Matrix& eigenvectors() const { return v_; }
  int particles() const { return particles_; }
  std::size_t dim() const { return static_cast<std::size_t>(w_.size()); }

  /// exp(-i H t) psi0; t may be negative.
  StateVector evolve(const StateVector& psi0, double t) const;

  /// Eigenbasis coefficients V^dag psi.
  Vector coefficients(const StateVector& psi) const;

 private:
  SpectralDecomposition(Eigen::VectorXd w, Matrix v, int particles)
      : w_(std::move(w)), v_(std::move(v)), particles_(particles) {}
  Eigen::VectorXd w_;
  Matrix v_;
  int particles_;
};

/// Eigenvalues only (no vectors); ascending.
Eigen::VectorXd eigenvalues_of(const LinearOperator& h);

/// Sampled expectation values <N_1..4>(t), optionally |<psi0|psi(t)>|.
struct TimeSeries {
  Eigen::VectorXd times;
  std::array<Eigen::VectorXd, 4> populations;
  Eigen::VectorXd fidelity_to_initial;  // empty unless requested
  int particles = 0;
};

TimeSeries population_series(const StateVector& psi0, const SpectralDecomposition& spec,
                             const FockBasis& basis, std::span<const double> times,
                             bool record_fidelity = false);

/// |<psi0| exp(-i H t) |psi0>|, in [0,1].
double fidelity(const StateVector& psi0, const SpectralDecomposition& spec, double t);

/// Eigenvalues of the reduced Hamiltonian across a grid of U values; each
/// entry is (U*N/J, ascending eigenvalues). Grid points run in parallel.
std::vector<std::pair<double, Eigen::VectorXd>> spectrum_scan(
    const FockBasis& basis, const ReducedParams& p_template, std::span<const double> u_grid);

/// Gap statistics of the levels inside [E_center - window, E_center + window].
/// Nearly degenerate levels (adjacent gap below degeneracy_tol) are merged
/// into one cluster first; degeneracy_tol < 0 selects half the mean raw gap.
/// Throws InsufficientData when fewer than 3 clusters fall in the window.
struct BandGapStats {
  double mean_gap = 0.0;
  double gap_std = 0.0;
  int level_count = 0;
  int cluster_count = 0;
};

BandGapStats band_spacing_stats(const Eigen::VectorXd& levels, double e_center, double window,
                                double degeneracy_tol = -1.0);
BandGapStats band_spacing_stats(const SpectralDecomposition& spec, double e_center,
                                double window, double degeneracy_tol = -1.0);

/// Maximal runs of adjacent levels separated by gaps below
/// gap_factor * median(gap). Returns [first,last] index pairs into `levels`.
/// Meaningful only on an energy range whose gap median is band-like; the
/// factor is a documented heuristic, not a physical definition.
std::vector<std::pair<std::size_t, std::size_t>> detect_bands(const Eigen::VectorXd& levels,
                                                              double gap_factor = 10.0);

/// Worker-thread count for grid parallelism: STARWELL_THREADS if set, else
/// hardware concurrency.
unsigned scan_thread_count();

}  // namespace starwell
