#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace starwell {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Occupation numbers (n1,n2,n3,n4) of the four wells. Well 4 is the center.
struct FockState {
  std::array<int, 4> n{};

  int total() const { return n[0] + n[1] + n[2] + n[3]; }
  int operator[](int site) const { return n[site]; }
  bool operator==(const FockState&) const = default;
};

/// Fock basis for N bosons in 4 modes, ordered lexicographically descending
/// in (n1,n2,n3); n4 = N - n1 - n2 - n3 is implied. The ordering admits an
/// arithmetic rank, so index_of() is O(1).
class FockBasis {
 public:
  explicit FockBasis(int total_particles, int modes = 4);

  int particles() const { return particles_; }
  std::size_t size() const { return states_.size(); }
  const FockState& state(std::size_t i) const { return states_[i]; }
  const std::vector<FockState>& states() const { return states_; }

  /// Rank of a state in this basis; throws if the state does not belong.
  std::size_t index_of(const FockState& s) const;

 private:
  int particles_;
  std::vector<FockState> states_;
};

/// Dense operator on the fixed-N sector. Construction with hermitian=true
/// verifies max|A - A^dag| < 1e-12.
class LinearOperator {
 public:
  LinearOperator(Matrix m, int particles, bool hermitian);

  const Matrix& matrix() const { return m_; }
  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  int particles() const { return particles_; }
  bool is_hermitian() const { return hermitian_; }

 private:
  Matrix m_;
  int particles_;
  bool hermitian_;
};

/// Normalized complex amplitude vector over a FockBasis.
class StateVector {
 public:
  StateVector(Vector amplitudes, int particles);

  const Vector& amplitudes() const { return a_; }
  std::size_t dim() const { return static_cast<std::size_t>(a_.size()); }
  int particles() const { return particles_; }
  double norm() const { return a_.norm(); }

 private:
  Vector a_;
  int particles_;
};

/// Unit vector on the given Fock state.
StateVector fock_state_vector(const FockBasis& basis, const FockState& s);

/// N_site as a diagonal operator; site in 1..4.
LinearOperator number_operator(const FockBasis& basis, int site);

/// tau_ij = a_i^dag a_j + a_j^dag a_i; sites 1-based, i != j.
LinearOperator hopping_operator(const FockBasis& basis, int i, int j);

/// <psi|A|psi> for Hermitian A. The imaginary residue must be below 1e-10
/// and is discarded.
double expectation(const LinearOperator& op, const StateVector& psi);

}  // namespace starwell
