#include "starwell/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "starwell/errors.hpp"

namespace starwell {

namespace {

// C(n,k) for the small k used by the rank formula.
std::size_t binom(int n, int k) {
  if (n < k || k < 0) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / i;
  return r;
}

}  // namespace

FockBasis::FockBasis(int total_particles, int modes) : particles_(total_particles) {
  if (total_particles < 0)
    throw std::invalid_argument("FockBasis: particle number must be non-negative");
  if (modes != 4)
    throw std::invalid_argument("FockBasis: only 4 modes are supported");
  const int N = total_particles;
  states_.reserve(binom(N + 3, 3));
  for (int n1 = N; n1 >= 0; --n1)
    for (int n2 = N - n1; n2 >= 0; --n2)
      for (int n3 = N - n1 - n2; n3 >= 0; --n3)
        states_.push_back(FockState{{n1, n2, n3, N - n1 - n2 - n3}});
}

std::size_t FockBasis::index_of(const FockState& s) const {
  for (int v : s.n)
    if (v < 0) throw std::invalid_argument("FockBasis::index_of: negative occupation");
  if (s.total() != particles_)
    throw std::invalid_argument("FockBasis::index_of: state has " +
                                std::to_string(s.total()) + " particles, basis has " +
                                std::to_string(particles_));
  const int N = particles_;
  // Rank in descending-lex order over (n1,n2,n3).
  return binom(N - s.n[0] + 2, 3) + binom(N - s.n[0] - s.n[1] + 1, 2) +
         static_cast<std::size_t>(N - s.n[0] - s.n[1] - s.n[2]);
}

LinearOperator::LinearOperator(Matrix m, int particles, bool hermitian)
    : m_(std::move(m)), particles_(particles), hermitian_(hermitian) {
  if (m_.rows() != m_.cols())
    throw std::invalid_argument("LinearOperator: matrix must be square");
  if (hermitian_) {
    const double asym = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (asym >= 1e-12)
      throw InternalConsistencyError("LinearOperator: hermitian flag set but max|A-A^dag| = " +
                                     std::to_string(asym));
  }
}

StateVector::StateVector(Vector amplitudes, int particles)
    : a_(std::move(amplitudes)), particles_(particles) {
  const double n = a_.norm();
  if (!(n > 0.0))
    throw std::invalid_argument("StateVector: cannot normalize a zero vector");
  a_ /= n;
}

StateVector fock_state_vector(const FockBasis& basis, const FockState& s) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.size()));
  v[static_cast<Eigen::Index>(basis.index_of(s))] = 1.0;
  return StateVector(std::move(v), basis.particles());
}

LinearOperator number_operator(const FockBasis& basis, int site) {
  if (site < 1 || site > 4)
    throw std::invalid_argument("number_operator: site must be in 1..4");
  const auto d = static_cast<Eigen::Index>(basis.size());
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    m(i, i) = static_cast<double>(basis.state(i)[site - 1]);
  return LinearOperator(std::move(m), basis.particles(), true);
}

LinearOperator hopping_operator(const FockBasis& basis, int i, int j) {
  if (i < 1 || i > 4 || j < 1 || j > 4)
    throw std::invalid_argument("hopping_operator: sites must be in 1..4");
  if (i == j)
    throw std::invalid_argument("hopping_operator: sites must differ");
  const auto d = static_cast<Eigen::Index>(basis.size());
  Matrix m = Matrix::Zero(d, d);
  const int a = i - 1, b = j - 1;
  for (Eigen::Index col = 0; col < d; ++col) {
    const FockState& s = basis.state(col);
    if (s[b] > 0) {
      FockState t = s;
      --t.n[b];
      ++t.n[a];
      const auto row = static_cast<Eigen::Index>(basis.index_of(t));
      const double amp = std::sqrt(static_cast<double>((s[a] + 1) * s[b]));
      m(row, col) += amp;  // a_i^dag a_j
      m(col, row) += amp;  // a_j^dag a_i
    }
  }
  return LinearOperator(std::move(m), basis.particles(), true);
}

double expectation(const LinearOperator& op, const StateVector& psi) {
  if (op.dim() != psi.dim())
    throw std::invalid_argument("expectation: dimension mismatch");
  if (!op.is_hermitian())
    throw std::invalid_argument("expectation: operator is not Hermitian");
  const Complex v = psi.amplitudes().dot(op.matrix() * psi.amplitudes());
  if (std::abs(v.imag()) >= 1e-10)
    throw InternalConsistencyError("expectation: imaginary residue " +
                                   std::to_string(v.imag()) + " on a Hermitian operator");
  return v.real();
}

}  // namespace starwell
