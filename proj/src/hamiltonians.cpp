#include "starwell/hamiltonians.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "starwell/analytic.hpp"

namespace starwell {

namespace {

Matrix star_hopping(const FockBasis& basis) {
  return hopping_operator(basis, 1, 4).matrix() + hopping_operator(basis, 2, 4).matrix() +
         hopping_operator(basis, 3, 4).matrix();
}

}  // namespace

FieldConfig::FieldConfig(double nu, int k) : nu_(nu), k_(k) {
  if (k < 1 || k > 3)
    throw std::invalid_argument("FieldConfig: k must be in 1..3");
  if (nu == 0.0)
    throw std::invalid_argument("FieldConfig: nu must be nonzero (zeta has a 1/nu term)");
}

std::array<int, 2> FieldConfig::channel() const {
  switch (k_) {
    case 1: return {2, 3};
    case 2: return {1, 3};
    default: return {1, 2};
  }
}

LinearOperator ebhm_hamiltonian(const FockBasis& basis, const FullParams& p) {
  const auto d = static_cast<Eigen::Index>(basis.size());
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const FockState& s = basis.state(i);
    double e = 0.0;
    for (int a = 0; a < 4; ++a) {
      e += 0.5 * p.U0 * s[a] * (s[a] - 1);
      e += p.sigma_site[static_cast<std::size_t>(a)] * s[a];
    }
    e += p.U_edge * (s[0] * s[1] + s[0] * s[2] + s[1] * s[2]);
    e += p.U_center * (s[0] * s[3] + s[1] * s[3] + s[2] * s[3]);
    m(i, i) = e;
  }
  m -= p.J * star_hopping(basis);
  return LinearOperator(std::move(m), basis.particles(), true);
}

LinearOperator reduced_hamiltonian(const FockBasis& basis, const ReducedParams& p) {
  if (p.N != basis.particles())
    throw std::invalid_argument("reduced_hamiltonian: params are for N = " +
                                std::to_string(p.N) + ", basis has N = " +
                                std::to_string(basis.particles()));
  const auto d = static_cast<Eigen::Index>(basis.size());
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const FockState& s = basis.state(i);
    const double x = s[0] + s[1] + s[2] - s[3];
    m(i, i) = p.U * x * x + p.sigma * x;
  }
  m -= p.J * star_hopping(basis);
  return LinearOperator(std::move(m), basis.particles(), true);
}

LinearOperator broken_hamiltonian(const FockBasis& basis, const ReducedParams& p,
                                  const FieldConfig& f) {
  Matrix m = reduced_hamiltonian(basis, p).matrix();
  const auto d = static_cast<Eigen::Index>(basis.size());
  for (Eigen::Index i = 0; i < d; ++i) {
    const FockState& s = basis.state(i);
    const auto [a, b] = f.channel();
    m(i, i) += f.nu() * (s[a - 1] + s[b - 1] - 2 * s[f.k() - 1]);
  }
  return LinearOperator(std::move(m), basis.particles(), true);
}

LinearOperator charge_q(const FockBasis& basis) {
  // u^dag u with u = (a1 - a2)/sqrt(2).
  Matrix m = 0.5 * (number_operator(basis, 1).matrix() + number_operator(basis, 2).matrix() -
                    hopping_operator(basis, 1, 2).matrix());
  return LinearOperator(std::move(m), basis.particles(), true);
}

LinearOperator charge_q_tilde(const FockBasis& basis) {
  // v^dag v with v = (a1 + a2 - 2 a3)/sqrt(6).
  Matrix m = (number_operator(basis, 1).matrix() + number_operator(basis, 2).matrix() +
              4.0 * number_operator(basis, 3).matrix() + hopping_operator(basis, 1, 2).matrix() -
              2.0 * hopping_operator(basis, 1, 3).matrix() -
              2.0 * hopping_operator(basis, 2, 3).matrix()) /
             6.0;
  return LinearOperator(std::move(m), basis.particles(), true);
}

LinearOperator charge_qk(const FockBasis& basis, int k) {
  if (k < 1 || k > 3)
    throw std::invalid_argument("charge_qk: k must be in 1..3");
  const auto ch = FieldConfig(1.0, k).channel();
  Matrix m = 0.5 * (number_operator(basis, ch[0]).matrix() +
                    number_operator(basis, ch[1]).matrix() -
                    hopping_operator(basis, ch[0], ch[1]).matrix());
  return LinearOperator(std::move(m), basis.particles(), true);
}

LinearOperator effective_hamiltonian(const FockBasis& basis, double Jeff) {
  if (!std::isfinite(Jeff))
    throw std::invalid_argument("effective_hamiltonian: Jeff must be finite");
  Matrix m = Jeff * (hopping_operator(basis, 1, 2).matrix() +
                     hopping_operator(basis, 2, 3).matrix() +
                     hopping_operator(basis, 1, 3).matrix());
  return LinearOperator(std::move(m), basis.particles(), true);
}

LinearOperator effective_broken_hamiltonian(const FockBasis& basis, const ReducedParams& p,
                                            const FieldConfig& f) {
  const double z = zeta(p, f, 0);
  const auto ch = f.channel();
  Matrix m = z * hopping_operator(basis, ch[0], ch[1]).matrix();
  const auto d = static_cast<Eigen::Index>(basis.size());
  for (Eigen::Index i = 0; i < d; ++i) {
    const FockState& s = basis.state(i);
    m(i, i) += f.nu() * (s[ch[0] - 1] + s[ch[1] - 1] - 2 * s[f.k() - 1]);
  }
  return LinearOperator(std::move(m), basis.particles(), true);
}

double commutator_norm(const LinearOperator& a, const LinearOperator& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("commutator_norm: dimension mismatch");
  return (a.matrix() * b.matrix() - b.matrix() * a.matrix()).cwiseAbs().maxCoeff();
}

ReductionResult reduce_params(const FullParams& p, int N) {
  const double se = p.sigma_site[0];
  if (std::abs(p.sigma_site[1] - se) > 1e-12 || std::abs(p.sigma_site[2] - se) > 1e-12)
    throw std::invalid_argument("reduce_params: edge fields sigma_1..3 must be equal");
  ReductionResult r;
  r.params.U = (p.U0 - p.U_center) / 4.0;
  r.params.sigma = (se - p.sigma_site[3]) / 2.0;
  r.params.J = p.J;
  r.params.N = N;
  r.constant = p.U0 * N * (N - 1) / 2.0 - r.params.U * N * N +
               (r.params.sigma + p.sigma_site[3]) * N;
  return r;
}

double resonance_ratio(const ReducedParams& p, int n4) {
  return std::abs(p.U * (p.N - 2 * n4) + p.sigma / 2.0) / p.J;
}

}  // namespace starwell
