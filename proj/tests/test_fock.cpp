#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "starwell/errors.hpp"
#include "starwell/fock.hpp"

using namespace starwell;

namespace {

// brute-force tau_ij matrix element between two explicit occupation vectors
double tau_element_oracle(const FockState& bra, const FockState& ket, int i, int j) {
  double v = 0.0;
  for (auto [a, b] : {std::pair{i - 1, j - 1}, std::pair{j - 1, i - 1}}) {
    FockState t = ket;
    if (t.n[b] == 0) continue;
    --t.n[b];
    ++t.n[a];
    if (t == bra) v += std::sqrt(static_cast<double>((ket[a] + 1) * ket[b]));
  }
  return v;
}

}  // namespace

TEST_CASE("basis sizes follow the stars-and-bars count") {
  CHECK(FockBasis(2).size() == 10);
  CHECK(FockBasis(16).size() == 969);
  const FockBasis vacuum(0);
  CHECK(vacuum.size() == 1);
  CHECK(vacuum.state(0) == FockState{{0, 0, 0, 0}});
}

TEST_CASE("negative particle number and unsupported mode count are rejected") {
  CHECK_THROWS_AS(FockBasis(-1), std::invalid_argument);
  CHECK_THROWS_AS(FockBasis(3, 5), std::invalid_argument);
}

TEST_CASE("index_of is the inverse of state enumeration") {
  for (int n : {0, 1, 2, 5, 9}) {
    const FockBasis basis(n);
    for (std::size_t i = 0; i < basis.size(); ++i)
      CHECK(basis.index_of(basis.state(i)) == i);
  }
}

TEST_CASE("index_of rejects foreign states") {
  const FockBasis basis(4);
  CHECK_THROWS_AS(basis.index_of(FockState{{4, 1, 0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(basis.index_of(FockState{{5, -1, 0, 0}}), std::invalid_argument);
}

TEST_CASE("ordering is descending lexicographic in (n1,n2,n3)") {
  const FockBasis basis(3);
  CHECK(basis.state(0) == FockState{{3, 0, 0, 0}});
  CHECK(basis.state(1) == FockState{{2, 1, 0, 0}});
  CHECK(basis.state(basis.size() - 1) == FockState{{0, 0, 0, 3}});
}

TEST_CASE("number operator is the occupation diagonal") {
  const FockBasis basis(1);
  const auto n1 = number_operator(basis, 1);
  const auto idx = basis.index_of(FockState{{1, 0, 0, 0}});
  CHECK(n1.matrix()(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)).real() ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(number_operator(basis, 0), std::invalid_argument);
  CHECK_THROWS_AS(number_operator(basis, 5), std::invalid_argument);
}

TEST_CASE("number operators sum to N times the identity") {
  const FockBasis basis(5);
  Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(basis.size()),
                            static_cast<Eigen::Index>(basis.size()));
  for (int s = 1; s <= 4; ++s) sum += number_operator(basis, s).matrix();
  const Matrix expect =
      5.0 * Matrix::Identity(static_cast<Eigen::Index>(basis.size()),
                             static_cast<Eigen::Index>(basis.size()));
  CHECK((sum - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("trace of N1 over the N=2 basis matches direct enumeration") {
  // oracle: sum n1 over the 10 two-particle states = 5
  const FockBasis basis(2);
  double trace = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) trace += basis.state(i)[0];
  CHECK(trace == 5.0);
  CHECK(number_operator(basis, 1).matrix().trace().real() == doctest::Approx(5.0));
}

TEST_CASE("single-particle hopping matrix element is 1") {
  const FockBasis basis(1);
  const auto t14 = hopping_operator(basis, 1, 4);
  const auto a = basis.index_of(FockState{{1, 0, 0, 0}});
  const auto b = basis.index_of(FockState{{0, 0, 0, 1}});
  CHECK(t14.matrix()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)).real() ==
        doctest::Approx(1.0));
}

TEST_CASE("bosonic enhancement: <2,0|tau12|1,1> = sqrt(2)") {
  const FockBasis basis(2);
  const auto t12 = hopping_operator(basis, 1, 2);
  const auto a = basis.index_of(FockState{{2, 0, 0, 0}});
  const auto b = basis.index_of(FockState{{1, 1, 0, 0}});
  CHECK(t12.matrix()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)).real() ==
        doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("hopping operators match the combinatorial oracle and are exactly Hermitian") {
  for (int n : {1, 2, 3, 4}) {
    const FockBasis basis(n);
    for (auto [i, j] : {std::pair{1, 2}, std::pair{1, 4}, std::pair{3, 2}}) {
      const auto t = hopping_operator(basis, i, j);
      CHECK((t.matrix() - t.matrix().adjoint()).cwiseAbs().maxCoeff() == 0.0);
      for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = 0; b < basis.size(); ++b)
          CHECK(t.matrix()(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)).real() ==
                doctest::Approx(tau_element_oracle(basis.state(a), basis.state(b), i, j)));
    }
  }
}

TEST_CASE("hopping between identical sites is rejected") {
  const FockBasis basis(2);
  CHECK_THROWS_AS(hopping_operator(basis, 2, 2), std::invalid_argument);
}

TEST_CASE("expectation on Fock eigenstates and superpositions") {
  const FockBasis basis(16);
  const auto psi = fock_state_vector(basis, FockState{{14, 2, 0, 0}});
  CHECK(expectation(number_operator(basis, 1), psi) == doctest::Approx(14.0));

  Matrix total = Matrix::Zero(static_cast<Eigen::Index>(basis.size()),
                              static_cast<Eigen::Index>(basis.size()));
  for (int s = 1; s <= 4; ++s) total += number_operator(basis, s).matrix();
  CHECK(expectation(LinearOperator(total, 16, true), psi) == doctest::Approx(16.0));
}

TEST_CASE("equal superposition has half a particle on each participating well") {
  const FockBasis basis(1);
  Vector amps = Vector::Zero(4);
  amps[static_cast<Eigen::Index>(basis.index_of(FockState{{1, 0, 0, 0}}))] = 1.0;
  amps[static_cast<Eigen::Index>(basis.index_of(FockState{{0, 1, 0, 0}}))] = 1.0;
  const StateVector psi(amps, 1);
  CHECK(psi.norm() == doctest::Approx(1.0));
  CHECK(expectation(number_operator(basis, 1), psi) == doctest::Approx(0.5));
}

TEST_CASE("expectation rejects dimension mismatches") {
  const FockBasis b1(1), b2(2);
  const auto psi = fock_state_vector(b2, FockState{{2, 0, 0, 0}});
  CHECK_THROWS_AS(expectation(number_operator(b1, 1), psi), std::invalid_argument);
}

TEST_CASE("LinearOperator verifies the hermitian flag") {
  Matrix bad(2, 2);
  bad << 0.0, 1.0, 2.0, 0.0;
  CHECK_THROWS_AS(LinearOperator(bad, 1, true), InternalConsistencyError);
  CHECK_NOTHROW(LinearOperator(bad, 1, false));
}

TEST_CASE("StateVector normalizes on construction and rejects the zero vector") {
  Vector v = Vector::Zero(3);
  CHECK_THROWS_AS(StateVector(v, 1), std::invalid_argument);
  v[0] = 3.0;
  CHECK(StateVector(v, 1).norm() == doctest::Approx(1.0));
}
