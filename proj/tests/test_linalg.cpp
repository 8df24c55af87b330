// Copyright 2026 The qcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qcorr/error.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/random.hpp"
#include "qcorr/stochastic.hpp"

namespace qcorr {
namespace {

const double kS = 1.0 / std::numbers::sqrt2;

CMatrix pauli_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
CMatrix pauli_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

CMatrix bell_ket() {
  const Complex v[] = {kS, 0.0, 0.0, kS};
  return CMatrix::ket(v);
}

TEST(Linalg, HermitianEigOfPauliX) {
  const EigenSystem es = hermitian_eig(pauli_x());
  ASSERT_EQ(es.values.size(), 2u);
  EXPECT_NEAR(es.values[0], 1.0, 1e-13);
  EXPECT_NEAR(es.values[1], -1.0, 1e-13);
  EXPECT_TRUE(is_unitary(es.vectors, 1e-12));
  const double lam[] = {1.0, -1.0};
  const CMatrix back = es.vectors * CMatrix::diagonal(lam) * es.vectors.adjoint();
  EXPECT_LT(frobenius_distance(back, pauli_x()), 1e-12);
}

TEST(Linalg, EigReconstructsRandomHermitian) {
  random::Rng rng(7);
  for (std::size_t d : {2u, 3u, 5u, 9u}) {
    const CMatrix g = random::ginibre(d, d, rng);
    const CMatrix h = g + g.adjoint();
    const EigenSystem es = hermitian_eig(h);
    EXPECT_TRUE(std::is_sorted(es.values.rbegin(), es.values.rend()));
    const CMatrix back = es.vectors * CMatrix::diagonal(es.values) * es.vectors.adjoint();
    EXPECT_LT(frobenius_distance(back, h), 1e-10 * h.frobenius_norm());
  }
}

TEST(Linalg, TensorAndPartialTrace) {
  const CMatrix rho = outer(bell_ket());
  const std::size_t dims[] = {2, 2};
  const std::size_t keep_a[] = {0};
  const CMatrix red = partial_trace(rho, dims, keep_a);
  EXPECT_LT(frobenius_distance(red, CMatrix::identity(2) * Complex(0.5)), 1e-15);

  random::Rng rng(3);
  const CMatrix a = random::density_matrix(2, rng);
  const CMatrix b = random::density_matrix(3, rng);
  const CMatrix ab = tensor(a, b);
  EXPECT_EQ(ab.rows(), 6u);
  const std::size_t dims23[] = {2, 3};
  const std::size_t keep_b[] = {1};
  EXPECT_LT(frobenius_distance(partial_trace(ab, dims23, keep_b), b), 1e-14);
  EXPECT_LT(frobenius_distance(partial_trace(ab, dims23, keep_a), a), 1e-14);
  EXPECT_EQ(tensor_power(a, 3).rows(), 8u);
}

TEST(Linalg, CommutatorNormOfPaulis) {
  // [X, Z] = -2iY, Frobenius norm 2 sqrt(2).
  EXPECT_NEAR(commutator_norm(pauli_x(), pauli_z()), 2.0 * std::numbers::sqrt2, 1e-14);
  EXPECT_NEAR(commutator_norm(pauli_z(), CMatrix::identity(2)), 0.0, 1e-15);
}

TEST(Linalg, SimultaneousDiagonalization) {
  const CMatrix commuting[] = {pauli_z(), CMatrix::identity(2) * Complex(3.0)};
  const SimultaneousDiagonalization ok = simultaneous_diagonalize(commuting);
  ASSERT_TRUE(ok);
  for (const CMatrix& m : commuting) {
    const CMatrix d = ok.basis->adjoint() * m * *ok.basis;
    EXPECT_LT(std::abs(d(0, 1)) + std::abs(d(1, 0)), 1e-12);
  }
  const CMatrix clash[] = {pauli_x(), pauli_z()};
  const SimultaneousDiagonalization no = simultaneous_diagonalize(clash);
  EXPECT_FALSE(no);
  EXPECT_GT(no.max_commutator, 1.0);
}

TEST(Linalg, SimultaneousDiagonalizationWithDegeneracy) {
  random::Rng rng(11);
  const CMatrix u = random::haar_unitary(4, rng);
  const double a[] = {1.0, 1.0, 2.0, 2.0};
  const double b[] = {5.0, 6.0, 5.0, 6.0};
  const CMatrix family[] = {u * CMatrix::diagonal(a) * u.adjoint(), u * CMatrix::diagonal(b) * u.adjoint()};
  const SimultaneousDiagonalization sd = simultaneous_diagonalize(family);
  ASSERT_TRUE(sd);
  for (const CMatrix& m : family) {
    const CMatrix d = sd.basis->adjoint() * m * *sd.basis;
    double off = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        if (i != j) off += std::norm(d(i, j));
    EXPECT_LT(std::sqrt(off), 1e-10);
  }
}

TEST(Linalg, SchmidtDecomposition) {
  const auto c = schmidt_coefficients(bell_ket(), 2, 2);
  ASSERT_GE(c.size(), 2u);
  EXPECT_NEAR(c[0], kS, 1e-14);
  EXPECT_NEAR(c[1], kS, 1e-14);
  EXPECT_EQ(schmidt_rank(bell_ket(), 2, 2), 2u);
  EXPECT_EQ(schmidt_rank(tensor(CMatrix::basis_ket(2, 0), CMatrix::basis_ket(3, 2)), 2, 3), 1u);
}

TEST(Linalg, HaarUnitaryIsUnitary) {
  random::Rng rng(5);
  for (std::size_t d : {1u, 2u, 4u, 7u}) EXPECT_TRUE(is_unitary(random::haar_unitary(d, rng), 1e-12));
}

TEST(Linalg, ShapeErrors) {
  EXPECT_THROW(CMatrix(2, 2, std::vector<Complex>(3)), Error);
  EXPECT_THROW((void)(CMatrix(2, 3) * CMatrix(2, 3)), DimensionMismatch);
}

TEST(Stochastic, ValidatesColumns) {
  EXPECT_NO_THROW(StochasticMatrix(RealMatrix{{0.5, 1.0}, {0.5, 0.0}}));
  EXPECT_THROW(StochasticMatrix(RealMatrix{{0.5, 1.0}, {0.6, 0.0}}), InvariantViolation);
  EXPECT_THROW(StochasticMatrix(RealMatrix{{1.5, 1.0}, {-0.5, 0.0}}), InvariantViolation);
  EXPECT_THROW(StochasticMatrix(RealMatrix(2, 3)), Error);
}

TEST(Stochastic, RowOrientationIsTransposed) {
  const StochasticMatrix p = StochasticMatrix::from_row_stochastic(RealMatrix{{0.25, 0.75}, {1.0, 0.0}});
  EXPECT_DOUBLE_EQ(p(1, 0), 0.75);
  EXPECT_DOUBLE_EQ(p(0, 1), 1.0);
}

TEST(Stochastic, DoublyStochasticAndKron) {
  const StochasticMatrix p(RealMatrix{{0.25, 0.75}, {0.75, 0.25}});
  EXPECT_TRUE(p.doubly_stochastic());
  EXPECT_FALSE(StochasticMatrix(RealMatrix{{0.5, 1.0}, {0.5, 0.0}}).doubly_stochastic());
  const RealMatrix k = kron(p.matrix(), RealMatrix::identity(3));
  EXPECT_EQ(k.rows(), 6u);
  EXPECT_DOUBLE_EQ(k(3, 0), 0.75);
  EXPECT_NO_THROW(StochasticMatrix{k});
}

TEST(Random, DeterministicAndValid) {
  random::Rng r1(42);
  random::Rng r2(42);
  EXPECT_EQ(random::density_matrix(3, r1).entries()[4], random::density_matrix(3, r2).entries()[4]);
  random::Rng rng(1);
  const CMatrix rho = random::density_matrix(4, rng, 2);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
  const auto es = hermitian_eig(rho);
  EXPECT_GT(es.values.back(), -1e-12);
  EXPECT_LT(es.values[2], 1e-10);
  const auto povm = random::povm(3, 4, rng);
  CMatrix sum(3, 3);
  for (const auto& e : povm) sum += e;
  EXPECT_LT(frobenius_distance(sum, CMatrix::identity(3)), 1e-12);
  const auto w = random::dirichlet(5, 1.0, rng);
  double total = 0.0;
  for (double x : w) total += x;
  EXPECT_NEAR(total, 1.0, 1e-14);
  EXPECT_NO_THROW(random::stochastic_matrix(5, 0.3, rng));
}

}  // namespace
}  // namespace qcorr
