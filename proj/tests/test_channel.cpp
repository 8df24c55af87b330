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

#include "qcorr/channel.hpp"
#include "qcorr/error.hpp"
#include "qcorr/fixtures.hpp"
#include "qcorr/markov.hpp"
#include "qcorr/random.hpp"

namespace qcorr {
namespace {

TEST(QuantumState, RejectsInvalidMatrices) {
  EXPECT_THROW(QuantumState(CMatrix{{1.0, 0.5}, {0.0, 0.0}}), InvariantViolation);
  EXPECT_THROW(QuantumState(CMatrix{{1.5, 0.0}, {0.0, -0.5}}), InvariantViolation);
  EXPECT_THROW(QuantumState(CMatrix{{0.5, 0.0}, {0.0, 0.25}}), InvariantViolation);
  EXPECT_THROW(QuantumState(CMatrix::identity(4) * Complex(0.25), {2, 3}), DimensionMismatch);
  EXPECT_THROW(QuantumState(CMatrix(2, 3)), Error);
  EXPECT_NO_THROW(QuantumState(CMatrix::identity(4) * Complex(0.25), {2, 2}));
}

TEST(QuantumState, MaximallyEntangled) {
  const QuantumState p = maximally_entangled(2);
  EXPECT_EQ(p.dims(), (std::vector<std::size_t>{2, 2}));
  EXPECT_DOUBLE_EQ(p.matrix()(0, 0).real(), 0.5);
  EXPECT_DOUBLE_EQ(p.matrix()(0, 3).real(), 0.5);
  EXPECT_DOUBLE_EQ(p.matrix()(3, 3).real(), 0.5);
  EXPECT_DOUBLE_EQ(p.matrix()(1, 1).real(), 0.0);
  EXPECT_THROW(maximally_entangled(1), InvalidArgument);
}

TEST(ChoiChannel, IdentityAndDepolarizing) {
  random::Rng rng(9);
  const QuantumState rho(random::density_matrix(2, rng));
  EXPECT_LT(frobenius_distance(fixtures::identity_channel(2).apply(rho).matrix(), rho.matrix()), 1e-14);
  EXPECT_LT(frobenius_distance(fixtures::depolarizing_channel(2).apply(rho).matrix(),
                               CMatrix::identity(2) * Complex(0.5)),
            1e-14);
}

TEST(ChoiChannel, RejectsNonTracePreserving) {
  CMatrix w(4, 4);
  w(0, 0) = 1.0;
  EXPECT_THROW(ChoiChannel(w, 2, 2), InvariantViolation);
  EXPECT_THROW(ChoiChannel(CMatrix::identity(4) * Complex(0.25), 2, 3), DimensionMismatch);
}

TEST(ChoiChannel, ChoiOfVonNeumannMap) {
  const ChoiChannel ch = choi_of(fixtures::von_neumann_map(2));
  CMatrix expected(4, 4);
  expected(0, 0) = 0.5;
  expected(3, 3) = 0.5;
  EXPECT_LT(frobenius_distance(ch.choi().matrix(), expected), 1e-15);
}

TEST(ChoiChannel, OneSidedOnMaximallyEntangledIsChoi) {
  random::Rng rng(4);
  const MeasurementMap mm(random::povm(3, 3, rng), random::haar_unitary(3, rng));
  const ChoiChannel ch = choi_of(mm);
  const QuantumState out = apply_one_sided(ch, maximally_entangled(3), Side::kB);
  EXPECT_LT(frobenius_distance(out.matrix(), ch.choi().matrix()), 1e-12);
}

TEST(ChoiChannel, ApplyMatchesMeasurementMap) {
  random::Rng rng(12);
  const MeasurementMap mm(random::povm(2, 3, rng), random::haar_unitary(3, rng));
  const ChoiChannel ch = choi_of(mm);
  const QuantumState rho(random::density_matrix(2, rng));
  EXPECT_LT(frobenius_distance(ch.apply(rho).matrix(), mm.apply(rho.matrix())), 1e-12);
}

TEST(Kraus, RoundTrip) {
  random::Rng rng(2);
  const MeasurementMap mm(random::povm(2, 2, rng), random::haar_unitary(2, rng));
  const ChoiChannel ch = choi_of(mm);
  const KrausSet k = kraus_from_choi(ch);
  EXPECT_LE(k.operators().size(), 4u);
  EXPECT_LT(frobenius_distance(from_kraus(k).choi().matrix(), ch.choi().matrix()), 1e-12);
  EXPECT_EQ(kraus_from_choi(fixtures::identity_channel(3)).operators().size(), 1u);
  EXPECT_THROW(KrausSet({CMatrix::identity(2) * Complex(2.0)}), InvariantViolation);
}

TEST(Compose, IdentityIsNeutral) {
  const ChoiChannel dep = fixtures::depolarizing_channel(2);
  EXPECT_LT(frobenius_distance(compose(fixtures::identity_channel(2), dep).choi().matrix(), dep.choi().matrix()),
            1e-14);
}

TEST(PowerMap, TransitionIsMatrixPower) {
  const StochasticMatrix p(fixtures::p1_printed());
  const MeasurementMap mm = fixtures::computational_map(p);
  const MeasurementMap m3 = power_map(mm, 3);
  const StochasticMatrix t = markov::transition_matrix(m3.povm(), CMatrix::identity(3));
  const RealMatrix p3 = markov::matrix_power(p.matrix(), 3);
  EXPECT_LT((t.matrix() - p3).max_abs(), 1e-14);
  const ChoiChannel c1 = choi_of(mm);
  EXPECT_LT(frobenius_distance(channel_power(mm, 2).choi().matrix(), compose(c1, c1).choi().matrix()), 1e-13);
  EXPECT_THROW(power_map(mm, 0), InvalidArgument);
  EXPECT_THROW(power_map(fixtures::trine_map(), 2), InvalidArgument);
}

}  // namespace
}  // namespace qcorr
