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

#include "qcorr/correlation.hpp"
#include "qcorr/error.hpp"
#include "qcorr/fixtures.hpp"
#include "qcorr/random.hpp"

namespace qcorr {
namespace {

const double kS = 1.0 / std::numbers::sqrt2;

CMatrix ket(Complex a, Complex b) {
  const Complex v[] = {a, b};
  return CMatrix::ket(v);
}

TEST(ClassifyState, Labels) {
  const CMatrix z0 = outer(ket(1.0, 0.0));
  const CMatrix z1 = outer(ket(0.0, 1.0));
  const CMatrix plus = outer(ket(kS, kS));
  EXPECT_EQ(classify_state(QuantumState(tensor(z0, z1), {2, 2})).label, StateClass::kCC);
  EXPECT_EQ(classify_state(maximally_entangled(2)).label, StateClass::kNeither);
  // classical on A only
  const CMatrix cq = (tensor(z0, z0) + tensor(z1, plus)) * Complex(0.5);
  EXPECT_EQ(classify_state(QuantumState(cq, {2, 2})).label, StateClass::kCQOnly);
  // classical on B only
  const CMatrix qc = (tensor(z0, z0) + tensor(plus, z1)) * Complex(0.5);
  const StateClassification c = classify_state(QuantumState(qc, {2, 2}));
  EXPECT_EQ(c.label, StateClass::kQCOnly);
  ASSERT_TRUE(c.side_b);
  EXPECT_NEAR(c.side_b.probabilities[0] + c.side_b.probabilities[1], 1.0, 1e-12);
  EXPECT_LT(c.side_b.reconstruction_error, 1e-12);
  EXPECT_EQ(to_string(StateClass::kQCOnly), "QC-only");
  EXPECT_THROW(classify_state(QuantumState(CMatrix::identity(4) * Complex(0.25))), DimensionMismatch);
}

TEST(QCExtraction, TrineRecoversPovm) {
  const MeasurementMap trine = fixtures::trine_map();
  const QCExtraction qc = qc_type_extract(choi_of(trine));
  ASSERT_TRUE(qc);
  EXPECT_LT(qc.reconstruction_error, 1e-12);
  ASSERT_EQ(qc.map->outcomes(), 3u);
  // Reconstructed channel agrees on random inputs.
  random::Rng rng(8);
  for (int k = 0; k < 5; ++k) {
    const CMatrix rho = random::density_matrix(2, rng);
    EXPECT_LT(frobenius_distance(qc.map->apply(rho), trine.apply(rho)), 1e-12);
  }
  EXPECT_FALSE(cc_type_extract(choi_of(trine)));
}

TEST(QCExtraction, IdentityIsNeither) {
  const QCExtraction qc = qc_type_extract(fixtures::identity_channel(2));
  EXPECT_FALSE(qc);
  EXPECT_GT(qc.witness, 0.1);
}

TEST(CCExtraction, VonNeumannGivesIdentityTransition) {
  const CCExtraction cc = cc_type_extract(choi_of(fixtures::von_neumann_map(3)));
  ASSERT_TRUE(cc);
  ASSERT_TRUE(cc.data->transition);
  EXPECT_LT((cc.data->transition->matrix() - RealMatrix::identity(3)).max_abs(), 1e-12);
}

TEST(CCExtraction, ComputationalMapReproducesPovm) {
  const MeasurementMap mm = fixtures::computational_map(fixtures::p2_repaired());
  const CCExtraction cc = cc_type_extract(choi_of(mm));
  ASSERT_TRUE(cc);
  const CMatrix& b = cc.data->eigenbasis;
  for (std::size_t j = 0; j < 3; ++j) {
    CMatrix e(3, 3);
    for (std::size_t i = 0; i < 3; ++i) e += outer(b.column(i)) * Complex(cc.data->conditional(j, i));
    EXPECT_LT(frobenius_distance(e, cc.data->measurement.element(j)), 1e-12);
  }
  double total = 0.0;
  for (double x : cc.data->joint.entries()) total += x;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Residuals, CounterexampleDecomposition) {
  const ResidualDecomposition r =
      residual_decomposition(fixtures::von_neumann_map(2), fixtures::cq_counterexample_state());
  EXPECT_NEAR(r.probabilities[0], 2.0 / 3.0, 1e-14);
  EXPECT_NEAR(r.probabilities[1], 1.0 / 3.0, 1e-14);
  const auto printed = fixtures::cq_printed_residuals();
  EXPECT_LT(frobenius_distance(*r.states[0], printed[0]), 1e-14);
  EXPECT_LT(frobenius_distance(*r.states[1], printed[1]), 1e-14);
  EXPECT_NEAR(commutator_norm(*r.states[0], *r.states[1]), std::numbers::sqrt2 / 4.0, 1e-14);
}

TEST(Residuals, UnbiasedMixtureWeights) {
  const ResidualDecomposition r = residual_decomposition(fixtures::von_neumann_map(2), fixtures::cq_unbiased_state());
  EXPECT_NEAR(r.probabilities[0], 0.75, 1e-14);
  EXPECT_NEAR(r.probabilities[1], 0.25, 1e-14);
}

TEST(InCCSet, NonClosureWitness) {
  const MeasurementMap mm = fixtures::computational_map(fixtures::p2_repaired());
  const Membership m = in_cc_set(mm, fixtures::cc_nonclosure_input());
  EXPECT_FALSE(m.member);
  EXPECT_NEAR(m.witness, fixtures::kCcNonclosureWitness, 1e-10);
  EXPECT_NEAR(m.witness, 3.0 * std::numbers::sqrt2 / 16.0, 1e-15);
}

TEST(InCCSet, ProductInputStaysCC) {
  random::Rng rng(21);
  const MeasurementMap mm = fixtures::computational_map(fixtures::p2_repaired());
  const QuantumState rho(tensor(random::density_matrix(2, rng), random::density_matrix(3, rng)), {2, 3});
  EXPECT_TRUE(in_cc_set(mm, rho).member);
}

TEST(StarMix, Endpoints) {
  const QuantumState p = maximally_entangled(2);
  EXPECT_LT(frobenius_distance(star_mix(p, 0.0).matrix(), CMatrix::identity(4) * Complex(0.25)), 1e-15);
  EXPECT_LT(frobenius_distance(star_mix(p, 1.0).matrix(), p.matrix()), 1e-15);
  EXPECT_THROW(star_mix(p, 1.5), InvalidArgument);
}

TEST(SchmidtState, Construction) {
  random::Rng rng(6);
  const CMatrix ua = random::haar_unitary(2, rng);
  const CMatrix ub = random::haar_unitary(3, rng);
  const QuantumState s = schmidt_state({0.8, 0.6}, ua, ub);
  EXPECT_EQ(s.dims(), (std::vector<std::size_t>{2, 3}));
  EXPECT_NEAR(s.matrix().trace().real(), 1.0, 1e-14);
  EXPECT_THROW(schmidt_state({0.5, 0.5}, ua, ub), InvalidArgument);
  EXPECT_THROW(schmidt_state({1.2, -0.6}, ua, ub), InvalidArgument);
}

TEST(Multipartite, BellFixture) {
  const MultipartiteReport r = multipartite_qc_check(fixtures::bell_multipartite_state());
  EXPECT_TRUE(r.joint);
  EXPECT_TRUE(r.reduction_b_product);
  EXPECT_TRUE(r.reduction_bp_product);
  EXPECT_EQ(r.joint_schmidt_ranks, (std::vector<std::size_t>{2, 2, 2, 2}));
  EXPECT_FALSE(r.joint_basis_product);
  EXPECT_TRUE(r.nonproduct_joint_basis);
  EXPECT_THROW(multipartite_qc_check(maximally_entangled(2)), DimensionMismatch);
}

}  // namespace
}  // namespace qcorr
