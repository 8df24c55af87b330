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

#include "qcorr/fixtures.hpp"

#include <cmath>
#include <numbers>

#include "qcorr/error.hpp"

namespace qcorr::fixtures {

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

CMatrix ket2(Complex a, Complex b) {
  const Complex v[] = {a, b};
  return CMatrix::ket(v);
}

}  // namespace

RealMatrix p1_printed() {
  return {{0.0, 0.5, 0.5}, {0.5, 0.5, 0.5}, {0.5, 0.0, 0.0}};
}

std::vector<double> p1_printed_perron() { return {1.0 / 3.0, 1.0 / 6.0, 1.0 / 2.0}; }

RealMatrix p2_printed() {
  return {{1.0 / 8, 3.0 / 8, 1.0 / 2}, {3.0 / 8, 0.0, 5.0 / 8}, {1.0 / 2, 5.0 / 8, 0.0}};
}

StochasticMatrix p2_repaired() {
  return StochasticMatrix(
      RealMatrix{{1.0 / 8, 3.0 / 8, 1.0 / 2}, {3.0 / 8, 1.0 / 8, 1.0 / 2}, {1.0 / 2, 1.0 / 2, 0.0}});
}

StochasticMatrix p1_p2_sum() {
  const RealMatrix a = p1_printed();
  const RealMatrix b = p2_repaired().matrix();
  RealMatrix m(6, 6);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      m(i, j) = a(i, j);
      m(i + 3, j + 3) = b(i, j);
    }
  }
  return StochasticMatrix(std::move(m));
}

RealMatrix pa_printed() { return {{0.0, 0.5, 0.5}, {0.0, 0.5, 0.5}, {1.0, 0.0, 0.0}}; }

RealMatrix pb_printed() {
  return {{2.0 / 3, 0.0, 1.0 / 3}, {1.0 / 3, 0.0, 2.0 / 3}, {0.0, 1.0, 0.0}};
}

StochasticMatrix pa_repaired() {
  return StochasticMatrix(RealMatrix{{1.0, 0.0, 0.0}, {0.0, 0.5, 0.5}, {0.0, 0.5, 0.5}});
}

StochasticMatrix pb_repaired() {
  return StochasticMatrix(RealMatrix{{0.5, 0.0, 0.5}, {0.0, 1.0, 0.0}, {0.5, 0.0, 0.5}});
}

std::vector<std::vector<double>> pa_stated_vectors() { return {{0.0, 0.5, 0.5}, {1.0, 0.0, 0.0}}; }

std::vector<std::vector<double>> pb_stated_vectors() { return {{0.5, 0.0, 0.5}, {0.0, 1.0, 0.0}}; }

StochasticMatrix cyclic_shift(std::size_t d) {
  RealMatrix m(d, d);
  for (std::size_t j = 0; j < d; ++j) m((j + 1) % d, j) = 1.0;
  return StochasticMatrix(std::move(m));
}

MeasurementMap computational_map(const StochasticMatrix& p) {
  return MeasurementMap::from_stochastic(p);
}

MeasurementMap von_neumann_map(std::size_t d) {
  return computational_map(StochasticMatrix(RealMatrix::identity(d)));
}

MeasurementMap uniform_map(std::size_t d) {
  std::vector<CMatrix> povm(d, CMatrix::identity(d) * Complex(1.0 / static_cast<double>(d)));
  return MeasurementMap(std::move(povm), CMatrix::identity(d));
}

MeasurementMap trine_map() {
  std::vector<CMatrix> povm;
  for (int k = 0; k < 3; ++k) {
    const double t = 2.0 * std::numbers::pi * k / 3.0;
    povm.push_back(outer(ket2(std::cos(t), std::sin(t))) * Complex(2.0 / 3.0));
  }
  return MeasurementMap(std::move(povm), CMatrix::identity(3));
}

ChoiChannel identity_channel(std::size_t d) {
  return ChoiChannel(maximally_entangled(d).matrix(), d, d);
}

ChoiChannel depolarizing_channel(std::size_t d) {
  const double dd = static_cast<double>(d * d);
  return ChoiChannel(CMatrix::identity(d * d) * Complex(1.0 / dd), d, d);
}

namespace {

QuantumState mixture_with_plus_zero(double weight_psi) {
  const CMatrix plus_zero = tensor(ket2(kInvSqrt2, kInvSqrt2), ket2(1.0, 0.0));
  CMatrix m = maximally_entangled(2).matrix() * Complex(weight_psi) +
              outer(plus_zero) * Complex(1.0 - weight_psi);
  return QuantumState(std::move(m), {2, 2});
}

}  // namespace

QuantumState cq_counterexample_state() { return mixture_with_plus_zero(2.0 / 3.0); }

QuantumState cq_unbiased_state() { return mixture_with_plus_zero(0.5); }

std::vector<CMatrix> cq_printed_residuals() {
  const CMatrix r0 = (outer(ket2(kInvSqrt2, kInvSqrt2)) + outer(ket2(1.0, 0.0))) * Complex(0.5);
  return {r0, outer(ket2(0.0, 1.0))};
}

std::vector<double> cq_printed_weights() { return {0.5, 0.5}; }

QuantumState cc_nonclosure_input() {
  const CMatrix a[] = {ket2(1.0, 0.0), ket2(kInvSqrt2, kInvSqrt2), ket2(0.0, 1.0)};
  CMatrix psi(6, 1);
  for (std::size_t i = 0; i < 3; ++i) psi += tensor(a[i], CMatrix::basis_ket(3, i));
  psi *= Complex(1.0 / std::sqrt(3.0));
  return QuantumState(outer(psi), {2, 3});
}

CMatrix bell_basis() {
  const double s = kInvSqrt2;
  return CMatrix{{s, s, 0.0, 0.0}, {0.0, 0.0, s, s}, {0.0, 0.0, s, -s}, {s, -s, 0.0, 0.0}};
}

QuantumState bell_multipartite_state() {
  const double p[] = {0.4, 0.3, 0.2, 0.1};
  const CMatrix sigma[] = {ket2(1.0, 0.0), ket2(0.0, 1.0), ket2(kInvSqrt2, kInvSqrt2),
                           ket2(kInvSqrt2, Complex(0.0, kInvSqrt2))};
  const CMatrix b = bell_basis();
  CMatrix m(8, 8);
  for (std::size_t a = 0; a < 4; ++a) m += tensor(outer(sigma[a]), outer(b.column(a))) * Complex(p[a]);
  return QuantumState(std::move(m), {2, 2, 2});
}

}  // namespace qcorr::fixtures
