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

// Built-in fixture corpus. "printed" matrices are kept verbatim even where
// they violate the properties ascribed to them; "repaired" matrices are the
// nearest variants that do have them.

#pragma once

#include <vector>

#include "qcorr/channel.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/measurement_map.hpp"
#include "qcorr/stochastic.hpp"

namespace qcorr::fixtures {

RealMatrix p1_printed();
/// (1/3, 1/6, 1/2).
std::vector<double> p1_printed_perron();
/// Third column sums to 9/8.
RealMatrix p2_printed();
/// [[1/8,3/8,1/2],[3/8,1/8,1/2],[1/2,1/2,0]].
StochasticMatrix p2_repaired();
/// P1 (+) P2', 6 x 6.
StochasticMatrix p1_p2_sum();

/// Printed as reducible; both are irreducible.
RealMatrix pa_printed();
RealMatrix pb_printed();
StochasticMatrix pa_repaired();
StochasticMatrix pb_repaired();
/// Stationary vectors stated for the pair: {diag[0,1/2,1/2], [1,0,0]}.
std::vector<std::vector<double>> pa_stated_vectors();
/// {diag[1/2,0,1/2], [0,1,0]}.
std::vector<std::vector<double>> pb_stated_vectors();

StochasticMatrix cyclic_shift(std::size_t d);

/// E_i = sum_j P(i, j) |j><j|, pointer basis computational.
MeasurementMap computational_map(const StochasticMatrix& p);
MeasurementMap von_neumann_map(std::size_t d);
/// E_i = I / d.
MeasurementMap uniform_map(std::size_t d);
/// Qubit trine {(2/3)|psi_k><psi_k|} written into C^3.
MeasurementMap trine_map();

ChoiChannel identity_channel(std::size_t d);
ChoiChannel depolarizing_channel(std::size_t d);

/// (2/3) psi_+ + (1/3) |+0><+0|: residuals (|0><0| + |+><+|)/2 and |1><1|
/// with weights (2/3, 1/3) under the computational von Neumann map.
QuantumState cq_counterexample_state();
/// (1/2) psi_+ + (1/2) |+0><+0|.
QuantumState cq_unbiased_state();
/// Residual states and weights as printed for the counterexample.
std::vector<CMatrix> cq_printed_residuals();
std::vector<double> cq_printed_weights();

/// Input for which computational_map(p2_repaired()) yields a QC output
/// that is not CC: (|0>|0> + |+>|1> + |1>|2>) / sqrt(3). Witness 3 sqrt(2) / 16.
QuantumState cc_nonclosure_input();
inline constexpr double kCcNonclosureWitness = 0.26516504294495535;

/// Columns (|00>+|11>, |00>-|11>, |01>+|10>, |01>-|10>) / sqrt(2).
CMatrix bell_basis();
/// sum_a p_a sigma_a (x) |b_a><b_a| over dims (2, 2, 2) with
/// p = (0.4, 0.3, 0.2, 0.1), sigma = |0>, |1>, |+>, |+i>.
QuantumState bell_multipartite_state();

}  // namespace qcorr::fixtures
