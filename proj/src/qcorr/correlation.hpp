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

// Classical structure of bipartite states and of channels acting on one half
// of a bipartite system.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/channel.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/measurement_map.hpp"
#include "qcorr/stochastic.hpp"

namespace qcorr {

/// rho = sum_k p_k sigma_k (x) |e_k><e_k| with {e_k} on the classical side.
struct ClassicalSide {
  std::optional<CMatrix> basis;  // columns e_k on the classical factor
  std::vector<double> probabilities;
  /// Normalized conditional states on the other factor; empty when p_k is
  /// below 1e-12.
  std::vector<std::optional<CMatrix>> states;
  double witness = 0.0;               // largest commutator in the block family
  double reconstruction_error = 0.0;  // Frobenius, when a basis was found
  explicit operator bool() const noexcept { return basis.has_value(); }
};

/// Forms the blocks <i|_other rho |j>_other, which act on the side factor,
/// and tests whether they commute. Throws DimensionMismatch unless rho is
/// bipartite.
ClassicalSide classical_side_basis(const QuantumState& rho, Side side, double tol = kDefaultTol);

enum class StateClass { kCC, kCQOnly, kQCOnly, kNeither };
std::string to_string(StateClass c);

struct StateClassification {
  StateClass label = StateClass::kNeither;
  ClassicalSide side_a;
  ClassicalSide side_b;
};

StateClassification classify_state(const QuantumState& rho, double tol = kDefaultTol);

struct QCExtraction {
  std::optional<MeasurementMap> map;
  double witness = 0.0;               // classical-side commutator witness
  double reconstruction_error = 0.0;  // ||choi_of(map) - W||_F
  explicit operator bool() const noexcept { return map.has_value(); }
};

/// E_k = d_in sigma~_k^T with sigma~_k = <e_k|_out W |e_k>_out, when W is
/// classical on the output factor. Keeps one outcome per pointer vector,
/// including outcomes with E_k = 0.
QCExtraction qc_type_extract(const ChoiChannel& ch, double tol = kDefaultTol);

struct CCChannelData {
  MeasurementMap measurement;
  /// p_ij = <e~_i f_j| W |e~_i f_j>, input index i, outcome index j.
  RealMatrix joint;
  /// P(j, i) = d_in p_ij; column-stochastic, outcomes x inputs.
  RealMatrix conditional;
  /// conditional as a StochasticMatrix when the map is square.
  std::optional<StochasticMatrix> transition;
  /// Common eigenbasis of the POVM: E_j = sum_i P(j, i) |b_i><b_i|.
  CMatrix eigenbasis;
};

struct CCExtraction {
  std::optional<CCChannelData> data;
  double witness = 0.0;  // largest POVM commutator, or the QC witness
  explicit operator bool() const noexcept { return data.has_value(); }
};

CCExtraction cc_type_extract(const ChoiChannel& ch, double tol = kDefaultTol);

struct ResidualDecomposition {
  std::vector<double> probabilities;
  /// Conditional A states; empty for outcomes of probability <= 1e-12.
  std::vector<std::optional<CMatrix>> states;
  CMatrix pointer_basis;
  /// sum_k p_k rho_k (x) |e_k><e_k|.
  CMatrix reconstruct() const;
};

/// p_k = Tr(rho (1 (x) E_k)), rho_k = Tr_B(rho (1 (x) E_k)) / p_k.
ResidualDecomposition residual_decomposition(const MeasurementMap& mm, const QuantumState& rho_ab);

struct Membership {
  bool member = false;
  double witness = 0.0;
};

/// Output (1 (x) L)(rho) is CC iff the non-null residual states commute.
Membership in_cc_set(const MeasurementMap& mm, const QuantumState& rho_ab,
                     double tol = kDefaultTol);

/// lambda rho + (1 - lambda) I / d. Throws InvalidArgument for lambda
/// outside [0, 1].
QuantumState star_mix(const QuantumState& rho, double lambda);

/// sum_i c_i |a_i> (x) |b_i> with a_i, b_i the columns of the given bases.
/// Throws InvalidArgument unless c is non-negative with unit 2-norm.
QuantumState schmidt_state(const std::vector<double>& c, const CMatrix& basis_a,
                           const CMatrix& basis_b);

struct MultipartiteReport {
  ClassicalSide joint;        // classical on the B B' factor
  ClassicalSide reduction_b;  // Tr_B' rho classical on B
  ClassicalSide reduction_bp; // Tr_B rho classical on B'
  /// Reduction equals the product of its marginals within tol.
  bool reduction_b_product = false;
  bool reduction_bp_product = false;
  /// Schmidt rank (B | B') of each joint pointer vector.
  std::vector<std::size_t> joint_schmidt_ranks;
  bool joint_basis_product = false;
  /// Reductions classical while the joint pointer basis is entangled.
  bool nonproduct_joint_basis = false;
};

/// rho over dims (d_A, d_B, d_B'). Throws DimensionMismatch otherwise.
MultipartiteReport multipartite_qc_check(const QuantumState& rho, double tol = kDefaultTol);

}  // namespace qcorr
