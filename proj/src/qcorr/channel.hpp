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

// States, Choi states of channels and Kraus sets. The Choi state of a
// channel L: M_{d_in} -> M_{d_out} is W = (1 (x) L)(P_+), trace one, with the
// input factor first.

#pragma once

#include <cstddef>
#include <vector>

#include "qcorr/linalg.hpp"
#include "qcorr/measurement_map.hpp"

namespace qcorr {

class QuantumState {
 public:
  /// dims defaults to {rows}. Throws DimensionMismatch when the dims do not
  /// multiply out, InvariantViolation when the matrix is not Hermitian, has
  /// an eigenvalue below -tol or a trace away from one by more than tol.
  explicit QuantumState(CMatrix matrix, std::vector<std::size_t> dims = {}, double tol = 1e-10);

  const CMatrix& matrix() const noexcept { return m_; }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return m_.rows(); }
  bool bipartite() const noexcept { return dims_.size() == 2; }

  /// Same matrix, new factorization.
  QuantumState with_dims(std::vector<std::size_t> dims) const;

 private:
  CMatrix m_;
  std::vector<std::size_t> dims_;
};

/// (1/d) sum_ij |ii><jj| over dims (d, d). Throws InvalidArgument for d < 2.
QuantumState maximally_entangled(std::size_t d);
/// I/d.
QuantumState maximally_mixed(std::size_t d);
/// |v><v| for a unit column vector.
QuantumState pure_state(const CMatrix& ket, std::vector<std::size_t> dims = {});

enum class Side { kA, kB };

class KrausSet {
 public:
  /// Throws InvariantViolation unless sum K^dagger K = 1 within tol.
  explicit KrausSet(std::vector<CMatrix> operators, double tol = 1e-9);

  const std::vector<CMatrix>& operators() const noexcept { return ops_; }
  std::size_t d_in() const noexcept { return ops_.front().cols(); }
  std::size_t d_out() const noexcept { return ops_.front().rows(); }
  CMatrix apply(const CMatrix& rho) const;

 private:
  std::vector<CMatrix> ops_;
};

class ChoiChannel {
 public:
  /// Throws DimensionMismatch when choi is not (d_in d_out)-dimensional and
  /// InvariantViolation when it is not a state or Tr_out W != I/d_in within
  /// tol.
  ChoiChannel(const CMatrix& choi, std::size_t d_in, std::size_t d_out, double tol = 1e-9);

  std::size_t d_in() const noexcept { return d_in_; }
  std::size_t d_out() const noexcept { return d_out_; }
  const QuantumState& choi() const noexcept { return choi_; }

  /// L(A) = d_in Tr_in[W (A^T (x) 1)] for an arbitrary operator A.
  CMatrix apply_operator(const CMatrix& a) const;
  QuantumState apply(const QuantumState& rho) const;

 private:
  QuantumState choi_;
  std::size_t d_in_;
  std::size_t d_out_;
};

/// (1 (x) L) for side B, (L (x) 1) for side A. The state must be bipartite
/// with the selected factor of dimension d_in.
QuantumState apply_one_sided(const ChoiChannel& ch, const QuantumState& rho_ab, Side side);

/// K_k(o, i) = sqrt(d_in lambda_k) w_k(i d_out + o) over eigenpairs of W with
/// lambda_k > 1e-12.
KrausSet kraus_from_choi(const ChoiChannel& ch);
ChoiChannel from_kraus(const KrausSet& kraus);
/// second o first, through Kraus products.
ChoiChannel compose(const ChoiChannel& second, const ChoiChannel& first);

/// W = (1/d_in) sum_i E_i^T (x) |e_i><e_i|.
ChoiChannel choi_of(const MeasurementMap& mm);

/// Measurement map of L^r: the same pointer basis and the POVM
/// E'_i = sum_j (P(e)^(r-1))_ij E_j. Requires a square map and r >= 1.
MeasurementMap power_map(const MeasurementMap& mm, std::size_t r);
ChoiChannel channel_power(const MeasurementMap& mm, std::size_t r);

}  // namespace qcorr
