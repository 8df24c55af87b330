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

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qcorr/linalg.hpp"
#include "qcorr/stochastic.hpp"

namespace qcorr {

/// Quantum-to-classical measurement map
///
///   rho -> sum_i Tr(rho E_i) |e_i><e_i|
///
/// with a POVM {E_i} on the input space and an orthonormal pointer basis
/// {e_i} of the output space. There is exactly one outcome per pointer vector;
/// unused pointer vectors carry a zero POVM element.
class MeasurementMap {
 public:
  /// Throws InvariantViolation if an element is not PSD (1e-10), the
  /// elements do not sum to the identity (tol), the pointer basis is not
  /// unitary (1e-10) or the outcome count differs from the pointer basis size.
  MeasurementMap(std::vector<CMatrix> povm, CMatrix pointer_basis, double tol = 1e-9);

  /// E_i = sum_j P(i, j) |phi_j><phi_j|, so that the transition matrix of the
  /// map in the basis phi is P itself. The pointer basis defaults to phi.
  static MeasurementMap from_stochastic(const StochasticMatrix& p,
                                        const CMatrix& measurement_basis,
                                        std::optional<CMatrix> pointer_basis = {});
  /// from_stochastic in the computational basis.
  static MeasurementMap from_stochastic(const StochasticMatrix& p);

  std::size_t d_in() const noexcept { return povm_.front().rows(); }
  std::size_t d_out() const noexcept { return pointer_.rows(); }
  std::size_t outcomes() const noexcept { return povm_.size(); }
  bool square() const noexcept { return d_in() == d_out(); }

  const std::vector<CMatrix>& povm() const noexcept { return povm_; }
  const CMatrix& element(std::size_t i) const { return povm_.at(i); }
  const CMatrix& pointer_basis() const noexcept { return pointer_; }
  CMatrix pointer(std::size_t i) const { return pointer_.column(i); }
  /// p_i = Tr(E_i) / d_in; the mixing weights of the Choi state.
  std::vector<double> weights() const;

  /// Born probabilities Tr(rho E_i).
  std::vector<double> probabilities(const CMatrix& rho) const;
  CMatrix apply(const CMatrix& rho) const;

 private:
  std::vector<CMatrix> povm_;
  CMatrix pointer_;
};

/// Largest Frobenius distance of sum_i E_i from the identity, and the
/// smallest eigenvalue among the elements. Used by validators that report
/// instead of throwing.
struct PovmDiagnostics {
  double completeness_error = 0.0;
  double min_eigenvalue = 0.0;
};
PovmDiagnostics diagnose_povm(const std::vector<CMatrix>& povm);

}  // namespace qcorr
