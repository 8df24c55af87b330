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

#include "qcorr/measurement_map.hpp"

#include <algorithm>
#include <sstream>

#include "qcorr/error.hpp"

namespace qcorr {

PovmDiagnostics diagnose_povm(const std::vector<CMatrix>& povm) {
  PovmDiagnostics diag;
  if (povm.empty()) throw InvalidArgument("POVM has no elements");
  const std::size_t d = povm.front().rows();
  CMatrix total(d, d);
  diag.min_eigenvalue = 1.0;
  for (const auto& e : povm) {
    if (!e.square() || e.rows() != d) throw DimensionMismatch("POVM elements differ in shape");
    total += e;
    const auto es = hermitian_eig(e);
    diag.min_eigenvalue = std::min(diag.min_eigenvalue, es.values.back());
  }
  diag.completeness_error = frobenius_distance(total, CMatrix::identity(d));
  return diag;
}

MeasurementMap::MeasurementMap(std::vector<CMatrix> povm, CMatrix pointer_basis, double tol)
    : povm_(std::move(povm)), pointer_(std::move(pointer_basis)) {
  if (povm_.empty()) throw InvariantViolation("measurement map needs at least one outcome");
  if (!is_unitary(pointer_, 1e-10)) {
    throw InvariantViolation("pointer basis is not orthonormal");
  }
  if (povm_.size() != pointer_.cols()) {
    throw InvariantViolation("measurement map has " + std::to_string(povm_.size()) +
                             " outcomes but " + std::to_string(pointer_.cols()) +
                             " pointer vectors");
  }
  for (const auto& e : povm_) {
    if (!is_hermitian(e, 1e-10)) throw InvariantViolation("POVM element is not Hermitian");
  }
  const PovmDiagnostics diag = diagnose_povm(povm_);
  if (diag.min_eigenvalue < -1e-10) {
    std::ostringstream msg;
    msg << "POVM element has negative eigenvalue " << diag.min_eigenvalue;
    throw InvariantViolation(msg.str());
  }
  if (diag.completeness_error > tol) {
    std::ostringstream msg;
    msg << "POVM elements sum to the identity only within " << diag.completeness_error;
    throw InvariantViolation(msg.str());
  }
}

MeasurementMap MeasurementMap::from_stochastic(const StochasticMatrix& p,
                                               const CMatrix& measurement_basis,
                                               std::optional<CMatrix> pointer_basis) {
  const std::size_t d = p.dim();
  if (measurement_basis.rows() != d || measurement_basis.cols() != d) {
    throw DimensionMismatch("from_stochastic: basis size differs from matrix size");
  }
  std::vector<CMatrix> povm;
  povm.reserve(d);
  for (std::size_t i = 0; i < d; ++i) {
    CMatrix e(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      if (p(i, j) != 0.0) e += outer(measurement_basis.column(j)) * p(i, j);
    }
    povm.push_back(std::move(e));
  }
  return MeasurementMap(std::move(povm), pointer_basis.value_or(measurement_basis));
}

MeasurementMap MeasurementMap::from_stochastic(const StochasticMatrix& p) {
  return from_stochastic(p, CMatrix::identity(p.dim()));
}

std::vector<double> MeasurementMap::weights() const {
  std::vector<double> w;
  w.reserve(povm_.size());
  for (const auto& e : povm_) w.push_back(e.trace().real() / static_cast<double>(d_in()));
  return w;
}

std::vector<double> MeasurementMap::probabilities(const CMatrix& rho) const {
  if (!rho.square() || rho.rows() != d_in()) {
    throw DimensionMismatch("measurement map: input dimension " + std::to_string(rho.rows()) +
                            " but map acts on " + std::to_string(d_in()));
  }
  std::vector<double> p;
  p.reserve(povm_.size());
  for (const auto& e : povm_) p.push_back((rho * e).trace().real());
  return p;
}

CMatrix MeasurementMap::apply(const CMatrix& rho) const {
  const auto p = probabilities(rho);
  CMatrix out(d_out(), d_out());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] != 0.0) out += outer(pointer(i)) * p[i];
  }
  return out;
}

}  // namespace qcorr
