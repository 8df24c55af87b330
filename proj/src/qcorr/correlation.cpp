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

#include "qcorr/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "qcorr/error.hpp"

namespace qcorr {

namespace {

constexpr double kNullProbability = 1e-12;

void require_bipartite(const QuantumState& rho, const char* who) {
  if (!rho.bipartite()) throw DimensionMismatch(std::string(who) + ": state is not bipartite");
}

// <v|_A rho |v>_A, an operator on B.
CMatrix contract_a(const CMatrix& rho, std::size_t da, std::size_t db, const CMatrix& v) {
  CMatrix out(db, db);
  for (std::size_t a = 0; a < da; ++a) {
    const Complex ca = std::conj(v(a, 0));
    if (ca == Complex(0.0)) continue;
    for (std::size_t a2 = 0; a2 < da; ++a2) {
      const Complex w = ca * v(a2, 0);
      if (w == Complex(0.0)) continue;
      for (std::size_t b = 0; b < db; ++b) {
        for (std::size_t b2 = 0; b2 < db; ++b2) out(b, b2) += w * rho(a * db + b, a2 * db + b2);
      }
    }
  }
  return out;
}

// <v|_B rho |v>_B, an operator on A.
CMatrix contract_b(const CMatrix& rho, std::size_t da, std::size_t db, const CMatrix& v) {
  CMatrix out(da, da);
  for (std::size_t a = 0; a < da; ++a) {
    for (std::size_t a2 = 0; a2 < da; ++a2) {
      Complex s = 0.0;
      for (std::size_t b = 0; b < db; ++b) {
        const Complex cb = std::conj(v(b, 0));
        if (cb == Complex(0.0)) continue;
        for (std::size_t b2 = 0; b2 < db; ++b2) s += cb * rho(a * db + b, a2 * db + b2) * v(b2, 0);
      }
      out(a, a2) = s;
    }
  }
  return out;
}

CMatrix hermitize(const CMatrix& m) { return (m + m.adjoint()) * Complex(0.5); }

double max_pairwise_commutator(const std::vector<CMatrix>& family) {
  double worst = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      worst = std::max(worst, commutator_norm(family[i], family[j]));
    }
  }
  return worst;
}

}  // namespace

ClassicalSide classical_side_basis(const QuantumState& rho, Side side, double tol) {
  require_bipartite(rho, "classical_side_basis");
  const std::size_t da = rho.dims()[0];
  const std::size_t db = rho.dims()[1];
  const CMatrix& m = rho.matrix();

  std::vector<CMatrix> family;
  if (side == Side::kB) {
    for (std::size_t a = 0; a < da; ++a) {
      for (std::size_t a2 = 0; a2 < da; ++a2) family.push_back(m.block(a * db, a2 * db, db, db));
    }
  } else {
    for (std::size_t b = 0; b < db; ++b) {
      for (std::size_t b2 = 0; b2 < db; ++b2) {
        CMatrix slice(da, da);
        for (std::size_t a = 0; a < da; ++a) {
          for (std::size_t a2 = 0; a2 < da; ++a2) slice(a, a2) = m(a * db + b, a2 * db + b2);
        }
        family.push_back(std::move(slice));
      }
    }
  }

  ClassicalSide out;
  const SimultaneousDiagonalization sd = simultaneous_diagonalize(family, tol);
  out.witness = sd.max_commutator;
  if (!sd) return out;

  const CMatrix& basis = *sd.basis;
  CMatrix rebuilt(m.rows(), m.cols());
  for (std::size_t k = 0; k < basis.cols(); ++k) {
    const CMatrix e = basis.column(k);
    const CMatrix conditional = side == Side::kB ? contract_b(m, da, db, e) : contract_a(m, da, db, e);
    rebuilt += side == Side::kB ? tensor(conditional, outer(e)) : tensor(outer(e), conditional);
    const double p = conditional.trace().real();
    out.probabilities.push_back(p);
    if (p > kNullProbability) {
      out.states.emplace_back(hermitize(conditional) * Complex(1.0 / p));
    } else {
      out.states.emplace_back(std::nullopt);
    }
  }
  out.reconstruction_error = frobenius_distance(rebuilt, m);
  out.basis = basis;
  return out;
}

std::string to_string(StateClass c) {
  switch (c) {
    case StateClass::kCC: return "CC";
    case StateClass::kCQOnly: return "CQ-only";
    case StateClass::kQCOnly: return "QC-only";
    case StateClass::kNeither: return "neither";
  }
  return "neither";
}

StateClassification classify_state(const QuantumState& rho, double tol) {
  StateClassification out;
  out.side_a = classical_side_basis(rho, Side::kA, tol);
  out.side_b = classical_side_basis(rho, Side::kB, tol);
  const bool a = static_cast<bool>(out.side_a);
  const bool b = static_cast<bool>(out.side_b);
  out.label = a && b ? StateClass::kCC
              : a    ? StateClass::kCQOnly
              : b    ? StateClass::kQCOnly
                     : StateClass::kNeither;
  return out;
}

QCExtraction qc_type_extract(const ChoiChannel& ch, double tol) {
  QCExtraction out;
  const ClassicalSide side = classical_side_basis(ch.choi(), Side::kB, tol);
  out.witness = side.witness;
  if (!side) return out;

  const std::size_t din = ch.d_in();
  const CMatrix& w = ch.choi().matrix();
  std::vector<CMatrix> povm;
  for (std::size_t k = 0; k < side.basis->cols(); ++k) {
    const CMatrix sigma = contract_b(w, din, ch.d_out(), side.basis->column(k));
    povm.push_back(hermitize(sigma).transpose() * Complex(static_cast<double>(din)));
  }
  try {
    out.map.emplace(std::move(povm), *side.basis, std::max(tol, 1e-9));
  } catch (const InvariantViolation&) {
    return out;
  }
  out.reconstruction_error = frobenius_distance(choi_of(*out.map).choi().matrix(), w);
  return out;
}

CCExtraction cc_type_extract(const ChoiChannel& ch, double tol) {
  CCExtraction out;
  QCExtraction qc = qc_type_extract(ch, tol);
  if (!qc) {
    out.witness = qc.witness;
    return out;
  }
  const MeasurementMap& mm = *qc.map;
  out.witness = max_pairwise_commutator(mm.povm());
  const SimultaneousDiagonalization sd = simultaneous_diagonalize(mm.povm(), tol);
  if (!sd) return out;

  const CMatrix& b = *sd.basis;
  const std::size_t din = mm.d_in();
  const std::size_t n = mm.outcomes();
  RealMatrix joint(din, n);
  RealMatrix conditional(n, din);
  for (std::size_t i = 0; i < din; ++i) {
    const CMatrix bi = b.column(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double pji = std::max(0.0, inner(bi, mm.element(j) * bi).real());
      conditional(j, i) = pji;
      joint(i, j) = pji / static_cast<double>(din);
    }
  }
  std::vector<CMatrix> povm(n, CMatrix(din, din));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < din; ++i) {
      if (conditional(j, i) != 0.0) povm[j] += outer(b.column(i)) * Complex(conditional(j, i));
    }
  }
  std::optional<StochasticMatrix> transition;
  if (n == din) transition.emplace(conditional, 1e-9);
  out.data.emplace(CCChannelData{MeasurementMap(std::move(povm), mm.pointer_basis()), joint,
                                 conditional, std::move(transition), b});
  return out;
}

CMatrix ResidualDecomposition::reconstruct() const {
  const std::size_t dout = pointer_basis.rows();
  std::size_t da = 0;
  for (const auto& s : states) {
    if (s) da = s->rows();
  }
  CMatrix out(da * dout, da * dout);
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (!states[k]) continue;
    out += tensor(*states[k], outer(pointer_basis.column(k))) * Complex(probabilities[k]);
  }
  return out;
}

ResidualDecomposition residual_decomposition(const MeasurementMap& mm,
                                             const QuantumState& rho_ab) {
  require_bipartite(rho_ab, "residual_decomposition");
  const std::size_t da = rho_ab.dims()[0];
  const std::size_t db = rho_ab.dims()[1];
  if (db != mm.d_in()) {
    throw DimensionMismatch("residual_decomposition: B factor has dimension " +
                            std::to_string(db) + ", map acts on " + std::to_string(mm.d_in()));
  }
  const CMatrix& m = rho_ab.matrix();
  ResidualDecomposition out;
  out.pointer_basis = mm.pointer_basis();
  for (std::size_t k = 0; k < mm.outcomes(); ++k) {
    const CMatrix& e = mm.element(k);
    CMatrix steered(da, da);
    for (std::size_t a = 0; a < da; ++a) {
      for (std::size_t a2 = 0; a2 < da; ++a2) {
        Complex s = 0.0;
        for (std::size_t b = 0; b < db; ++b) {
          for (std::size_t b2 = 0; b2 < db; ++b2) s += m(a * db + b, a2 * db + b2) * e(b2, b);
        }
        steered(a, a2) = s;
      }
    }
    const double p = steered.trace().real();
    out.probabilities.push_back(std::max(0.0, p));
    if (p > kNullProbability) {
      out.states.emplace_back(hermitize(steered) * Complex(1.0 / p));
    } else {
      out.states.emplace_back(std::nullopt);
    }
  }
  return out;
}

Membership in_cc_set(const MeasurementMap& mm, const QuantumState& rho_ab, double tol) {
  const ResidualDecomposition r = residual_decomposition(mm, rho_ab);
  std::vector<CMatrix> present;
  for (const auto& s : r.states) {
    if (s) present.push_back(*s);
  }
  Membership out;
  out.witness = max_pairwise_commutator(present);
  out.member = out.witness <= tol;
  return out;
}

QuantumState star_mix(const QuantumState& rho, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("star_mix: lambda outside [0, 1]");
  const double d = static_cast<double>(rho.dim());
  CMatrix m = rho.matrix() * Complex(lambda) +
              CMatrix::identity(rho.dim()) * Complex((1.0 - lambda) / d);
  return QuantumState(std::move(m), rho.dims());
}

QuantumState schmidt_state(const std::vector<double>& c, const CMatrix& basis_a,
                           const CMatrix& basis_b) {
  if (!is_unitary(basis_a, 1e-10) || !is_unitary(basis_b, 1e-10)) {
    throw InvalidArgument("schmidt_state: bases must be unitary");
  }
  if (c.empty() || c.size() > std::min(basis_a.cols(), basis_b.cols())) {
    throw InvalidArgument("schmidt_state: coefficient count exceeds the local dimensions");
  }
  double norm = 0.0;
  for (double x : c) {
    if (x < 0.0) throw InvalidArgument("schmidt_state: negative coefficient");
    norm += x * x;
  }
  if (std::abs(norm - 1.0) > 1e-10) throw InvalidArgument("schmidt_state: coefficients not normalized");
  const std::size_t da = basis_a.rows();
  const std::size_t db = basis_b.rows();
  CMatrix psi(da * db, 1);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0.0) continue;
    psi += tensor(basis_a.column(i), basis_b.column(i)) * Complex(c[i]);
  }
  return QuantumState(outer(psi), {da, db});
}

MultipartiteReport multipartite_qc_check(const QuantumState& rho, double tol) {
  if (rho.dims().size() != 3) {
    throw DimensionMismatch("multipartite_qc_check: expected dims (d_A, d_B, d_B')");
  }
  const std::size_t da = rho.dims()[0];
  const std::size_t db = rho.dims()[1];
  const std::size_t dbp = rho.dims()[2];
  const std::size_t dims[] = {da, db, dbp};

  MultipartiteReport out;
  out.joint = classical_side_basis(rho.with_dims({da, db * dbp}), Side::kB, tol);

  auto reduce = [&](std::size_t other) {
    const std::size_t keep[] = {0, other};
    return QuantumState(partial_trace(rho.matrix(), dims, keep), {da, dims[other]}, 1e-8);
  };
  auto is_product = [&](const QuantumState& r) {
    const std::size_t d2[] = {r.dims()[0], r.dims()[1]};
    const std::size_t k0[] = {0};
    const std::size_t k1[] = {1};
    const CMatrix prod = tensor(partial_trace(r.matrix(), d2, k0), partial_trace(r.matrix(), d2, k1));
    return frobenius_distance(prod, r.matrix()) <= tol;
  };
  const QuantumState rb = reduce(1);
  const QuantumState rbp = reduce(2);
  out.reduction_b = classical_side_basis(rb, Side::kB, tol);
  out.reduction_bp = classical_side_basis(rbp, Side::kB, tol);
  out.reduction_b_product = is_product(rb);
  out.reduction_bp_product = is_product(rbp);

  if (out.joint) {
    out.joint_basis_product = true;
    for (std::size_t k = 0; k < out.joint.basis->cols(); ++k) {
      const std::size_t rank = schmidt_rank(out.joint.basis->column(k), db, dbp);
      out.joint_schmidt_ranks.push_back(rank);
      if (rank != 1) out.joint_basis_product = false;
    }
    out.nonproduct_joint_basis = out.reduction_b && out.reduction_bp && !out.joint_basis_product;
  }
  return out;
}

}  // namespace qcorr
