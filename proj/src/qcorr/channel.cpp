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

#include "qcorr/channel.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "qcorr/error.hpp"
#include "qcorr/markov.hpp"

namespace qcorr {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

QuantumState validated_choi(const CMatrix& choi, std::size_t d_in, std::size_t d_out) {
  if (d_in == 0 || d_out == 0 || choi.rows() != d_in * d_out) {
    throw DimensionMismatch("Choi matrix size does not match d_in * d_out");
  }
  return QuantumState(choi, {d_in, d_out}, 1e-10);
}

}  // namespace

QuantumState::QuantumState(CMatrix matrix, std::vector<std::size_t> dims, double tol)
    : m_(std::move(matrix)), dims_(std::move(dims)) {
  if (!m_.square() || m_.empty()) throw DimensionMismatch("state matrix is not square");
  if (dims_.empty()) dims_ = {m_.rows()};
  if (product(dims_) != m_.rows()) {
    throw DimensionMismatch("state dims multiply to " + std::to_string(product(dims_)) +
                            " but matrix has " + std::to_string(m_.rows()) + " rows");
  }
  if (!is_hermitian(m_, tol)) throw InvariantViolation("state matrix is not Hermitian");
  const Complex tr = m_.trace();
  if (std::abs(tr - Complex(1.0)) > tol) {
    std::ostringstream msg;
    msg << "state trace is " << tr.real() << " (expected 1)";
    throw InvariantViolation(msg.str());
  }
  const CMatrix h = (m_ + m_.adjoint()) * Complex(0.5);
  const double min_eig = hermitian_eig(h, tol).values.back();
  if (min_eig < -tol) {
    std::ostringstream msg;
    msg << "state has negative eigenvalue " << min_eig;
    throw InvariantViolation(msg.str());
  }
}

QuantumState QuantumState::with_dims(std::vector<std::size_t> dims) const {
  if (product(dims) != dim()) throw DimensionMismatch("with_dims: dims do not multiply out");
  QuantumState out = *this;
  out.dims_ = std::move(dims);
  return out;
}

QuantumState maximally_entangled(std::size_t d) {
  if (d < 2) throw InvalidArgument("maximally_entangled: d must be at least 2");
  CMatrix m(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) m(i * d + i, j * d + j) = 1.0 / static_cast<double>(d);
  }
  return QuantumState(std::move(m), {d, d});
}

QuantumState maximally_mixed(std::size_t d) {
  return QuantumState(CMatrix::identity(d) * Complex(1.0 / static_cast<double>(d)));
}

QuantumState pure_state(const CMatrix& ket, std::vector<std::size_t> dims) {
  if (ket.cols() != 1) throw InvalidArgument("pure_state: expected a column vector");
  return QuantumState(outer(ket), std::move(dims));
}

KrausSet::KrausSet(std::vector<CMatrix> operators, double tol) : ops_(std::move(operators)) {
  if (ops_.empty()) throw InvalidArgument("Kraus set is empty");
  CMatrix total(d_in(), d_in());
  for (const auto& k : ops_) {
    if (k.rows() != d_out() || k.cols() != d_in()) {
      throw DimensionMismatch("Kraus operators differ in shape");
    }
    total += k.adjoint() * k;
  }
  if (frobenius_distance(total, CMatrix::identity(d_in())) > tol) {
    throw InvariantViolation("Kraus operators are not trace preserving");
  }
}

CMatrix KrausSet::apply(const CMatrix& rho) const {
  if (rho.rows() != d_in() || !rho.square()) throw DimensionMismatch("Kraus apply: input size");
  CMatrix out(d_out(), d_out());
  for (const auto& k : ops_) out += k * rho * k.adjoint();
  return out;
}

ChoiChannel::ChoiChannel(const CMatrix& choi, std::size_t d_in, std::size_t d_out, double tol)
    : choi_(validated_choi(choi, d_in, d_out)),
      d_in_(d_in),
      d_out_(d_out) {
  const std::size_t keep[] = {0};
  const std::size_t dims[] = {d_in, d_out};
  const CMatrix marginal = partial_trace(choi_.matrix(), dims, keep);
  const CMatrix target = CMatrix::identity(d_in) * Complex(1.0 / static_cast<double>(d_in));
  const double err = frobenius_distance(marginal, target);
  if (err > tol) {
    std::ostringstream msg;
    msg << "channel is not trace preserving: ||Tr_out W - I/d|| = " << err;
    throw InvariantViolation(msg.str());
  }
}

CMatrix ChoiChannel::apply_operator(const CMatrix& a) const {
  if (!a.square() || a.rows() != d_in_) {
    throw DimensionMismatch("channel input has dimension " + std::to_string(a.rows()) +
                            ", expected " + std::to_string(d_in_));
  }
  // Block (i, k) of W is L(|i><k|) / d_in.
  const CMatrix& w = choi_.matrix();
  CMatrix out(d_out_, d_out_);
  const double scale = static_cast<double>(d_in_);
  for (std::size_t i = 0; i < d_in_; ++i) {
    for (std::size_t k = 0; k < d_in_; ++k) {
      const Complex aik = a(i, k) * scale;
      if (aik == Complex(0.0)) continue;
      for (std::size_t o = 0; o < d_out_; ++o) {
        for (std::size_t p = 0; p < d_out_; ++p) out(o, p) += aik * w(i * d_out_ + o, k * d_out_ + p);
      }
    }
  }
  return out;
}

QuantumState ChoiChannel::apply(const QuantumState& rho) const {
  return QuantumState(apply_operator(rho.matrix()), {d_out_}, 1e-8);
}

QuantumState apply_one_sided(const ChoiChannel& ch, const QuantumState& rho_ab, Side side) {
  if (!rho_ab.bipartite()) throw DimensionMismatch("apply_one_sided: state is not bipartite");
  const std::size_t da = rho_ab.dims()[0];
  const std::size_t db = rho_ab.dims()[1];
  const CMatrix& m = rho_ab.matrix();
  if (side == Side::kB) {
    if (db != ch.d_in()) throw DimensionMismatch("apply_one_sided: B factor does not match d_in");
    const std::size_t dout = ch.d_out();
    CMatrix out(da * dout, da * dout);
    for (std::size_t a = 0; a < da; ++a) {
      for (std::size_t a2 = 0; a2 < da; ++a2) {
        const CMatrix image = ch.apply_operator(m.block(a * db, a2 * db, db, db));
        for (std::size_t o = 0; o < dout; ++o) {
          for (std::size_t p = 0; p < dout; ++p) out(a * dout + o, a2 * dout + p) = image(o, p);
        }
      }
    }
    return QuantumState(std::move(out), {da, dout}, 1e-8);
  }
  if (da != ch.d_in()) throw DimensionMismatch("apply_one_sided: A factor does not match d_in");
  const std::size_t dout = ch.d_out();
  CMatrix out(dout * db, dout * db);
  CMatrix slice(da, da);
  for (std::size_t b = 0; b < db; ++b) {
    for (std::size_t b2 = 0; b2 < db; ++b2) {
      for (std::size_t a = 0; a < da; ++a) {
        for (std::size_t a2 = 0; a2 < da; ++a2) slice(a, a2) = m(a * db + b, a2 * db + b2);
      }
      const CMatrix image = ch.apply_operator(slice);
      for (std::size_t o = 0; o < dout; ++o) {
        for (std::size_t p = 0; p < dout; ++p) out(o * db + b, p * db + b2) = image(o, p);
      }
    }
  }
  return QuantumState(std::move(out), {dout, db}, 1e-8);
}

KrausSet kraus_from_choi(const ChoiChannel& ch) {
  const EigenSystem es = hermitian_eig(ch.choi().matrix());
  const std::size_t din = ch.d_in();
  const std::size_t dout = ch.d_out();
  std::vector<CMatrix> ops;
  for (std::size_t k = 0; k < es.values.size(); ++k) {
    if (es.values[k] <= 1e-12) continue;
    const double s = std::sqrt(static_cast<double>(din) * es.values[k]);
    CMatrix op(dout, din);
    for (std::size_t i = 0; i < din; ++i) {
      for (std::size_t o = 0; o < dout; ++o) op(o, i) = s * es.vectors(i * dout + o, k);
    }
    ops.push_back(std::move(op));
  }
  return KrausSet(std::move(ops));
}

ChoiChannel from_kraus(const KrausSet& kraus) {
  const std::size_t din = kraus.d_in();
  const std::size_t dout = kraus.d_out();
  CMatrix w(din * dout, din * dout);
  for (const auto& op : kraus.operators()) {
    // Column i*dout + o of vec: K(o, i) / sqrt(din).
    CMatrix v(din * dout, 1);
    for (std::size_t i = 0; i < din; ++i) {
      for (std::size_t o = 0; o < dout; ++o) v(i * dout + o, 0) = op(o, i);
    }
    w += outer(v) * Complex(1.0 / static_cast<double>(din));
  }
  return ChoiChannel(w, din, dout);
}

ChoiChannel compose(const ChoiChannel& second, const ChoiChannel& first) {
  if (second.d_in() != first.d_out()) throw DimensionMismatch("compose: inner dimensions differ");
  const KrausSet a = kraus_from_choi(second);
  const KrausSet b = kraus_from_choi(first);
  std::vector<CMatrix> ops;
  ops.reserve(a.operators().size() * b.operators().size());
  for (const auto& ka : a.operators()) {
    for (const auto& kb : b.operators()) ops.push_back(ka * kb);
  }
  return from_kraus(KrausSet(std::move(ops)));
}

ChoiChannel choi_of(const MeasurementMap& mm) {
  const std::size_t din = mm.d_in();
  const std::size_t dout = mm.d_out();
  CMatrix w(din * dout, din * dout);
  const Complex scale(1.0 / static_cast<double>(din));
  for (std::size_t i = 0; i < mm.outcomes(); ++i) {
    w += tensor(mm.element(i).transpose(), outer(mm.pointer(i))) * scale;
  }
  return ChoiChannel(w, din, dout);
}

MeasurementMap power_map(const MeasurementMap& mm, std::size_t r) {
  if (r == 0) throw InvalidArgument("channel_power: r must be at least 1");
  if (!mm.square()) throw InvalidArgument("channel_power: measurement map is not square");
  if (r == 1) return mm;
  const StochasticMatrix pe = markov::transition_matrix(mm.povm(), mm.pointer_basis());
  const RealMatrix q = markov::matrix_power(pe.matrix(), r - 1);
  const std::size_t n = mm.outcomes();
  std::vector<CMatrix> povm(n, CMatrix(mm.d_in(), mm.d_in()));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (q(i, j) != 0.0) povm[i] += mm.element(j) * Complex(q(i, j));
    }
  }
  return MeasurementMap(std::move(povm), mm.pointer_basis());
}

ChoiChannel channel_power(const MeasurementMap& mm, std::size_t r) {
  return choi_of(power_map(mm, r));
}

}  // namespace qcorr
