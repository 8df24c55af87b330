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

#include "qcorr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "qcorr/error.hpp"

namespace qcorr {

namespace {

constexpr double kJacobiOffDiagonal = 1e-13;
constexpr int kJacobiMaxSweeps = 100;
constexpr double kPhaseThreshold = 1e-10;
constexpr double kLexTolerance = 1e-12;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(op) + ": shape " +
                            std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
}

// Descending lexicographic order on columns: real part first, then imaginary.
bool column_greater(const CMatrix& m, std::size_t a, std::size_t b) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const Complex x = m(i, a);
    const Complex y = m(i, b);
    if (std::abs(x.real() - y.real()) > kLexTolerance) return x.real() > y.real();
    if (std::abs(x.imag() - y.imag()) > kLexTolerance) return x.imag() > y.imag();
  }
  return false;
}

CMatrix permute_columns(const CMatrix& m, const std::vector<std::size_t>& order) {
  CMatrix out(m.rows(), order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, k) = m(i, order[k]);
  }
  return out;
}

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

}  // namespace

// --- CMatrix ----------------------------------------------------------------

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw InvalidArgument("CMatrix: " + std::to_string(data_.size()) +
                          " entries for a " + std::to_string(rows_) + "x" +
                          std::to_string(cols_) + " matrix");
  }
  if (!std::all_of(data_.begin(), data_.end(), finite)) {
    throw InvalidArgument("CMatrix: non-finite entry");
  }
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw InvalidArgument("CMatrix: ragged rows");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  if (!std::all_of(data_.begin(), data_.end(), finite)) {
    throw InvalidArgument("CMatrix: non-finite entry");
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const double> values) {
  CMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

CMatrix CMatrix::ket(std::span<const Complex> amplitudes) {
  return CMatrix(amplitudes.size(), 1,
                 std::vector<Complex>(amplitudes.begin(), amplitudes.end()));
}

CMatrix CMatrix::basis_ket(std::size_t dim, std::size_t index) {
  if (index >= dim) throw InvalidArgument("basis_ket: index out of range");
  CMatrix v(dim, 1);
  v(index, 0) = 1.0;
  return v;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  }
  return out;
}

CMatrix CMatrix::conjugate() const {
  CMatrix out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

Complex CMatrix::trace() const {
  if (!square()) throw DimensionMismatch("trace: matrix is not square");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

CMatrix CMatrix::column(std::size_t c) const { return columns(c, 1); }

void CMatrix::set_column(std::size_t c, const CMatrix& v) {
  if (v.rows() != rows_ || v.cols() != 1 || c >= cols_) {
    throw DimensionMismatch("set_column: incompatible vector");
  }
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = v(i, 0);
}

CMatrix CMatrix::columns(std::size_t first, std::size_t count) const {
  if (first + count > cols_) throw DimensionMismatch("columns: out of range");
  CMatrix out(rows_, count);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < count; ++k) out(i, k) = (*this)(i, first + k);
  }
  return out;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                       std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) {
    throw DimensionMismatch("block: out of range");
  }
  CMatrix out(nr, nc);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
  }
  return out;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("operator*: inner dimensions " +
                            std::to_string(a.cols()) + " and " +
                            std::to_string(b.rows()));
  }
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

// --- free functions ---------------------------------------------------------

CMatrix outer(const CMatrix& v) {
  if (v.cols() != 1) throw DimensionMismatch("outer: expected a column vector");
  return v * v.adjoint();
}

Complex inner(const CMatrix& u, const CMatrix& v) {
  if (u.cols() != 1 || v.cols() != 1 || u.rows() != v.rows()) {
    throw DimensionMismatch("inner: expected column vectors of equal size");
  }
  Complex s = 0.0;
  for (std::size_t i = 0; i < u.rows(); ++i) s += std::conj(u(i, 0)) * v(i, 0);
  return s;
}

double frobenius_distance(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "frobenius_distance");
  double s = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    s += std::norm(a.entries()[k] - b.entries()[k]);
  }
  return std::sqrt(s);
}

bool is_hermitian(const CMatrix& a, double tol) {
  if (!a.square()) return false;
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      s += std::norm(a(i, j) - std::conj(a(j, i)));
    }
  }
  return std::sqrt(s) <= tol * std::max(1.0, a.frobenius_norm());
}

bool is_unitary(const CMatrix& u, double tol) {
  if (!u.square()) return false;
  return frobenius_distance(u.adjoint() * u, CMatrix::identity(u.rows())) <= tol;
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ia = 0; ia < a.rows(); ++ia) {
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const Complex x = a(ia, ja);
      if (x == 0.0) continue;
      for (std::size_t ib = 0; ib < b.rows(); ++ib) {
        for (std::size_t jb = 0; jb < b.cols(); ++jb) {
          out(ia * b.rows() + ib, ja * b.cols() + jb) = x * b(ib, jb);
        }
      }
    }
  }
  return out;
}

CMatrix tensor(std::span<const CMatrix> factors) {
  if (factors.empty()) return CMatrix::identity(1);
  CMatrix out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = tensor(out, factors[k]);
  return out;
}

CMatrix tensor_power(const CMatrix& a, std::size_t n) {
  CMatrix out = CMatrix::identity(1);
  for (std::size_t k = 0; k < n; ++k) out = tensor(out, a);
  return out;
}

CMatrix partial_trace(const CMatrix& m, std::span<const std::size_t> dims,
                      std::span<const std::size_t> keep) {
  const std::size_t total =
      std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                      std::multiplies<>());
  if (!m.square() || m.rows() != total) {
    throw DimensionMismatch("partial_trace: dims multiply to " +
                            std::to_string(total) + " but matrix is " +
                            std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  }
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) {
    if (k >= dims.size()) throw InvalidArgument("partial_trace: bad factor index");
    kept[k] = true;
  }
  std::size_t kept_dim = 1;
  for (std::size_t f = 0; f < dims.size(); ++f) {
    if (kept[f]) kept_dim *= dims[f];
  }

  // Split every full index into (kept part, traced part).
  std::vector<std::size_t> kept_index(total), traced_index(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    std::size_t k_idx = 0, t_idx = 0, k_stride = 1, t_stride = 1;
    for (std::size_t f = dims.size(); f-- > 0;) {
      const std::size_t digit = rem % dims[f];
      rem /= dims[f];
      if (kept[f]) {
        k_idx += digit * k_stride;
        k_stride *= dims[f];
      } else {
        t_idx += digit * t_stride;
        t_stride *= dims[f];
      }
    }
    kept_index[idx] = k_idx;
    traced_index[idx] = t_idx;
  }

  CMatrix out(kept_dim, kept_dim);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      if (traced_index[i] == traced_index[j]) {
        out(kept_index[i], kept_index[j]) += m(i, j);
      }
    }
  }
  return out;
}

EigenSystem hermitian_eig(const CMatrix& input, double tol) {
  if (!input.square()) throw DimensionMismatch("hermitian_eig: not square");
  if (!is_hermitian(input, tol)) {
    throw InvariantViolation("hermitian_eig: input is not Hermitian");
  }
  const std::size_t n = input.rows();
  CMatrix a = input;
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex h = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = h;
      a(j, i) = std::conj(h);
    }
  }
  CMatrix v = CMatrix::identity(n);
  const double scale = a.frobenius_norm();

  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= kJacobiOffDiagonal * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex g = a(p, q);
        const double abs_g = std::abs(g);
        if (abs_g <= 1e-300) continue;
        const Complex phase = g / abs_g;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * abs_g);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
        const Complex jpp = c;
        const Complex jpq = s;
        const Complex jqp = -s * std::conj(phase);
        const Complex jqq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * jpp + vkq * jqp;
          v(k, q) = vkp * jpq + vkq * jqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() > a(y, y).real();
  });
  EigenSystem es;
  es.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) es.values[k] = a(order[k], order[k]).real();
  es.vectors = permute_columns(v, order);
  canonicalize_phases(es.vectors);

  // Deterministic order inside degenerate clusters.
  const double cluster = 1e-10 * std::max(1.0, scale);
  std::vector<std::size_t> cols(n);
  std::iota(cols.begin(), cols.end(), 0);
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && es.values[end - 1] - es.values[end] <= cluster) ++end;
    if (end - start > 1) {
      std::sort(cols.begin() + start, cols.begin() + end,
                [&](std::size_t x, std::size_t y) {
                  return column_greater(es.vectors, x, y);
                });
    }
    start = end;
  }
  es.vectors = permute_columns(es.vectors, cols);
  return es;
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  if (!a.square()) throw DimensionMismatch("commutator: not square");
  require_same_shape(a, b, "commutator");
  return a * b - b * a;
}

double commutator_norm(const CMatrix& a, const CMatrix& b) {
  return commutator(a, b).frobenius_norm();
}

void canonicalize_phases(CMatrix& basis) {
  for (std::size_t c = 0; c < basis.cols(); ++c) {
    for (std::size_t i = 0; i < basis.rows(); ++i) {
      const double mag = std::abs(basis(i, c));
      if (mag > kPhaseThreshold) {
        const Complex fix = std::conj(basis(i, c)) / mag;
        for (std::size_t r = 0; r < basis.rows(); ++r) basis(r, c) *= fix;
        basis(i, c) = mag;
        break;
      }
    }
  }
}

void canonicalize_basis(CMatrix& basis) {
  canonicalize_phases(basis);
  std::vector<std::size_t> order(basis.cols());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return column_greater(basis, x, y);
  });
  basis = permute_columns(basis, order);
}

namespace {

struct Refiner {
  std::span<const CMatrix> generators;  // Hermitian
  double tol;
  std::mt19937_64 rng;

  bool all_scalar(const CMatrix& v) {
    const std::size_t m = v.cols();
    const CMatrix vd = v.adjoint();
    for (const auto& h : generators) {
      CMatrix r = vd * h * v;
      const Complex mean = r.trace() / static_cast<double>(m);
      for (std::size_t i = 0; i < m; ++i) r(i, i) -= mean;
      if (r.frobenius_norm() > tol * std::max(1.0, h.frobenius_norm())) return false;
    }
    return true;
  }

  CMatrix refine(const CMatrix& v, int depth) {
    const std::size_t m = v.cols();
    if (m == 1 || all_scalar(v) || depth > 16) return v;
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    const CMatrix vd = v.adjoint();
    CMatrix combo(m, m);
    for (const auto& h : generators) combo += (vd * h * v) * coeff(rng);
    const EigenSystem es = hermitian_eig(combo, 1e-8);
    const double gap = 1e-7 * std::max(1.0, combo.frobenius_norm());

    std::vector<CMatrix> pieces;
    for (std::size_t start = 0; start < m;) {
      std::size_t end = start + 1;
      while (end < m && es.values[end - 1] - es.values[end] <= gap) ++end;
      CMatrix w = v * es.vectors.columns(start, end - start);
      pieces.push_back(end - start == 1 ? w : refine(w, depth + 1));
      start = end;
    }
    CMatrix result(v.rows(), m);
    std::size_t col = 0;
    for (const auto& p : pieces) {
      for (std::size_t k = 0; k < p.cols(); ++k) result.set_column(col++, p.column(k));
    }
    return result;
  }
};

bool diagonalizes(const CMatrix& u, std::span<const CMatrix> family, double tol) {
  const CMatrix ud = u.adjoint();
  for (const auto& m : family) {
    if (off_diagonal_norm(ud * m * u) > tol * std::max(1.0, m.frobenius_norm())) {
      return false;
    }
  }
  return true;
}

}  // namespace

SimultaneousDiagonalization simultaneous_diagonalize(std::span<const CMatrix> family,
                                                     double tol, std::uint64_t seed) {
  if (family.empty()) throw InvalidArgument("simultaneous_diagonalize: empty family");
  const std::size_t n = family.front().rows();
  for (const auto& m : family) {
    if (!m.square() || m.rows() != n) {
      throw DimensionMismatch("simultaneous_diagonalize: mixed shapes in family");
    }
  }

  std::vector<CMatrix> closed;
  std::vector<CMatrix> generators;
  for (const auto& m : family) {
    closed.push_back(m);
    const CMatrix md = m.adjoint();
    const double scale = std::max(1.0, m.frobenius_norm());
    if (frobenius_distance(m, md) > 1e-14 * scale) closed.push_back(md);
    const CMatrix re = (m + md) * 0.5;
    const CMatrix im = (m - md) * Complex(0.0, -0.5);
    if (re.frobenius_norm() > 1e-14 * scale) generators.push_back(re);
    if (im.frobenius_norm() > 1e-14 * scale) generators.push_back(im);
  }

  SimultaneousDiagonalization result;
  bool commuting = true;
  for (std::size_t i = 0; i < closed.size(); ++i) {
    for (std::size_t j = i + 1; j < closed.size(); ++j) {
      const double c = commutator_norm(closed[i], closed[j]);
      result.max_commutator = std::max(result.max_commutator, c);
      const double bound =
          tol * std::max(1.0, closed[i].frobenius_norm() * closed[j].frobenius_norm());
      if (c > bound) commuting = false;
    }
  }
  if (!commuting) return result;
  if (generators.empty()) {
    result.basis = CMatrix::identity(n);
    return result;
  }

  std::optional<CMatrix> first;
  for (std::uint64_t trial_seed : {seed, std::uint64_t{seed ^ 0x9e3779b97f4a7c15ULL}}) {
    Refiner refiner{generators, tol, std::mt19937_64(trial_seed)};
    CMatrix u = refiner.refine(CMatrix::identity(n), 0);
    if (!diagonalizes(u, closed, tol)) return result;
    if (!first) first = std::move(u);
  }
  canonicalize_basis(*first);
  result.basis = std::move(first);
  return result;
}

std::vector<double> schmidt_coefficients(const CMatrix& ket, std::size_t dim_a,
                                         std::size_t dim_b) {
  if (ket.cols() != 1 || ket.rows() != dim_a * dim_b) {
    throw DimensionMismatch("schmidt_coefficients: vector size does not match dims");
  }
  CMatrix m(dim_a, dim_b);
  for (std::size_t i = 0; i < dim_a; ++i) {
    for (std::size_t j = 0; j < dim_b; ++j) m(i, j) = ket(i * dim_b + j, 0);
  }
  const EigenSystem es = hermitian_eig(m * m.adjoint());
  std::vector<double> coeffs;
  coeffs.reserve(es.values.size());
  for (double v : es.values) coeffs.push_back(std::sqrt(std::max(0.0, v)));
  return coeffs;
}

std::size_t schmidt_rank(const CMatrix& ket, std::size_t dim_a, std::size_t dim_b,
                         double tol) {
  const auto coeffs = schmidt_coefficients(ket, dim_a, dim_b);
  return static_cast<std::size_t>(std::count_if(
      coeffs.begin(), coeffs.end(), [tol](double c) { return c * c > tol; }));
}

}  // namespace qcorr
