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

#include "qcorr/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "qcorr/error.hpp"

namespace qcorr {

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw InvalidArgument("RealMatrix: entry count does not match shape");
  }
  for (double x : data_) {
    if (!std::isfinite(x)) throw InvalidArgument("RealMatrix: non-finite entry");
  }
}

RealMatrix::RealMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  for (const auto& row : rows) {
    if (row.size() != cols_) throw InvalidArgument("RealMatrix: ragged rows");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

RealMatrix RealMatrix::identity(std::size_t n) {
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

RealMatrix RealMatrix::transpose() const {
  RealMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

std::vector<double> RealMatrix::row_sums() const {
  std::vector<double> s(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) s[i] += (*this)(i, j);
  }
  return s;
}

std::vector<double> RealMatrix::column_sums() const {
  std::vector<double> s(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) s[j] += (*this)(i, j);
  }
  return s;
}

double RealMatrix::inf_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
    best = std::max(best, s);
  }
  return best;
}

double RealMatrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("RealMatrix product: inner dims");
  RealMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

RealMatrix operator+(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("RealMatrix sum: shapes differ");
  }
  RealMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
  }
  return out;
}

RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
  return a + (-1.0 * b);
}

RealMatrix operator*(double s, RealMatrix a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) *= s;
  }
  return a;
}

std::vector<double> operator*(const RealMatrix& a, std::span<const double> v) {
  if (a.cols() != v.size()) throw DimensionMismatch("RealMatrix * vector: size");
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
  }
  return out;
}

RealMatrix kron(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ia = 0; ia < a.rows(); ++ia) {
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      for (std::size_t ib = 0; ib < b.rows(); ++ib) {
        for (std::size_t jb = 0; jb < b.cols(); ++jb) {
          out(ia * b.rows() + ib, ja * b.cols() + jb) = a(ia, ja) * b(ib, jb);
        }
      }
    }
  }
  return out;
}

StochasticMatrix::StochasticMatrix(RealMatrix entries, double tol) : p_(std::move(entries)) {
  if (!p_.square() || p_.rows() == 0) {
    throw InvariantViolation("stochastic matrix must be square and non-empty");
  }
  const std::size_t d = p_.rows();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double& x = p_(i, j);
      if (x < -tol) {
        std::ostringstream msg;
        msg << "stochastic matrix has negative entry " << x << " at (" << i + 1
            << ", " << j + 1 << ")";
        throw InvariantViolation(msg.str());
      }
      if (x < 0.0) x = 0.0;
    }
  }
  const auto sums = p_.column_sums();
  for (std::size_t j = 0; j < d; ++j) {
    if (std::abs(sums[j] - 1.0) > tol) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "column " << j + 1 << " sums to " << sums[j];
      throw InvariantViolation(msg.str());
    }
  }
}

StochasticMatrix StochasticMatrix::from_row_stochastic(const RealMatrix& entries,
                                                       double tol) {
  return StochasticMatrix(entries.transpose(), tol);
}

bool StochasticMatrix::doubly_stochastic(double tol) const {
  const auto sums = p_.row_sums();
  return std::all_of(sums.begin(), sums.end(),
                     [tol](double s) { return std::abs(s - 1.0) <= tol; });
}

}  // namespace qcorr
