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
#include <initializer_list>
#include <span>
#include <vector>

namespace qcorr {

/// Dense real matrix, row-major.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols);
  RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  RealMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static RealMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> entries() const noexcept { return data_; }

  RealMatrix transpose() const;
  std::vector<double> row_sums() const;
  std::vector<double> column_sums() const;
  /// Largest absolute row sum (induced infinity norm).
  double inf_norm() const;
  double max_abs() const;

  friend RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);
  friend RealMatrix operator+(const RealMatrix& a, const RealMatrix& b);
  friend RealMatrix operator-(const RealMatrix& a, const RealMatrix& b);
  friend RealMatrix operator*(double s, RealMatrix a);
  friend std::vector<double> operator*(const RealMatrix& a, std::span<const double> v);
  friend bool operator==(const RealMatrix&, const RealMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Kronecker product of real matrices.
RealMatrix kron(const RealMatrix& a, const RealMatrix& b);

/// Column-stochastic transition matrix, P(i, j) = p(i | j): the probability
/// of moving from site j to site i. Stationarity is P v = v.
class StochasticMatrix {
 public:
  /// Throws InvariantViolation unless entries are non-negative (down to
  /// -tol, which is clamped to zero) and every column sums to one within tol.
  explicit StochasticMatrix(RealMatrix entries, double tol = 1e-10);

  /// Ingests a row-stochastic matrix by transposing it.
  static StochasticMatrix from_row_stochastic(const RealMatrix& entries,
                                              double tol = 1e-10);

  std::size_t dim() const noexcept { return p_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return p_(i, j); }
  const RealMatrix& matrix() const noexcept { return p_; }
  /// Row sums equal to one as well.
  bool doubly_stochastic(double tol = 1e-9) const;

 private:
  RealMatrix p_;
};

}  // namespace qcorr
