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

// Dense complex matrix kernels: Kronecker products, partial traces, the
// Hermitian eigenproblem and simultaneous diagonalization of commuting
// families. Sizes in this library stay below a few hundred, so everything is
// plain row-major storage without blocking.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace qcorr {

using Complex = std::complex<double>;

/// Structural zero threshold used when a caller does not supply one.
inline constexpr double kDefaultTol = 1e-9;

/// Seed for the random linear combinations inside simultaneous_diagonalize.
inline constexpr std::uint64_t kDefaultSeed = 0x5eedc0220001ULL;

class CMatrix {
 public:
  CMatrix() = default;
  /// Zero matrix.
  CMatrix(std::size_t rows, std::size_t cols);
  /// Row-major entries; throws InvalidArgument on size mismatch or a
  /// non-finite entry.
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const double> values);
  /// Column vector.
  static CMatrix ket(std::span<const Complex> amplitudes);
  /// Computational basis vector |index> in dimension dim.
  static CMatrix basis_ket(std::size_t dim, std::size_t index);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::span<const Complex> entries() const noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conjugate() const;
  Complex trace() const;
  double frobenius_norm() const;
  double max_abs() const;

  CMatrix column(std::size_t c) const;
  void set_column(std::size_t c, const CMatrix& v);
  /// Columns [first, first + count).
  CMatrix columns(std::size_t first, std::size_t count) const;
  /// Submatrix with the given row and column offsets.
  CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr,
                std::size_t nc) const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(Complex s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend bool operator==(const CMatrix& a, const CMatrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// v v^dagger for a column vector v.
CMatrix outer(const CMatrix& v);
/// <u|v> for column vectors.
Complex inner(const CMatrix& u, const CMatrix& v);

double frobenius_distance(const CMatrix& a, const CMatrix& b);
bool is_hermitian(const CMatrix& a, double tol = kDefaultTol);
/// U^dagger U == 1 within tol (Frobenius).
bool is_unitary(const CMatrix& u, double tol = kDefaultTol);

/// Kronecker product; row index of the result is i_a * b.rows() + i_b.
CMatrix tensor(const CMatrix& a, const CMatrix& b);
CMatrix tensor(std::span<const CMatrix> factors);
/// n-fold tensor power.
CMatrix tensor_power(const CMatrix& a, std::size_t n);

/// Traces out every factor whose index is not listed in keep. The kept
/// factors appear in ascending order. Throws DimensionMismatch when the dims
/// do not multiply out to the matrix size.
CMatrix partial_trace(const CMatrix& m, std::span<const std::size_t> dims,
                      std::span<const std::size_t> keep);

struct EigenSystem {
  std::vector<double> values;  // descending
  CMatrix vectors;             // columns, unitary
};

/// Cyclic complex Jacobi. Throws InvariantViolation when the input is not
/// Hermitian within tol relative to its norm.
EigenSystem hermitian_eig(const CMatrix& a, double tol = kDefaultTol);

/// f applied to the spectrum of a Hermitian matrix.
template <typename F>
CMatrix hermitian_function(const CMatrix& a, F&& f);

CMatrix commutator(const CMatrix& a, const CMatrix& b);
/// Frobenius norm of ab - ba. Throws DimensionMismatch for unequal shapes.
double commutator_norm(const CMatrix& a, const CMatrix& b);

struct SimultaneousDiagonalization {
  std::optional<CMatrix> basis;  // unitary, columns are the common eigenbasis
  double max_commutator = 0.0;   // over the *-closed family
  explicit operator bool() const noexcept { return basis.has_value(); }
};

/// Common eigenbasis of a family of square matrices. The family is closed
/// under adjoints internally. Fails (empty basis) when some pair fails to
/// commute within tol, or when the two seeded trials cannot both certify a
/// diagonalizing basis. Throws InvalidArgument on an empty family.
SimultaneousDiagonalization simultaneous_diagonalize(
    std::span<const CMatrix> family, double tol = kDefaultTol,
    std::uint64_t seed = kDefaultSeed);

/// Makes the first non-negligible component of every column real positive.
void canonicalize_phases(CMatrix& basis);
/// Phase canonicalization followed by descending lexicographic ordering of
/// the columns.
void canonicalize_basis(CMatrix& basis);

/// Schmidt coefficients (descending) of a pure bipartite vector.
std::vector<double> schmidt_coefficients(const CMatrix& ket, std::size_t dim_a,
                                         std::size_t dim_b);
/// Number of squared Schmidt coefficients above tol.
std::size_t schmidt_rank(const CMatrix& ket, std::size_t dim_a,
                         std::size_t dim_b, double tol = 1e-10);

// --- template definitions -------------------------------------------------

template <typename F>
CMatrix hermitian_function(const CMatrix& a, F&& f) {
  const EigenSystem es = hermitian_eig(a);
  const std::size_t n = a.rows();
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(es.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = es.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) {
        out(i, j) += vik * std::conj(es.vectors(j, k));
      }
    }
  }
  return out;
}

}  // namespace qcorr
