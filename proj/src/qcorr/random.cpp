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

#include "qcorr/random.hpp"

#include <cmath>

#include "qcorr/error.hpp"

namespace qcorr::random {

CMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  }
  return g;
}

CMatrix haar_unitary(std::size_t d, Rng& rng) {
  // Modified Gram-Schmidt on a Ginibre matrix: R gets a positive diagonal,
  // which is what makes Q Haar distributed.
  CMatrix q = ginibre(d, d, rng);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      Complex proj = 0.0;
      for (std::size_t i = 0; i < d; ++i) proj += std::conj(q(i, j)) * q(i, k);
      for (std::size_t i = 0; i < d; ++i) q(i, k) -= proj * q(i, j);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) norm += std::norm(q(i, k));
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < d; ++i) q(i, k) /= norm;
  }
  return q;
}

CMatrix pure_ket(std::size_t d, Rng& rng) {
  CMatrix v = ginibre(d, 1, rng);
  return v * Complex(1.0 / v.frobenius_norm());
}

CMatrix density_matrix(std::size_t d, Rng& rng, std::size_t rank) {
  if (rank == 0) rank = d;
  const CMatrix g = ginibre(d, rank, rng);
  CMatrix rho = g * g.adjoint();
  rho *= Complex(1.0 / rho.trace().real());
  return rho;
}

std::vector<double> dirichlet(std::size_t n, double alpha, Rng& rng) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    x = gamma(rng);
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

std::vector<CMatrix> povm(std::size_t d, std::size_t n, Rng& rng) {
  if (d == 0 || n == 0) throw InvalidArgument("random::povm: empty dimension");
  std::vector<CMatrix> elements;
  CMatrix total(d, d);
  for (std::size_t k = 0; k < n; ++k) {
    const auto w = dirichlet(d, 1.0, rng);
    CMatrix e(d, d);
    for (std::size_t m = 0; m < d; ++m) e += outer(pure_ket(d, rng)) * w[m];
    total += e;
    elements.push_back(std::move(e));
  }
  const CMatrix s_inv_half =
      hermitian_function(total, [](double x) { return 1.0 / std::sqrt(x); });
  for (auto& e : elements) {
    CMatrix normalized = s_inv_half * e * s_inv_half;
    e = (normalized + normalized.adjoint()) * 0.5;
  }
  return elements;
}

StochasticMatrix stochastic_matrix(std::size_t d, double density, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RealMatrix p(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    double total = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      if (unit(rng) >= density) continue;
      p(i, j) = 0.05 + unit(rng);
      total += p(i, j);
    }
    if (total == 0.0) {
      std::uniform_int_distribution<std::size_t> site(0, d - 1);
      p(site(rng), j) = 1.0;
      total = 1.0;
    }
    for (std::size_t i = 0; i < d; ++i) p(i, j) /= total;
  }
  return StochasticMatrix(std::move(p));
}

}  // namespace qcorr::random
