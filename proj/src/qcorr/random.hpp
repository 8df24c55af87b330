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

// Seeded samplers for the property suites: Haar unitaries, random states,
// random POVMs and stochastic matrices. Every sampler takes the generator by
// reference so a single seed reproduces a whole batch.

#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "qcorr/linalg.hpp"
#include "qcorr/stochastic.hpp"

namespace qcorr::random {

using Rng = std::mt19937_64;

/// Entries i.i.d. standard complex normal.
CMatrix ginibre(std::size_t rows, std::size_t cols, Rng& rng);
CMatrix haar_unitary(std::size_t d, Rng& rng);
/// Haar-random unit column vector.
CMatrix pure_ket(std::size_t d, Rng& rng);
/// Hilbert-Schmidt random density matrix of the given rank.
CMatrix density_matrix(std::size_t d, Rng& rng, std::size_t rank = 0);
std::vector<double> dirichlet(std::size_t n, double alpha, Rng& rng);

/// POVM with n elements on C^d, each a Dirichlet mixture of d Haar pure
/// states, symmetrically normalized by S^{-1/2} with S the element sum.
std::vector<CMatrix> povm(std::size_t d, std::size_t n, Rng& rng);

/// Column-stochastic d x d matrix. Each entry is kept with probability
/// density (at least one per column), then columns are normalized.
StochasticMatrix stochastic_matrix(std::size_t d, double density, Rng& rng);

}  // namespace qcorr::random
