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

// Finite Markov chains induced by a POVM read out in an orthonormal basis:
// communicating classes, irreducibility and primitivity tests, Perron vectors
// of recurrent classes, ergodic limits, Birkhoff decomposition of doubly
// stochastic matrices and the effect of a change of basis on the chain.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qcorr/error.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/stochastic.hpp"

namespace qcorr::markov {

/// Entries at or below this value are treated as structural zeros of the
/// support digraph.
inline constexpr double kSupportThreshold = 1e-12;

/// p(i | j) = <phi_j| E_i |phi_j>. Requires as many outcomes as basis vectors.
StochasticMatrix transition_matrix(std::span<const CMatrix> povm, const CMatrix& basis);

/// Positivity of (I + P)^(d-1), evaluated on the support pattern.
bool is_irreducible(const StochasticMatrix& p);
/// Strong connectivity of the support digraph (edge j -> i when P(i, j) > 0).
bool is_strongly_connected(const StochasticMatrix& p);
/// Positivity of P^(d^2 - 2d + 2), evaluated on the support pattern.
bool is_primitive(const StochasticMatrix& p);
/// d^2 - 2d + 2.
std::size_t wielandt_exponent(std::size_t d);

struct Block {
  std::vector<std::size_t> sites;  // ascending
  bool recurrent = false;          // no probability leaves the class
  bool primitive = false;          // of the class submatrix
};

struct StationaryAnalysis {
  std::size_t dim = 0;
  /// Strongly connected classes in topological order of the condensation.
  std::vector<Block> blocks;
  /// Indices into blocks of the recurrent classes.
  std::vector<std::size_t> recurrent;
  /// One Perron vector per recurrent class, embedded in dimension dim.
  std::vector<std::vector<double>> perron_vectors;

  std::size_t degeneracy() const noexcept { return recurrent.size(); }
};

/// Classes and flags only; perron_vectors is left empty.
StationaryAnalysis block_decompose(const StochasticMatrix& p);
/// block_decompose plus the Perron vector of every recurrent class.
StationaryAnalysis stationary_analysis(const StochasticMatrix& p);

struct PerronVector {
  std::vector<double> vector;         // null-space solve, embedded
  std::vector<double> power_iterate;  // damped power iteration, extrapolated
  double discrepancy = 0.0;           // l1 distance between the two
};

/// Stationary vector of a recurrent class, computed by elimination on
/// (P - I) restricted to the class and cross-checked by damped power
/// iteration with Richardson extrapolation in the damping. Throws
/// InvalidArgument when the block is not recurrent.
PerronVector perron_vector(const StochasticMatrix& p, const Block& block);

/// Convex combination of the embedded Perron vectors. Throws
/// InvalidArgument unless weights is a probability vector of length D.
std::vector<double> stationary_simplex(const StationaryAnalysis& analysis,
                                       std::span<const double> weights);

enum class NonPrimitiveKind { kReducible, kPeriodic };

class NotPrimitive : public Error {
 public:
  NotPrimitive(NonPrimitiveKind kind, const std::string& what)
      : Error(ErrorCode::kNotPrimitive, what), kind_(kind) {}
  NonPrimitiveKind kind() const noexcept { return kind_; }

 private:
  NonPrimitiveKind kind_;
};

RealMatrix matrix_power(const RealMatrix& m, std::size_t r);

/// lim P^r = lambda 1^T. Throws NotPrimitive (periodic or reducible).
RealMatrix ergodic_limit(const StochasticMatrix& p);

/// First r <= r_max with ||P^r - P^inf||_inf <= tol, or 0 if none.
std::size_t convergence_power(const StochasticMatrix& p, double tol, std::size_t r_max = 100000);

struct BirkhoffTerm {
  double weight = 0.0;
  /// permutation[row] is the column holding the 1 of that row.
  std::vector<std::size_t> permutation;
};

struct BirkhoffDecomposition {
  std::vector<BirkhoffTerm> terms;
  RealMatrix reconstruct(std::size_t d) const;
  double total_weight() const;
};

RealMatrix permutation_matrix(std::span<const std::size_t> permutation);

/// Greedy extraction of permutation matrices supported on the positive
/// entries. Throws InvalidArgument unless row and column sums are one within
/// tol and entries are non-negative.
BirkhoffDecomposition birkhoff_decompose(const RealMatrix& doubly_stochastic,
                                         double tol = 1e-9);

/// B(i, k) = |U(i, k)|^2. Doubly stochastic for unitary U.
RealMatrix unistochastic(const CMatrix& u);

/// Transition matrix after the basis change phi -> phi U for a commuting
/// POVM E_j = sum_i P(j, i) |b_i><b_i| written in the eigenbasis b.
struct CommutativeBasisChange {
  StochasticMatrix direct;        // transition_matrix(povm, b U)
  StochasticMatrix composed;      // P * |U|^2
  RealMatrix permutation_mixture; // sum_sigma p_sigma P P_sigma
  BirkhoffDecomposition birkhoff; // of |U|^2
  double discrepancy = 0.0;       // max |direct - composed|
};

CommutativeBasisChange basis_change_commutative(std::span<const CMatrix> povm,
                                                const CMatrix& eigenbasis,
                                                const StochasticMatrix& p_lambda,
                                                const CMatrix& u);

/// Transition matrix after the basis change phi -> phi U for an arbitrary
/// POVM: the permutation mixture of the old chain plus the coherent part
/// sum_{k != l} conj(U_kj) U_lj <phi_k| E_i |phi_l>.
struct GeneralBasisChange {
  StochasticMatrix direct;
  RealMatrix permutation_mixture;
  RealMatrix coherent_part;
  BirkhoffDecomposition birkhoff;
  double discrepancy = 0.0;  // max |direct - (mixture + coherent)|
};

GeneralBasisChange basis_change_general(std::span<const CMatrix> povm, const CMatrix& basis,
                                        const CMatrix& u);

}  // namespace qcorr::markov
