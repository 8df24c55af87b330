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

// N-copy broadcasting of measurement maps, stationary (broadcastable)
// states, ergodic limits and local broadcasting of classical correlations.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcorr/channel.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/markov.hpp"
#include "qcorr/measurement_map.hpp"

namespace qcorr {

/// Largest register dimension materialized densely unless overridden.
inline constexpr std::size_t kDefaultBroadcastCap = 256;

/// rho -> sum_i Tr(rho E_i) |e_i><e_i|^(x)N.
class BroadcastChannel {
 public:
  /// Throws InvalidArgument for copies == 0.
  BroadcastChannel(MeasurementMap base, std::size_t copies, std::size_t cap = kDefaultBroadcastCap);

  const MeasurementMap& base() const noexcept { return base_; }
  std::size_t copies() const noexcept { return copies_; }
  /// d_out^N.
  std::size_t output_dim() const noexcept { return output_dim_; }
  bool materializable() const noexcept { return output_dim_ <= cap_; }

  /// Dense output. Throws ResourceCapExceeded when d_out^N exceeds the cap.
  CMatrix apply(const CMatrix& rho) const;
  /// Single-copy reduction without materializing the N-copy register.
  CMatrix marginal(const CMatrix& rho) const;
  /// Choi state over (d_in, d_out^N); subject to the cap.
  ChoiChannel choi() const;

 private:
  MeasurementMap base_;
  std::size_t copies_;
  std::size_t cap_;
  std::size_t output_dim_;
};

/// Eager form: throws ResourceCapExceeded when d_out^N > cap.
BroadcastChannel broadcast_channel(const MeasurementMap& mm, std::size_t copies,
                                   std::size_t cap = kDefaultBroadcastCap);

struct BroadcastableStates {
  StochasticMatrix transition;
  markov::StationaryAnalysis analysis;
  CMatrix basis;
  /// rho_*(phi) = sum_j lambda_j |phi_j><phi_j|, one per recurrent class.
  std::vector<CMatrix> states;
  std::size_t degeneracy() const noexcept { return states.size(); }
  /// Convex combination of states; see markov::stationary_simplex.
  CMatrix state_at(std::span<const double> weights) const;
};

/// Throws InvalidArgument for a non-square map.
BroadcastableStates broadcastable_states(const MeasurementMap& mm, const CMatrix& basis);

enum class BroadcastMode { kSpectrum, kFull };
std::string to_string(BroadcastMode mode);

struct BroadcastReport {
  BroadcastMode mode = BroadcastMode::kSpectrum;
  std::size_t copies = 0;
  CMatrix rho_star;
  std::vector<CMatrix> reductions;
  /// Trace distance between sorted spectra, one per copy.
  std::vector<double> spectral_distances;
  /// ||reduction - rho_*||_F, one per copy.
  std::vector<double> reduction_distances;
  double fixed_point_residual = 0.0;  // ||L(rho_*) - rho_*||_F
  /// max_i |Tr(rho_* E_i) - lambda_i| in the supplied basis, if any.
  std::optional<double> sufficient_condition;
  bool dense_checked = false;
  double dense_discrepancy = 0.0;  // dense vs streamed reductions
  bool passed = false;
};

struct BroadcastOptions {
  double tol = 1e-9;
  std::size_t cap = kDefaultBroadcastCap;
  /// Basis in which rho_* is diagonal; enables the sufficient-condition check.
  std::optional<CMatrix> basis;
};

/// Passes iff every single-copy reduction has the spectrum of rho_* within
/// tol (trace distance of sorted spectra).
BroadcastReport verify_spectrum_broadcast(const MeasurementMap& mm, std::size_t copies,
                                          const CMatrix& rho_star,
                                          const BroadcastOptions& options = {});
/// Passes iff L(rho_*) = rho_* and every reduction equals rho_* within tol.
BroadcastReport verify_full_broadcast(const MeasurementMap& mm, std::size_t copies,
                                      const CMatrix& rho_star,
                                      const BroadcastOptions& options = {});

struct ErgodicChannelLimit {
  StochasticMatrix transition;  // P(e)
  RealMatrix limit;             // P^inf
  CMatrix rho_star;             // sum_i lambda_i |e_i><e_i|
  ChoiChannel constant_channel; // (I / d) (x) rho_*
};

/// Throws markov::NotPrimitive when P(e) is not primitive.
ErgodicChannelLimit ergodic_channel_limit(const MeasurementMap& mm);

/// sum_mn pi_mn rho_m (x) sigma_n. Throws InvalidArgument for a pi that is
/// not a probability matrix of shape |states_a| x |states_b|.
QuantumState correlation_family(const std::vector<CMatrix>& states_a,
                                const std::vector<CMatrix>& states_b, const RealMatrix& pi);

/// S(A) + S(B) - S(AB) in bits.
double mutual_information(const QuantumState& rho_ab);

struct LocalBroadcastReport {
  BroadcastMode mode = BroadcastMode::kFull;
  std::size_t copies = 0;
  /// Reduction to (A_r, B_r), one per r.
  std::vector<CMatrix> pair_reductions;
  /// Frobenius distance (full) or spectral trace distance (spectrum).
  std::vector<double> distances;
  double max_distance = 0.0;
  bool dense_checked = false;
  double dense_discrepancy = 0.0;
  bool passed = false;
};

/// Applies L_A^(N) (x) L_B^(N) and compares each (A_r, B_r) reduction with
/// rho_ab. Both maps must be square. With materialize set, the dense
/// register is built and ResourceCapExceeded is thrown past the cap;
/// otherwise it is built only when it fits.
LocalBroadcastReport verify_local_broadcast(const MeasurementMap& mm_a, const MeasurementMap& mm_b,
                                            std::size_t copies, const QuantumState& rho_ab,
                                            BroadcastMode mode, const BroadcastOptions& options = {},
                                            bool materialize = false);

struct ProductTransition {
  StochasticMatrix matrix;
  /// Every basis vector has Schmidt rank one.
  bool product_basis = false;
  /// The basis is a grid {a_k (x) b_l}; factor bases attached.
  std::optional<CMatrix> basis_a;
  std::optional<CMatrix> basis_b;
  /// max |P_AB - P_A (x) P_B| with columns matched to the grid.
  std::optional<double> factorization_error;
  /// Basis order is k d_B + l, so P_AB is literally a Kronecker product.
  bool kronecker_ordered = false;
  std::optional<bool> primitive_ab;
  std::optional<bool> primitive_factors;
  /// Frobenius distance to the nearest Kronecker product.
  double nearest_kronecker_distance = 0.0;
};

/// P(i d_B + j, beta) = <phi_beta| E_i^A (x) E_j^B |phi_beta>.
ProductTransition product_transition(const MeasurementMap& mm_a, const MeasurementMap& mm_b,
                                     const CMatrix& basis_ab);

struct CorollaryReport {
  bool channel_a_type = false;  // L_A is a measurement map
  bool channel_b_type = false;  // L_B is a measurement map
  std::size_t samples = 0;
  std::size_t cc_outputs = 0;
  double max_witness = 0.0;
  double max_reconstruction_error = 0.0;
  /// On P_+ (equal input dimensions only).
  std::optional<RealMatrix> joint_on_p_plus;
  std::optional<double> joint_on_p_plus_error;
  bool passed = false;
};

/// Both channels must be measurement maps; throws InvalidArgument if either
/// type detection fails.
CorollaryReport two_channel_cc_corollary_check(const ChoiChannel& ch_a, const ChoiChannel& ch_b,
                                               std::size_t samples, std::uint64_t seed,
                                               double tol = 1e-8);

}  // namespace qcorr
