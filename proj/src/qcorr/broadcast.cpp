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

#include "qcorr/broadcast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qcorr/correlation.hpp"
#include "qcorr/error.hpp"
#include "qcorr/random.hpp"

namespace qcorr {

namespace {

std::size_t saturating_power(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t k = 0; k < exp; ++k) {
    if (out > std::numeric_limits<std::size_t>::max() / base) {
      return std::numeric_limits<std::size_t>::max();
    }
    out *= base;
  }
  return out;
}

std::vector<double> spectrum(const CMatrix& m) {
  return hermitian_eig((m + m.adjoint()) * Complex(0.5), 1e-8).values;
}

double spectral_distance(const CMatrix& a, const CMatrix& b) {
  const auto sa = spectrum(a);
  const auto sb = spectrum(b);
  double s = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) s += std::abs(sa[i] - sb[i]);
  return 0.5 * s;
}

void require_square(const MeasurementMap& mm, const char* who) {
  if (!mm.square()) throw InvalidArgument(std::string(who) + ": measurement map is not square");
}

CMatrix pointer_power(const MeasurementMap& mm, std::size_t i, std::size_t copies) {
  return tensor_power(mm.pointer(i), copies);
}

BroadcastReport verify(const MeasurementMap& mm, std::size_t copies, const CMatrix& rho_star,
                       const BroadcastOptions& options, BroadcastMode mode) {
  require_square(mm, "broadcast verification");
  const QuantumState checked(rho_star, {}, 1e-9);
  if (checked.dim() != mm.d_in()) {
    throw DimensionMismatch("broadcast verification: state dimension differs from the map");
  }
  const BroadcastChannel channel(mm, copies, options.cap);

  BroadcastReport report;
  report.mode = mode;
  report.copies = copies;
  report.rho_star = rho_star;
  const CMatrix marginal = channel.marginal(rho_star);
  report.fixed_point_residual = frobenius_distance(marginal, rho_star);
  report.reductions.assign(copies, marginal);

  if (channel.materializable()) {
    const CMatrix full = channel.apply(rho_star);
    const std::vector<std::size_t> dims(copies, mm.d_out());
    for (std::size_t r = 0; r < copies; ++r) {
      const std::size_t keep[] = {r};
      report.dense_discrepancy = std::max(
          report.dense_discrepancy, frobenius_distance(partial_trace(full, dims, keep), marginal));
    }
    report.dense_checked = true;
  }

  const double sd = spectral_distance(marginal, rho_star);
  report.spectral_distances.assign(copies, sd);
  report.reduction_distances.assign(copies, report.fixed_point_residual);

  if (options.basis) {
    const CMatrix& phi = *options.basis;
    const auto probs = mm.probabilities(rho_star);
    double worst = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      const CMatrix v = phi.column(i);
      worst = std::max(worst, std::abs(probs[i] - inner(v, rho_star * v).real()));
    }
    report.sufficient_condition = worst;
  }

  const bool dense_ok = !report.dense_checked || report.dense_discrepancy <= options.tol;
  if (mode == BroadcastMode::kSpectrum) {
    report.passed = dense_ok && sd <= options.tol;
  } else {
    report.passed = dense_ok && report.fixed_point_residual <= options.tol;
  }
  return report;
}

}  // namespace

BroadcastChannel::BroadcastChannel(MeasurementMap base, std::size_t copies, std::size_t cap)
    : base_(std::move(base)), copies_(copies), cap_(cap) {
  if (copies_ == 0) throw InvalidArgument("broadcast channel needs at least one copy");
  output_dim_ = saturating_power(base_.d_out(), copies_);
}

CMatrix BroadcastChannel::apply(const CMatrix& rho) const {
  if (!materializable()) {
    throw ResourceCapExceeded("broadcast register of dimension " + std::to_string(output_dim_) +
                              " exceeds the cap of " + std::to_string(cap_));
  }
  const auto p = base_.probabilities(rho);
  CMatrix out(output_dim_, output_dim_);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] != 0.0) out += outer(pointer_power(base_, i, copies_)) * Complex(p[i]);
  }
  return out;
}

CMatrix BroadcastChannel::marginal(const CMatrix& rho) const { return base_.apply(rho); }

ChoiChannel BroadcastChannel::choi() const {
  if (!materializable()) {
    throw ResourceCapExceeded("broadcast register of dimension " + std::to_string(output_dim_) +
                              " exceeds the cap of " + std::to_string(cap_));
  }
  const std::size_t din = base_.d_in();
  CMatrix w(din * output_dim_, din * output_dim_);
  const Complex scale(1.0 / static_cast<double>(din));
  for (std::size_t i = 0; i < base_.outcomes(); ++i) {
    w += tensor(base_.element(i).transpose(), outer(pointer_power(base_, i, copies_))) * scale;
  }
  return ChoiChannel(w, din, output_dim_);
}

BroadcastChannel broadcast_channel(const MeasurementMap& mm, std::size_t copies, std::size_t cap) {
  BroadcastChannel ch(mm, copies, cap);
  if (!ch.materializable()) {
    throw ResourceCapExceeded("broadcast register of dimension " + std::to_string(ch.output_dim()) +
                              " exceeds the cap of " + std::to_string(cap));
  }
  return ch;
}

CMatrix BroadcastableStates::state_at(std::span<const double> weights) const {
  const auto lambda = markov::stationary_simplex(analysis, weights);
  CMatrix out(basis.rows(), basis.rows());
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    if (lambda[j] != 0.0) out += outer(basis.column(j)) * Complex(lambda[j]);
  }
  return out;
}

BroadcastableStates broadcastable_states(const MeasurementMap& mm, const CMatrix& basis) {
  require_square(mm, "broadcastable_states");
  StochasticMatrix p = markov::transition_matrix(mm.povm(), basis);
  markov::StationaryAnalysis analysis = markov::stationary_analysis(p);
  std::vector<CMatrix> states;
  for (const auto& v : analysis.perron_vectors) {
    CMatrix s(basis.rows(), basis.rows());
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (v[j] != 0.0) s += outer(basis.column(j)) * Complex(v[j]);
    }
    states.push_back(std::move(s));
  }
  return BroadcastableStates{std::move(p), std::move(analysis), basis, std::move(states)};
}

std::string to_string(BroadcastMode mode) {
  return mode == BroadcastMode::kSpectrum ? "spectrum" : "full";
}

BroadcastReport verify_spectrum_broadcast(const MeasurementMap& mm, std::size_t copies,
                                          const CMatrix& rho_star,
                                          const BroadcastOptions& options) {
  return verify(mm, copies, rho_star, options, BroadcastMode::kSpectrum);
}

BroadcastReport verify_full_broadcast(const MeasurementMap& mm, std::size_t copies,
                                      const CMatrix& rho_star, const BroadcastOptions& options) {
  return verify(mm, copies, rho_star, options, BroadcastMode::kFull);
}

ErgodicChannelLimit ergodic_channel_limit(const MeasurementMap& mm) {
  require_square(mm, "ergodic_channel_limit");
  StochasticMatrix p = markov::transition_matrix(mm.povm(), mm.pointer_basis());
  RealMatrix limit = markov::ergodic_limit(p);
  const std::size_t d = mm.d_in();
  CMatrix rho(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    if (limit(i, 0) != 0.0) rho += outer(mm.pointer(i)) * Complex(limit(i, 0));
  }
  const CMatrix w = tensor(CMatrix::identity(d) * Complex(1.0 / static_cast<double>(d)), rho);
  return ErgodicChannelLimit{std::move(p), std::move(limit), rho, ChoiChannel(w, d, d)};
}

QuantumState correlation_family(const std::vector<CMatrix>& states_a,
                                const std::vector<CMatrix>& states_b, const RealMatrix& pi) {
  if (states_a.empty() || states_b.empty()) throw InvalidArgument("correlation_family: no states");
  if (pi.rows() != states_a.size() || pi.cols() != states_b.size()) {
    throw InvalidArgument("correlation_family: pi has shape " + std::to_string(pi.rows()) + "x" +
                          std::to_string(pi.cols()) + ", expected " +
                          std::to_string(states_a.size()) + "x" + std::to_string(states_b.size()));
  }
  double total = 0.0;
  for (double x : pi.entries()) {
    if (x < -1e-12) throw InvalidArgument("correlation_family: negative entry in pi");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("correlation_family: pi does not sum to one");
  const std::size_t da = states_a.front().rows();
  const std::size_t db = states_b.front().rows();
  CMatrix out(da * db, da * db);
  for (std::size_t m = 0; m < states_a.size(); ++m) {
    for (std::size_t n = 0; n < states_b.size(); ++n) {
      if (pi(m, n) > 0.0) out += tensor(states_a[m], states_b[n]) * Complex(pi(m, n));
    }
  }
  return QuantumState(std::move(out), {da, db}, 1e-9);
}

double mutual_information(const QuantumState& rho_ab) {
  if (!rho_ab.bipartite()) throw DimensionMismatch("mutual_information: state is not bipartite");
  auto entropy = [](const CMatrix& m) {
    double s = 0.0;
    for (double x : spectrum(m)) {
      if (x > 1e-15) s -= x * std::log2(x);
    }
    return s;
  };
  const std::size_t dims[] = {rho_ab.dims()[0], rho_ab.dims()[1]};
  const std::size_t keep_a[] = {0};
  const std::size_t keep_b[] = {1};
  return entropy(partial_trace(rho_ab.matrix(), dims, keep_a)) +
         entropy(partial_trace(rho_ab.matrix(), dims, keep_b)) - entropy(rho_ab.matrix());
}

LocalBroadcastReport verify_local_broadcast(const MeasurementMap& mm_a, const MeasurementMap& mm_b,
                                            std::size_t copies, const QuantumState& rho_ab,
                                            BroadcastMode mode, const BroadcastOptions& options,
                                            bool materialize) {
  require_square(mm_a, "verify_local_broadcast");
  require_square(mm_b, "verify_local_broadcast");
  if (copies == 0) throw InvalidArgument("verify_local_broadcast: copies must be at least 1");
  if (!rho_ab.bipartite() || rho_ab.dims()[0] != mm_a.d_in() || rho_ab.dims()[1] != mm_b.d_in()) {
    throw DimensionMismatch("verify_local_broadcast: state dims do not match the maps");
  }
  const std::size_t na = mm_a.outcomes();
  const std::size_t nb = mm_b.outcomes();
  RealMatrix q(na, nb);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      q(i, j) = (rho_ab.matrix() * tensor(mm_a.element(i), mm_b.element(j))).trace().real();
    }
  }
  CMatrix pair(rho_ab.dim(), rho_ab.dim());
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      if (q(i, j) != 0.0) pair += outer(tensor(mm_a.pointer(i), mm_b.pointer(j))) * Complex(q(i, j));
    }
  }

  LocalBroadcastReport report;
  report.mode = mode;
  report.copies = copies;
  report.pair_reductions.assign(copies, pair);
  const double distance = mode == BroadcastMode::kFull ? frobenius_distance(pair, rho_ab.matrix())
                                                       : spectral_distance(pair, rho_ab.matrix());
  report.distances.assign(copies, distance);
  report.max_distance = distance;

  const std::size_t register_dim = saturating_power(mm_a.d_out() * mm_b.d_out(), copies);
  if (materialize && register_dim > options.cap) {
    throw ResourceCapExceeded("local broadcast register of dimension " +
                              std::to_string(register_dim) + " exceeds the cap of " +
                              std::to_string(options.cap));
  }
  if (register_dim <= options.cap) {
    CMatrix full(register_dim, register_dim);
    for (std::size_t i = 0; i < na; ++i) {
      const CMatrix ea = pointer_power(mm_a, i, copies);
      for (std::size_t j = 0; j < nb; ++j) {
        if (q(i, j) == 0.0) continue;
        full += outer(tensor(ea, pointer_power(mm_b, j, copies))) * Complex(q(i, j));
      }
    }
    std::vector<std::size_t> dims(copies, mm_a.d_out());
    dims.insert(dims.end(), copies, mm_b.d_out());
    for (std::size_t r = 0; r < copies; ++r) {
      const std::size_t keep[] = {r, copies + r};
      report.dense_discrepancy =
          std::max(report.dense_discrepancy, frobenius_distance(partial_trace(full, dims, keep), pair));
    }
    report.dense_checked = true;
  }
  const bool dense_ok = !report.dense_checked || report.dense_discrepancy <= options.tol;
  report.passed = dense_ok && report.max_distance <= options.tol;
  return report;
}

namespace {

struct RayTable {
  std::vector<CMatrix> rays;
  std::size_t index_of(const CMatrix& v) {
    for (std::size_t k = 0; k < rays.size(); ++k) {
      if (std::abs(inner(rays[k], v)) >= 1.0 - 1e-8) return k;
    }
    rays.push_back(v);
    return rays.size() - 1;
  }
};

// v = a (x) b for a product vector, with a of unit norm.
std::pair<CMatrix, CMatrix> split_product(const CMatrix& v, std::size_t da, std::size_t db) {
  std::size_t best_col = 0;
  double best_norm = -1.0;
  for (std::size_t b = 0; b < db; ++b) {
    double n = 0.0;
    for (std::size_t a = 0; a < da; ++a) n += std::norm(v(a * db + b, 0));
    if (n > best_norm) {
      best_norm = n;
      best_col = b;
    }
  }
  CMatrix a(da, 1);
  for (std::size_t i = 0; i < da; ++i) a(i, 0) = v(i * db + best_col, 0);
  a *= Complex(1.0 / std::sqrt(best_norm));
  CMatrix b(db, 1);
  for (std::size_t j = 0; j < db; ++j) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < da; ++i) s += std::conj(a(i, 0)) * v(i * db + j, 0);
    b(j, 0) = s;
  }
  return {a, b};
}

}  // namespace

ProductTransition product_transition(const MeasurementMap& mm_a, const MeasurementMap& mm_b,
                                     const CMatrix& basis_ab) {
  const std::size_t da = mm_a.d_in();
  const std::size_t db = mm_b.d_in();
  if (mm_a.outcomes() != da || mm_b.outcomes() != db) {
    throw InvalidArgument("product_transition: each map needs one outcome per input dimension");
  }
  if (basis_ab.rows() != da * db || basis_ab.cols() != da * db) {
    throw DimensionMismatch("product_transition: basis size differs from d_A d_B");
  }
  std::vector<CMatrix> povm;
  for (std::size_t i = 0; i < da; ++i) {
    for (std::size_t j = 0; j < db; ++j) povm.push_back(tensor(mm_a.element(i), mm_b.element(j)));
  }
  ProductTransition out{markov::transition_matrix(povm, basis_ab), false, {}, {}, {}, false, {}, {}, 0.0};
  const RealMatrix& p = out.matrix.matrix();

  // Van Loan rearrangement: R((i, k), (j, l)) = P(i d_B + j, k d_B + l).
  CMatrix r(da * da, db * db);
  for (std::size_t i = 0; i < da; ++i) {
    for (std::size_t k = 0; k < da; ++k) {
      for (std::size_t j = 0; j < db; ++j) {
        for (std::size_t l = 0; l < db; ++l) r(i * da + k, j * db + l) = p(i * db + j, k * db + l);
      }
    }
  }
  const double total = std::pow(r.frobenius_norm(), 2);
  const double top = hermitian_eig(r * r.adjoint()).values.front();
  out.nearest_kronecker_distance = std::sqrt(std::max(0.0, total - top));

  out.product_basis = true;
  for (std::size_t beta = 0; beta < basis_ab.cols(); ++beta) {
    if (schmidt_rank(basis_ab.column(beta), da, db) != 1) {
      out.product_basis = false;
      break;
    }
  }
  if (!out.product_basis) return out;

  RayTable rays_a, rays_b;
  std::vector<std::size_t> ka(basis_ab.cols()), lb(basis_ab.cols());
  for (std::size_t beta = 0; beta < basis_ab.cols(); ++beta) {
    const auto [a, b] = split_product(basis_ab.column(beta), da, db);
    ka[beta] = rays_a.index_of(a);
    lb[beta] = rays_b.index_of(b * Complex(1.0 / b.frobenius_norm()));
  }
  if (rays_a.rays.size() != da || rays_b.rays.size() != db) return out;
  CMatrix basis_a(da, da), basis_b(db, db);
  for (std::size_t k = 0; k < da; ++k) basis_a.set_column(k, rays_a.rays[k]);
  for (std::size_t l = 0; l < db; ++l) basis_b.set_column(l, rays_b.rays[l]);
  if (!is_unitary(basis_a, 1e-8) || !is_unitary(basis_b, 1e-8)) return out;

  out.basis_a = basis_a;
  out.basis_b = basis_b;
  const StochasticMatrix pa = markov::transition_matrix(mm_a.povm(), basis_a);
  const StochasticMatrix pb = markov::transition_matrix(mm_b.povm(), basis_b);
  double err = 0.0;
  out.kronecker_ordered = true;
  for (std::size_t beta = 0; beta < basis_ab.cols(); ++beta) {
    if (beta != ka[beta] * db + lb[beta]) out.kronecker_ordered = false;
    for (std::size_t i = 0; i < da; ++i) {
      for (std::size_t j = 0; j < db; ++j) {
        err = std::max(err, std::abs(p(i * db + j, beta) - pa(i, ka[beta]) * pb(j, lb[beta])));
      }
    }
  }
  out.factorization_error = err;
  if (out.kronecker_ordered) {
    out.primitive_ab = markov::is_primitive(out.matrix);
    out.primitive_factors = markov::is_primitive(pa) && markov::is_primitive(pb);
  }
  return out;
}

CorollaryReport two_channel_cc_corollary_check(const ChoiChannel& ch_a, const ChoiChannel& ch_b,
                                               std::size_t samples, std::uint64_t seed,
                                               double tol) {
  const QCExtraction qa = qc_type_extract(ch_a);
  const QCExtraction qb = qc_type_extract(ch_b);
  CorollaryReport report;
  report.channel_a_type = static_cast<bool>(qa);
  report.channel_b_type = static_cast<bool>(qb);
  if (!qa || !qb) {
    throw InvalidArgument(std::string("corollary check: channel ") + (!qa ? "A" : "B") +
                          " is not a measurement map");
  }
  const MeasurementMap& ma = *qa.map;
  const MeasurementMap& mb = *qb.map;
  const std::size_t da = ch_a.d_in();
  const std::size_t db = ch_b.d_in();

  auto expected_output = [&](const CMatrix& rho) {
    CMatrix out(ch_a.d_out() * ch_b.d_out(), ch_a.d_out() * ch_b.d_out());
    for (std::size_t i = 0; i < ma.outcomes(); ++i) {
      for (std::size_t j = 0; j < mb.outcomes(); ++j) {
        const double q = (rho * tensor(ma.element(i), mb.element(j))).trace().real();
        if (q != 0.0) out += outer(tensor(ma.pointer(i), mb.pointer(j))) * Complex(q);
      }
    }
    return out;
  };

  random::Rng rng(seed);
  report.samples = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    const QuantumState rho(random::density_matrix(da * db, rng), {da, db}, 1e-9);
    const QuantumState out = apply_one_sided(ch_b, apply_one_sided(ch_a, rho, Side::kA), Side::kB);
    const StateClassification c = classify_state(out);
    if (c.label == StateClass::kCC) ++report.cc_outputs;
    report.max_witness = std::max({report.max_witness, c.side_a.witness, c.side_b.witness});
    report.max_reconstruction_error = std::max(
        report.max_reconstruction_error, frobenius_distance(out.matrix(), expected_output(rho.matrix())));
  }

  if (da == db) {
    const QuantumState pplus = maximally_entangled(da);
    RealMatrix joint(ma.outcomes(), mb.outcomes());
    double err = 0.0;
    for (std::size_t i = 0; i < ma.outcomes(); ++i) {
      for (std::size_t j = 0; j < mb.outcomes(); ++j) {
        joint(i, j) = (ma.element(i) * mb.element(j).transpose()).trace().real() /
                      static_cast<double>(da);
        const double direct =
            (pplus.matrix() * tensor(ma.element(i), mb.element(j))).trace().real();
        err = std::max(err, std::abs(direct - joint(i, j)));
      }
    }
    report.joint_on_p_plus = joint;
    report.joint_on_p_plus_error = err;
  }
  report.passed = report.cc_outputs == samples && report.max_reconstruction_error <= tol &&
                  report.joint_on_p_plus_error.value_or(0.0) <= tol;
  return report;
}

}  // namespace qcorr
