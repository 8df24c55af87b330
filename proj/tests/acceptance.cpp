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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "qcorr/broadcast.hpp"
#include "qcorr/commands.hpp"
#include "qcorr/correlation.hpp"
#include "qcorr/fixtures.hpp"
#include "qcorr/markov.hpp"
#include "qcorr/random.hpp"

namespace {

using namespace qcorr;

struct Verdict {
  bool passed = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && passed) {
      passed = false;
      detail = what;
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

MeasurementMap random_qc_map(std::size_t d_in, std::size_t d_out, random::Rng& rng) {
  return MeasurementMap(random::povm(d_in, d_out, rng), random::haar_unitary(d_out, rng));
}

// 100 random QC-type channels x 10 bipartite inputs.
Verdict ac1() {
  Verdict v;
  random::Rng rng(1001);
  double worst_witness = 0.0;
  double worst_recon = 0.0;
  for (int c = 0; c < 100; ++c) {
    const std::size_t d = c % 2 == 0 ? 2 : 3;
    const std::size_t d_out = 2 + static_cast<std::size_t>(c % 3);
    const MeasurementMap mm = random_qc_map(d, d_out, rng);
    const ChoiChannel ch = choi_of(mm);
    const QCExtraction qc = qc_type_extract(ch);
    v.require(qc.operator bool(), "extraction failed on channel " + std::to_string(c));
    if (!qc) continue;
    worst_recon = std::max(worst_recon, qc.reconstruction_error);
    for (int s = 0; s < 10; ++s) {
      const std::size_t d_a = 2 + static_cast<std::size_t>(s % 2);
      const QuantumState rho(random::density_matrix(d_a * d, rng), {d_a, d});
      const QuantumState out = apply_one_sided(ch, rho, Side::kB);
      const ClassicalSide b = classical_side_basis(out, Side::kB);
      v.require(b.operator bool(), "output not classical on B");
      worst_witness = std::max(worst_witness, b.witness);
    }
  }
  v.require(worst_witness <= 1e-8, "witness " + fmt(worst_witness));
  v.require(worst_recon <= 1e-9, "reconstruction " + fmt(worst_recon));
  if (v.passed) v.detail = "max witness " + fmt(worst_witness) + ", max reconstruction " + fmt(worst_recon);
  return v;
}

Verdict ac2() {
  Verdict v;
  const MeasurementMap vn = fixtures::von_neumann_map(2);
  const QuantumState rho = fixtures::cq_counterexample_state();
  const ResidualDecomposition r = residual_decomposition(vn, rho);
  const double norm = commutator_norm(*r.states[0], *r.states[1]);
  v.require(std::abs(norm - std::numbers::sqrt2 / 4.0) <= 1e-10, "commutator " + fmt(norm));
  const StateClass label = classify_state(apply_one_sided(choi_of(vn), rho, Side::kB)).label;
  v.require(label == StateClass::kQCOnly, "label " + to_string(label));
  if (v.passed) v.detail = "commutator " + std::to_string(norm) + ", label " + to_string(label);
  return v;
}

Verdict ac3() {
  Verdict v;
  const MeasurementMap mm = fixtures::computational_map(fixtures::p2_repaired());
  const QuantumState rho = fixtures::cc_nonclosure_input();
  v.require(cc_type_extract(choi_of(mm)).operator bool(), "channel is not CC-type");
  const QuantumState out = apply_one_sided(choi_of(mm), rho, Side::kB);
  const StateClassification c = classify_state(out);
  v.require(c.side_b.operator bool(), "output not classical on B");
  v.require(!c.side_a, "output classical on A");
  const Membership m = in_cc_set(mm, rho);
  v.require(!m.member, "output is CC");
  v.require(m.witness >= 0.05, "witness " + fmt(m.witness));
  v.require(std::abs(m.witness - fixtures::kCcNonclosureWitness) <= 1e-10, "witness off oracle " + fmt(m.witness));
  if (v.passed) v.detail = "witness " + std::to_string(m.witness) + ", label " + to_string(c.label);
  return v;
}

Verdict ac4() {
  Verdict v;
  const commands::Outcome out = commands::run(manifest::Json{{"command", "paper-check"}});
  const std::map<std::string, std::string> expected = {
      {"p1_irreducible", "CONFIRMED"},          {"p1_perron_vector", "CONTRADICTED"},
      {"p2_stochastic", "CONTRADICTED"},        {"p2_irreducible", "CONFIRMED"},
      {"p2_repaired", "REPAIRED"},              {"pa_reducible", "CONTRADICTED"},
      {"pb_reducible", "CONTRADICTED"},         {"pa_pb_bistochastic", "CONFIRMED"},
      {"pa_stationary_vectors", "REPAIRED"},    {"pb_stationary_vectors", "REPAIRED"},
      {"example1_local_broadcast", "CONFIRMED"}, {"example2_local_broadcast", "CONFIRMED"},
      {"cq_counterexample_commutator", "CONFIRMED"}, {"cq_unbiased_weights", "CONTRADICTED"}};
  const auto& rows = out.report["findings"]["rows"];
  v.require(rows.size() == expected.size(), "row count " + std::to_string(rows.size()));
  for (const auto& row : rows) {
    const std::string id = row["id"];
    const auto it = expected.find(id);
    v.require(it != expected.end() && row["status"] == it->second, "row " + id);
  }
  v.require(out.exit_code == 0, "exit code " + std::to_string(out.exit_code));

  // Independent re-derivation of the numbers behind the table.
  const auto p1 = markov::stationary_analysis(StochasticMatrix(fixtures::p1_printed()));
  const std::vector<double> want = {1.0 / 3, 1.0 / 2, 1.0 / 6};
  for (std::size_t i = 0; i < 3; ++i) v.require(std::abs(p1.perron_vectors[0][i] - want[i]) <= 1e-12, "P1 Perron");
  v.require(std::abs(fixtures::p2_printed().column_sums()[2] - 9.0 / 8.0) <= 1e-12, "P2 column sum");
  v.require(markov::is_strongly_connected(StochasticMatrix(fixtures::pa_printed())), "PA connectivity");
  v.require(markov::is_strongly_connected(StochasticMatrix(fixtures::pb_printed())), "PB connectivity");
  const auto pa = markov::stationary_analysis(fixtures::pa_repaired());
  const auto pb = markov::stationary_analysis(fixtures::pb_repaired());
  v.require(pa.perron_vectors == std::vector<std::vector<double>>{{1, 0, 0}, {0, 0.5, 0.5}}, "PA' vectors");
  v.require(pb.perron_vectors == std::vector<std::vector<double>>{{0.5, 0, 0.5}, {0, 1, 0}}, "PB' vectors");
  if (v.passed) v.detail = std::to_string(rows.size()) + " rows as expected";
  return v;
}

Verdict ac5() {
  Verdict v;
  random::Rng rng(5005);
  double worst_spec = 0.0;
  double worst_fixed = 0.0;
  for (int c = 0; c < 50; ++c) {
    const std::size_t d = 2 + static_cast<std::size_t>(c % 2);
    const MeasurementMap mm = random_qc_map(d, d, rng);
    for (int b = 0; b < 5; ++b) {
      const CMatrix basis = random::haar_unitary(d, rng);
      const BroadcastableStates bs = broadcastable_states(mm, basis);
      v.require(bs.degeneracy() >= 1, "no broadcastable state");
      for (std::size_t n : {2u, 3u}) {
        for (const CMatrix& s : bs.states) {
          const BroadcastReport r = verify_spectrum_broadcast(mm, n, s, BroadcastOptions{1e-9, kDefaultBroadcastCap, basis});
          v.require(r.passed, "spectrum broadcast failed");
          for (double x : r.spectral_distances) worst_spec = std::max(worst_spec, x);
        }
      }
    }
    const BroadcastableStates own = broadcastable_states(mm, mm.pointer_basis());
    for (const CMatrix& s : own.states) {
      for (std::size_t n : {2u, 3u}) {
        const BroadcastReport r = verify_full_broadcast(mm, n, s);
        v.require(r.passed, "full broadcast failed");
        worst_fixed = std::max(worst_fixed, r.fixed_point_residual);
      }
    }
  }
  v.require(worst_spec <= 1e-9, "spectral distance " + fmt(worst_spec));
  v.require(worst_fixed <= 1e-9, "fixed point residual " + fmt(worst_fixed));
  if (v.passed) v.detail = "max spectral distance " + fmt(worst_spec) + ", max residual " + fmt(worst_fixed);
  return v;
}

Verdict ac6() {
  Verdict v;
  random::Rng rng(6006);
  double worst_state = 0.0;
  double worst_column = 0.0;
  int maps = 0;
  while (maps < 20) {
    const std::size_t d = 2 + static_cast<std::size_t>(maps % 3);
    const MeasurementMap mm = random_qc_map(d, d, rng);
    const StochasticMatrix p = markov::transition_matrix(mm.povm(), mm.pointer_basis());
    if (!markov::is_primitive(p)) continue;
    ++maps;
    const ErgodicChannelLimit lim = ergodic_channel_limit(mm);
    const auto analysis = markov::stationary_analysis(p);
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i = 0; i < d; ++i) {
        worst_column = std::max(worst_column, std::abs(lim.limit(i, j) - analysis.perron_vectors[0][i]));
      }
    }
    const std::size_t r = markov::convergence_power(p, 1e-10);
    const MeasurementMap mr = power_map(mm, r);
    for (int s = 0; s < 5; ++s) {
      const CMatrix rho = random::density_matrix(d, rng);
      worst_state = std::max(worst_state, frobenius_distance(mr.apply(rho), lim.rho_star));
    }
  }
  v.require(worst_state <= 1e-8, "state distance " + fmt(worst_state));
  v.require(worst_column <= 1e-10, "limit column " + fmt(worst_column));

  auto kind_of = [](const StochasticMatrix& p) -> std::string {
    try {
      markov::ergodic_limit(p);
      return "accepted";
    } catch (const markov::NotPrimitive& e) {
      return e.kind() == markov::NonPrimitiveKind::kPeriodic ? "periodic" : "reducible";
    }
  };
  v.require(kind_of(fixtures::cyclic_shift(3)) == "periodic", "cyclic shift diagnostic");
  v.require(kind_of(fixtures::cyclic_shift(2)) == "periodic", "swap diagnostic");
  v.require(kind_of(StochasticMatrix(RealMatrix::identity(3))) == "reducible", "identity diagnostic");
  v.require(kind_of(fixtures::pa_repaired()) == "reducible", "block diagnostic");
  if (v.passed) v.detail = "max state distance " + fmt(worst_state) + ", max column error " + fmt(worst_column);
  return v;
}

Verdict ac7() {
  Verdict v;
  random::Rng rng(7007);
  double worst_recon = 0.0;
  double worst_cc = 0.0;
  double worst_general = 0.0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t d = 3 + static_cast<std::size_t>(k % 2);
    const CMatrix u = random::haar_unitary(d, rng);
    const RealMatrix b = markov::unistochastic(u);
    const markov::BirkhoffDecomposition dec = markov::birkhoff_decompose(b);
    worst_recon = std::max(worst_recon, (dec.reconstruct(d) - b).max_abs());
    v.require(dec.terms.size() <= d * d - 2 * d + 2, "too many Birkhoff terms");

    const CMatrix e = random::haar_unitary(d, rng);
    const StochasticMatrix p = random::stochastic_matrix(d, 0.7, rng);
    const MeasurementMap cc = MeasurementMap::from_stochastic(p, e);
    worst_cc = std::max(worst_cc, markov::basis_change_commutative(cc.povm(), e, p, u).discrepancy);

    const MeasurementMap qc = random_qc_map(d, d, rng);
    worst_general = std::max(worst_general, markov::basis_change_general(qc.povm(), e, u).discrepancy);
  }
  v.require(worst_recon <= 1e-10, "Birkhoff reconstruction " + fmt(worst_recon));
  v.require(worst_cc <= 1e-10, "CC composition " + fmt(worst_cc));
  v.require(worst_general <= 1e-9, "general identity " + fmt(worst_general));
  if (v.passed) {
    v.detail = "Birkhoff " + fmt(worst_recon) + ", CC " + fmt(worst_cc) + ", general " + fmt(worst_general);
  }
  return v;
}

Verdict ac8() {
  Verdict v;
  const RealMatrix pi{{0.5, 0.0}, {0.0, 0.5}};
  double worst = 0.0;
  double worst_pplus = INFINITY;
  auto family = [&](const StochasticMatrix& pa, const StochasticMatrix& pb, std::size_t cap) {
    const MeasurementMap ma = fixtures::computational_map(pa);
    const MeasurementMap mb = fixtures::computational_map(pb);
    const BroadcastableStates sa = broadcastable_states(ma, ma.pointer_basis());
    const BroadcastableStates sb = broadcastable_states(mb, mb.pointer_basis());
    v.require(sa.degeneracy() == 2 && sb.degeneracy() == 2, "family degeneracy");
    if (sa.degeneracy() != 2 || sb.degeneracy() != 2) return;
    const QuantumState rho = correlation_family(sa.states, sb.states, pi);
    const LocalBroadcastReport r =
        verify_local_broadcast(ma, mb, 2, rho, BroadcastMode::kFull, BroadcastOptions{1e-9, cap, {}});
    v.require(r.passed, "local broadcast failed");
    v.require(r.dense_checked && r.dense_discrepancy <= 1e-12, "dense cross-check");
    worst = std::max(worst, r.max_distance);
    const LocalBroadcastReport bad = verify_local_broadcast(ma, mb, 2, maximally_entangled(pa.dim()),
                                                            BroadcastMode::kFull, BroadcastOptions{1e-9, cap, {}});
    v.require(!bad.passed, "maximally entangled input passed");
    worst_pplus = std::min(worst_pplus, bad.max_distance);
  };
  family(fixtures::p1_p2_sum(), fixtures::p1_p2_sum(), 2048);
  family(fixtures::pa_repaired(), fixtures::pb_repaired(), kDefaultBroadcastCap);
  v.require(worst <= 1e-9, "reduction distance " + fmt(worst));
  v.require(worst_pplus >= 0.1, "maximally entangled distance " + fmt(worst_pplus));

  random::Rng rng(8008);
  const std::vector<std::pair<ChoiChannel, ChoiChannel>> pairs = {
      {choi_of(fixtures::computational_map(fixtures::pa_repaired())),
       choi_of(fixtures::computational_map(fixtures::pb_repaired()))},
      {choi_of(fixtures::von_neumann_map(2)), choi_of(fixtures::computational_map(fixtures::p2_repaired()))},
      {choi_of(random_qc_map(2, 2, rng)), choi_of(random_qc_map(3, 3, rng))},
  };
  std::size_t seed = 80;
  for (const auto& [a, b] : pairs) {
    const CorollaryReport c = two_channel_cc_corollary_check(a, b, 50, seed++);
    v.require(c.passed && c.cc_outputs == 50, "corollary check failed");
  }
  if (v.passed) v.detail = "max distance " + fmt(worst) + ", maximally entangled distance " + fmt(worst_pplus);
  return v;
}

Verdict ac9() {
  Verdict v;
  const MultipartiteReport r = multipartite_qc_check(fixtures::bell_multipartite_state());
  v.require(r.joint.operator bool(), "joint not classical on BB'");
  v.require(r.reduction_b_product && r.reduction_bp_product, "reductions not product");
  v.require(r.joint_schmidt_ranks == std::vector<std::size_t>{2, 2, 2, 2}, "Schmidt ranks");
  v.require(r.nonproduct_joint_basis && !r.joint_basis_product, "joint basis product");
  if (v.passed) v.detail = "reductions product, Bell pointer vectors Schmidt rank 2";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}};
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.passed = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s (%s; %.2fs)\n", name, v.passed ? "PASS" : "FAIL", v.detail.c_str(), secs);
    failed += v.passed ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
