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

#include "qcorr/markov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "qcorr/measurement_map.hpp"

namespace qcorr::markov {

namespace {

using BoolMatrix = std::vector<std::vector<bool>>;

BoolMatrix support(const RealMatrix& m) {
  BoolMatrix s(m.rows(), std::vector<bool>(m.cols(), false));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) s[i][j] = m(i, j) > kSupportThreshold;
  }
  return s;
}

BoolMatrix bool_product(const BoolMatrix& a, const BoolMatrix& b) {
  const std::size_t n = a.size();
  BoolMatrix out(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!a[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (b[k][j]) out[i][j] = true;
      }
    }
  }
  return out;
}

BoolMatrix bool_power(const BoolMatrix& base, std::size_t r) {
  const std::size_t n = base.size();
  BoolMatrix result(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = true;
  BoolMatrix sq = base;
  while (r > 0) {
    if (r & 1U) result = bool_product(result, sq);
    r >>= 1U;
    if (r > 0) sq = bool_product(sq, sq);
  }
  return result;
}

bool all_true(const BoolMatrix& m) {
  return std::all_of(m.begin(), m.end(), [](const std::vector<bool>& row) {
    return std::all_of(row.begin(), row.end(), [](bool b) { return b; });
  });
}

bool primitive_pattern(const BoolMatrix& s) {
  return all_true(bool_power(s, wielandt_exponent(s.size())));
}

RealMatrix submatrix(const RealMatrix& m, const std::vector<std::size_t>& sites) {
  RealMatrix out(sites.size(), sites.size());
  for (std::size_t a = 0; a < sites.size(); ++a) {
    for (std::size_t b = 0; b < sites.size(); ++b) out(a, b) = m(sites[a], sites[b]);
  }
  return out;
}

// Tarjan on the digraph with an edge j -> i whenever s[i][j].
std::vector<std::vector<std::size_t>> strongly_connected_components(const BoolMatrix& s) {
  const std::size_t n = s.size();
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (!s[w][v]) continue;
      if (index[w] == kUnvisited) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> component;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component.push_back(w);
      } while (w != v);
      std::sort(component.begin(), component.end());
      components.push_back(std::move(component));
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] == kUnvisited) visit(v);
  }
  return components;
}

std::vector<double> solve_linear(RealMatrix a, std::vector<double> b) {
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (std::abs(a(pivot, col)) < 1e-300) {
      throw InvariantViolation("perron_vector: singular elimination system");
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      std::swap(b[pivot], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a(r, c) * x[c];
    x[r] = s / a(r, r);
  }
  return x;
}

void clamp_and_normalize(std::vector<double>& v) {
  double total = 0.0;
  for (double& x : v) {
    if (x < 0.0) x = 0.0;
    total += x;
  }
  for (double& x : v) x /= total;
}

std::vector<double> nullspace_solve(const RealMatrix& q) {
  const std::size_t m = q.rows();
  RealMatrix a = q - RealMatrix::identity(m);
  // Rows of P - I sum to zero, so one equation is redundant; replace it by
  // the normalization.
  for (std::size_t c = 0; c < m; ++c) a(m - 1, c) = 1.0;
  std::vector<double> b(m, 0.0);
  b[m - 1] = 1.0;
  auto v = solve_linear(std::move(a), std::move(b));
  clamp_and_normalize(v);
  return v;
}

// Fixed point of x -> (1 - eps) Q x + eps u.
std::vector<double> damped_fixed_point(const RealMatrix& q, double eps) {
  const std::size_t m = q.rows();
  const std::vector<double> uniform(m, 1.0 / static_cast<double>(m));
  std::vector<double> x = uniform;
  const std::size_t cap =
      std::min<std::size_t>(4'000'000, static_cast<std::size_t>(40.0 / eps) + 1000);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t it = 0; it < cap; ++it) {
    std::vector<double> y = q * x;
    double diff = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      y[i] = (1.0 - eps) * y[i] + eps * uniform[i];
      diff += std::abs(y[i] - x[i]);
    }
    x = std::move(y);
    const double rate = diff / previous;
    previous = diff;
    if (diff == 0.0) break;
    if (rate < 0.999 && diff * rate / (1.0 - rate) <= 1e-16) break;
  }
  return x;
}

std::vector<double> extrapolated_power_iteration(const RealMatrix& q) {
  // Neville extrapolation of x(eps) to eps = 0 on eps_k = 1e-3 / 2^k.
  constexpr double kEps0 = 1e-3;
  constexpr std::size_t kMinLevels = 4;
  constexpr std::size_t kMaxLevels = 7;
  std::vector<std::vector<std::vector<double>>> table;
  std::vector<double> best;
  double eps = kEps0;
  for (std::size_t k = 0; k < kMaxLevels; ++k, eps *= 0.5) {
    std::vector<std::vector<double>> row{damped_fixed_point(q, eps)};
    for (std::size_t j = 1; j <= k; ++j) {
      const double factor = std::ldexp(1.0, static_cast<int>(j)) - 1.0;
      std::vector<double> t(q.rows());
      for (std::size_t i = 0; i < q.rows(); ++i) {
        t[i] = row[j - 1][i] + (row[j - 1][i] - table[k - 1][j - 1][i]) / factor;
      }
      row.push_back(std::move(t));
    }
    table.push_back(std::move(row));
    const auto& current = table.back().back();
    if (k + 1 >= kMinLevels) {
      const auto& prev = table[k - 1].back();
      double change = 0.0;
      for (std::size_t i = 0; i < q.rows(); ++i) change += std::abs(current[i] - prev[i]);
      best = current;
      if (change <= 1e-13) break;
    }
  }
  clamp_and_normalize(best);
  return best;
}

std::vector<double> embed(const std::vector<double>& local, const std::vector<std::size_t>& sites,
                          std::size_t d) {
  std::vector<double> out(d, 0.0);
  for (std::size_t a = 0; a < sites.size(); ++a) out[sites[a]] = local[a];
  return out;
}

}  // namespace

std::size_t wielandt_exponent(std::size_t d) { return d * d - 2 * d + 2; }

StochasticMatrix transition_matrix(std::span<const CMatrix> povm, const CMatrix& basis) {
  if (!is_unitary(basis, 1e-9)) throw InvalidArgument("transition_matrix: basis is not unitary");
  const std::size_t d = basis.rows();
  if (povm.size() != d) {
    throw DimensionMismatch("transition_matrix: " + std::to_string(povm.size()) +
                            " outcomes for a " + std::to_string(d) + "-dimensional basis");
  }
  const PovmDiagnostics diag = diagnose_povm(std::vector<CMatrix>(povm.begin(), povm.end()));
  if (diag.completeness_error > 1e-9 || diag.min_eigenvalue < -1e-10) {
    throw InvariantViolation("transition_matrix: elements do not form a POVM");
  }
  RealMatrix p(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    const CMatrix phi = basis.column(j);
    for (std::size_t i = 0; i < d; ++i) p(i, j) = inner(phi, povm[i] * phi).real();
  }
  return StochasticMatrix(std::move(p), 1e-9);
}

bool is_irreducible(const StochasticMatrix& p) {
  BoolMatrix s = support(p.matrix());
  for (std::size_t i = 0; i < s.size(); ++i) s[i][i] = true;
  return all_true(bool_power(s, p.dim() - 1));
}

bool is_strongly_connected(const StochasticMatrix& p) {
  const BoolMatrix s = support(p.matrix());
  const std::size_t n = s.size();
  auto reach_all = [&](bool forward) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> frontier{0};
    seen[0] = true;
    while (!frontier.empty()) {
      const std::size_t v = frontier.back();
      frontier.pop_back();
      for (std::size_t w = 0; w < n; ++w) {
        const bool edge = forward ? s[w][v] : s[v][w];
        if (edge && !seen[w]) {
          seen[w] = true;
          frontier.push_back(w);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return reach_all(true) && reach_all(false);
}

bool is_primitive(const StochasticMatrix& p) { return primitive_pattern(support(p.matrix())); }

StationaryAnalysis block_decompose(const StochasticMatrix& p) {
  const BoolMatrix s = support(p.matrix());
  const std::size_t n = s.size();
  auto components = strongly_connected_components(s);

  std::vector<std::size_t> owner(n);
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (std::size_t v : components[c]) owner[v] = c;
  }
  // Condensation edges and recurrence.
  std::vector<std::set<std::size_t>> successors(components.size());
  std::vector<std::size_t> indegree(components.size(), 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      if (s[i][j] && owner[i] != owner[j]) {
        if (successors[owner[j]].insert(owner[i]).second) ++indegree[owner[i]];
      }
    }
  }
  // Kahn's algorithm, smallest leading site first.
  std::vector<std::size_t> order;
  std::set<std::pair<std::size_t, std::size_t>> ready;
  for (std::size_t c = 0; c < components.size(); ++c) {
    if (indegree[c] == 0) ready.insert({components[c].front(), c});
  }
  while (!ready.empty()) {
    const std::size_t c = ready.begin()->second;
    ready.erase(ready.begin());
    order.push_back(c);
    for (std::size_t next : successors[c]) {
      if (--indegree[next] == 0) ready.insert({components[next].front(), next});
    }
  }

  StationaryAnalysis analysis;
  analysis.dim = n;
  for (std::size_t c : order) {
    Block block;
    block.sites = components[c];
    block.recurrent = successors[c].empty();
    block.primitive = primitive_pattern(support(submatrix(p.matrix(), block.sites)));
    if (block.recurrent) analysis.recurrent.push_back(analysis.blocks.size());
    analysis.blocks.push_back(std::move(block));
  }
  return analysis;
}

StationaryAnalysis stationary_analysis(const StochasticMatrix& p) {
  StationaryAnalysis analysis = block_decompose(p);
  for (std::size_t b : analysis.recurrent) {
    analysis.perron_vectors.push_back(perron_vector(p, analysis.blocks[b]).vector);
  }
  return analysis;
}

PerronVector perron_vector(const StochasticMatrix& p, const Block& block) {
  if (block.sites.empty()) throw InvalidArgument("perron_vector: empty block");
  // Recurrence is re-derived from the matrix rather than trusted.
  for (std::size_t j : block.sites) {
    double inside = 0.0;
    for (std::size_t i : block.sites) inside += p(i, j);
    if (std::abs(inside - 1.0) > 1e-10) {
      throw InvalidArgument("perron_vector: block is not recurrent (probability leaves site " +
                            std::to_string(j + 1) + ")");
    }
  }
  const RealMatrix q = submatrix(p.matrix(), block.sites);
  PerronVector result;
  result.vector = embed(nullspace_solve(q), block.sites, p.dim());
  result.power_iterate = embed(extrapolated_power_iteration(q), block.sites, p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) {
    result.discrepancy += std::abs(result.vector[i] - result.power_iterate[i]);
  }
  return result;
}

std::vector<double> stationary_simplex(const StationaryAnalysis& analysis,
                                       std::span<const double> weights) {
  if (weights.size() != analysis.degeneracy()) {
    throw InvalidArgument("stationary_simplex: expected " +
                          std::to_string(analysis.degeneracy()) + " weights");
  }
  if (analysis.perron_vectors.size() != analysis.degeneracy()) {
    throw InvalidArgument("stationary_simplex: analysis carries no Perron vectors");
  }
  double total = 0.0;
  for (double w : weights) {
    if (w < -1e-12) throw InvalidArgument("stationary_simplex: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument("stationary_simplex: weights do not sum to one");
  }
  std::vector<double> out(analysis.dim, 0.0);
  for (std::size_t m = 0; m < weights.size(); ++m) {
    for (std::size_t i = 0; i < analysis.dim; ++i) {
      out[i] += weights[m] * analysis.perron_vectors[m][i];
    }
  }
  return out;
}

RealMatrix matrix_power(const RealMatrix& m, std::size_t r) {
  if (!m.square()) throw DimensionMismatch("matrix_power: not square");
  RealMatrix result = RealMatrix::identity(m.rows());
  RealMatrix base = m;
  while (r > 0) {
    if (r & 1U) result = result * base;
    r >>= 1U;
    if (r > 0) base = base * base;
  }
  return result;
}

RealMatrix ergodic_limit(const StochasticMatrix& p) {
  if (!is_irreducible(p)) {
    const auto analysis = block_decompose(p);
    throw NotPrimitive(NonPrimitiveKind::kReducible,
                       "ergodic limit requires a primitive matrix; this one is reducible with " +
                           std::to_string(analysis.blocks.size()) + " communicating classes");
  }
  if (!is_primitive(p)) {
    throw NotPrimitive(NonPrimitiveKind::kPeriodic,
                       "ergodic limit requires a primitive matrix; this one is irreducible "
                       "but periodic");
  }
  Block all;
  all.sites.resize(p.dim());
  std::iota(all.sites.begin(), all.sites.end(), 0);
  const auto v = perron_vector(p, all).vector;
  RealMatrix limit(p.dim(), p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) {
    for (std::size_t j = 0; j < p.dim(); ++j) limit(i, j) = v[i];
  }
  return limit;
}

std::size_t convergence_power(const StochasticMatrix& p, double tol, std::size_t r_max) {
  const RealMatrix limit = ergodic_limit(p);
  RealMatrix power = p.matrix();
  for (std::size_t r = 1; r <= r_max; ++r) {
    if ((power - limit).inf_norm() <= tol) return r;
    power = power * p.matrix();
  }
  return 0;
}

RealMatrix BirkhoffDecomposition::reconstruct(std::size_t d) const {
  RealMatrix out(d, d);
  for (const auto& term : terms) out = out + term.weight * permutation_matrix(term.permutation);
  return out;
}

double BirkhoffDecomposition::total_weight() const {
  double s = 0.0;
  for (const auto& t : terms) s += t.weight;
  return s;
}

RealMatrix permutation_matrix(std::span<const std::size_t> permutation) {
  RealMatrix m(permutation.size(), permutation.size());
  for (std::size_t r = 0; r < permutation.size(); ++r) m(r, permutation[r]) = 1.0;
  return m;
}

BirkhoffDecomposition birkhoff_decompose(const RealMatrix& ds, double tol) {
  if (!ds.square()) throw InvalidArgument("birkhoff_decompose: matrix is not square");
  const std::size_t d = ds.rows();
  for (double x : ds.entries()) {
    if (x < -tol) throw InvalidArgument("birkhoff_decompose: negative entry");
  }
  const auto rows = ds.row_sums();
  const auto cols = ds.column_sums();
  for (std::size_t k = 0; k < d; ++k) {
    if (std::abs(rows[k] - 1.0) > tol || std::abs(cols[k] - 1.0) > tol) {
      throw InvalidArgument("birkhoff_decompose: matrix is not doubly stochastic");
    }
  }

  RealMatrix residual = ds;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (residual(i, j) <= kSupportThreshold) residual(i, j) = 0.0;
    }
  }
  constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();
  BirkhoffDecomposition result;
  while (result.terms.size() < d * d) {
    double mass = 0.0;
    for (double x : residual.entries()) mass += x;
    if (mass / static_cast<double>(d) <= 1e-12) break;

    // Augmenting-path matching on the positive entries, lowest column first.
    std::vector<std::size_t> row_of_col(d, kFree);
    std::vector<bool> visited;
    std::function<bool(std::size_t)> augment = [&](std::size_t r) {
      for (std::size_t c = 0; c < d; ++c) {
        if (residual(r, c) <= kSupportThreshold || visited[c]) continue;
        visited[c] = true;
        if (row_of_col[c] == kFree || augment(row_of_col[c])) {
          row_of_col[c] = r;
          return true;
        }
      }
      return false;
    };
    bool perfect = true;
    for (std::size_t r = 0; r < d && perfect; ++r) {
      visited.assign(d, false);
      perfect = augment(r);
    }
    if (!perfect) break;

    BirkhoffTerm term;
    term.permutation.assign(d, 0);
    for (std::size_t c = 0; c < d; ++c) term.permutation[row_of_col[c]] = c;
    term.weight = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < d; ++r) {
      term.weight = std::min(term.weight, residual(r, term.permutation[r]));
    }
    for (std::size_t r = 0; r < d; ++r) {
      double& x = residual(r, term.permutation[r]);
      x -= term.weight;
      if (x <= kSupportThreshold) x = 0.0;
    }
    result.terms.push_back(std::move(term));
  }
  return result;
}

RealMatrix unistochastic(const CMatrix& u) {
  RealMatrix b(u.rows(), u.cols());
  for (std::size_t i = 0; i < u.rows(); ++i) {
    for (std::size_t k = 0; k < u.cols(); ++k) b(i, k) = std::norm(u(i, k));
  }
  return b;
}

namespace {

RealMatrix permutation_mixture(const RealMatrix& p, const BirkhoffDecomposition& birkhoff) {
  RealMatrix out(p.rows(), p.cols());
  for (const auto& term : birkhoff.terms) {
    out = out + term.weight * (p * permutation_matrix(term.permutation));
  }
  return out;
}

double max_abs_difference(const RealMatrix& a, const RealMatrix& b) { return (a - b).max_abs(); }

}  // namespace

CommutativeBasisChange basis_change_commutative(std::span<const CMatrix> povm,
                                                const CMatrix& eigenbasis,
                                                const StochasticMatrix& p_lambda,
                                                const CMatrix& u) {
  if (!is_unitary(u, 1e-9)) throw InvalidArgument("basis change: U is not unitary");
  const RealMatrix b = unistochastic(u);
  CommutativeBasisChange out{
      transition_matrix(povm, eigenbasis * u),
      StochasticMatrix(p_lambda.matrix() * b, 1e-9),
      RealMatrix(),
      birkhoff_decompose(b),
      0.0,
  };
  out.permutation_mixture = permutation_mixture(p_lambda.matrix(), out.birkhoff);
  out.discrepancy =
      std::max(max_abs_difference(out.direct.matrix(), out.composed.matrix()),
               max_abs_difference(out.composed.matrix(), out.permutation_mixture));
  return out;
}

GeneralBasisChange basis_change_general(std::span<const CMatrix> povm, const CMatrix& basis,
                                        const CMatrix& u) {
  if (!is_unitary(u, 1e-9)) throw InvalidArgument("basis change: U is not unitary");
  const std::size_t d = basis.rows();
  const StochasticMatrix before = transition_matrix(povm, basis);
  GeneralBasisChange out{
      transition_matrix(povm, basis * u),
      RealMatrix(),
      RealMatrix(d, d),
      birkhoff_decompose(unistochastic(u)),
      0.0,
  };
  out.permutation_mixture = permutation_mixture(before.matrix(), out.birkhoff);
  for (std::size_t i = 0; i < d; ++i) {
    // <phi_k| E_i |phi_l> for all k, l.
    const CMatrix overlaps = basis.adjoint() * povm[i] * basis;
    for (std::size_t j = 0; j < d; ++j) {
      Complex s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t l = 0; l < d; ++l) {
          if (k != l) s += std::conj(u(k, j)) * u(l, j) * overlaps(k, l);
        }
      }
      out.coherent_part(i, j) = s.real();
    }
  }
  out.discrepancy = max_abs_difference(out.direct.matrix(),
                                       out.permutation_mixture + out.coherent_part);
  return out;
}

}  // namespace qcorr::markov
