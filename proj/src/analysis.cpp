// Copyright 2026 The loccn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "loccn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "loccn/rng.hpp"

namespace loccn {

namespace {

void require_shapes(const StateInClass& s, const StabilizerGroup& g) {
  if (g.elements.empty()) throw std::invalid_argument("analysis: empty stabilizer group");
  if (s.parties() != g.parties())
    throw std::invalid_argument("analysis: state and group party counts differ");
  for (int i = 0; i < s.parties(); ++i)
    if (s.ops[i].rows() != g.elements.front().factors[i].rows())
      throw std::invalid_argument("analysis: state and group dimensions differ at party " +
                                  std::to_string(i));
}

// commute[k][i] = whether element k's factor commutes with the state operator
// at party i.
std::vector<std::vector<bool>> commute_table(const StateInClass& s, const StabilizerGroup& g,
                                             double tol) {
  std::vector<std::vector<bool>> table(g.size(), std::vector<bool>(s.parties(), false));
  for (std::size_t k = 0; k < g.size(); ++k)
    for (int i = 0; i < s.parties(); ++i)
      table[k][i] = commutes(s.ops[i], g.elements[k].factors[i], tol).first;
  return table;
}

CMatrix random_hermitian(std::size_t d, Rng& rng) {
  CMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    m(i, i) = Complex(rng.normal(), 0.0);
    for (std::size_t j = i + 1; j < d; ++j) {
      const Complex z = rng.cnormal();
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return m;
}

// Indices of the cyclic subgroup generated by element k, starting at the
// identity; empty when the walk fails to close inside the group.
std::vector<int> cyclic_indices(const StabilizerGroup& g, std::size_t k, double tol) {
  std::vector<int> out{static_cast<int>(g.identity_index)};
  LocalSymmetry cur = g.elements[k];
  for (std::size_t steps = 0; steps < g.size(); ++steps) {
    const auto idx = find_element(g, cur, std::max(tol, 1e-8));
    if (!idx) return {};
    if (*idx == g.identity_index) return out;
    out.push_back(static_cast<int>(*idx));
    cur = symmetry_product(cur, g.elements[k]);
  }
  return {};
}

double min_eigenvalue(const CMatrix& h) {
  return hermitian_eigen(h).values.front();
}

// The nontriviality clause: a target is trivial when it coincides with some
// admissible conjugate of the source operator.
bool is_trivial_target(const CMatrix& h, const CMatrix& gj, const StabilizerGroup& g,
                       const std::vector<std::size_t>& admissible, int party, double tol) {
  for (std::size_t k : admissible) {
    const CMatrix& f = g.elements[k].factors[party];
    const CMatrix conj = f * gj * f.adjoint();
    if ((h - conj).frobenius_norm() <= tol) return true;
  }
  return false;
}

ConvertResult inconclusive_with(const OrbitResult& orbit) {
  ConvertResult out;
  out.status = Status::kInconclusive;
  out.residual = orbit.residual;
  return out;
}

}  // namespace

ReachResult check_reachable(const StateInClass& target, const StabilizerGroup& group,
                            double tol) {
  require_shapes(target, group);
  const auto table = commute_table(target, group, tol);
  ReachResult out;
  for (std::size_t k = 0; k < group.size(); ++k) {
    if (k == group.identity_index) continue;
    int bad = -1;
    int bad_count = 0;
    for (int i = 0; i < target.parties() && bad_count < 2; ++i) {
      if (!table[k][i]) {
        bad = i;
        ++bad_count;
      }
    }
    if (bad_count == 1) {
      out.reachable = true;
      out.symmetry = static_cast<int>(k);
      out.party = bad;
      return out;
    }
  }
  return out;
}

ConvertResult check_convertible(const StateInClass& source, const StabilizerGroup& group,
                                int party, double tol, int budget, std::uint64_t seed) {
  require_shapes(source, group);
  if (party < 0 || party >= source.parties())
    throw std::invalid_argument("check_convertible: party index out of range");

  const CMatrix& gj = source.ops[party];
  const std::size_t d = gj.rows();
  const auto admissible = admissible_set(source, group, party, tol);

  bool any_nontrivial = false;
  for (std::size_t k : admissible)
    if (factor_nontrivial(group.elements[k].factors[party], tol)) {
      any_nontrivial = true;
      break;
    }
  if (!any_nontrivial) {
    // Every admissible symmetry fixes G_j by conjugation, so the only
    // feasible target is G_j itself, which the nontriviality clause bars.
    ConvertResult out;
    out.status = Status::kCertifiedNo;
    return out;
  }

  const double mineig = min_eigenvalue(gj);

  // Direct construction when some admissible symmetry commutes at the acting
  // party: perturb away from the commutant of its cyclic subgroup.  The
  // eigenvalue floor keeps the measurement residual of the certificate from
  // blowing up through g_j^{-1}.
  if (mineig >= 5e-6) {
    for (std::size_t k : admissible) {
      const CMatrix& f = group.elements[k].factors[party];
      if (!factor_nontrivial(f, tol) || !commutes(gj, f, tol).first) continue;
      const std::vector<int> cyc = cyclic_indices(group, k, tol);
      if (cyc.size() < 2) break;
      bool all_admissible = true;
      for (int idx : cyc)
        all_admissible = all_admissible &&
                         std::find(admissible.begin(), admissible.end(),
                                   static_cast<std::size_t>(idx)) != admissible.end();
      if (!all_admissible) break;

      std::vector<CMatrix> cyc_factors;
      cyc_factors.reserve(cyc.size());
      for (int idx : cyc) cyc_factors.push_back(group.elements[idx].factors[party]);

      for (int attempt = 0; attempt < 8; ++attempt) {
        Rng rng(seed, 7000 + static_cast<std::uint64_t>(attempt));
        const CMatrix x = random_hermitian(d, rng);
        const CMatrix dir = x - twirl(x, cyc_factors);
        const double nd = dir.frobenius_norm();
        if (nd <= 1e-10) continue;
        const double eps = std::min(0.25 * mineig, 0.05) / nd;
        CMatrix h = gj + dir * Complex(eps, 0.0);
        if (is_trivial_target(h, gj, group, admissible, party, std::max(10.0 * tol, 1e-8)))
          continue;
        if (min_eigenvalue(h) <= 0.0) continue;

        Witness w;
        w.party = party;
        w.symmetries = cyc;
        w.p.assign(cyc.size(), 1.0 / static_cast<double>(cyc.size()));
        w.h_op = std::move(h);
        const double resid = witness_residual(source, group, w);
        const double povm = witness_povm_residual(source, group, w);
        if (resid > std::max(tol, 1e-9) * (1.0 + gj.frobenius_norm())) continue;
        if (povm > std::max(tol, 1e-8)) continue;
        ConvertResult out;
        out.status = Status::kCertifiedYes;
        out.witness = std::move(w);
        out.residual = resid;
        out.povm_residual = povm;
        return out;
      }
      break;  // one commuting symmetry is enough to try; fall through on failure
    }
  }

  // Bilinear path over the distinct admissible conjugations at the acting
  // party (factors that agree up to a phase conjugate identically).
  std::vector<CMatrix> factors;
  std::vector<std::size_t> factor_source;
  for (std::size_t k : admissible) {
    const CMatrix& f = group.elements[k].factors[party];
    bool dup = false;
    for (const CMatrix& kept : factors)
      if (!factor_nontrivial(f * kept.adjoint(), std::max(tol, 1e-9))) {
        dup = true;
        break;
      }
    if (!dup) {
      factors.push_back(f);
      factor_source.push_back(k);
    }
  }

  const OrbitResult orbit = orbit_search(gj, factors, tol, budget, seed);
  if (orbit.status == Status::kCertifiedNo) {
    ConvertResult out;
    out.status = Status::kCertifiedNo;
    out.residual = orbit.residual;
    return out;
  }
  if (orbit.status != Status::kCertifiedYes) return inconclusive_with(orbit);

  Witness w;
  w.party = party;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (orbit.p[i] <= 1e-12) continue;
    w.symmetries.push_back(static_cast<int>(factor_source[i]));
    w.p.push_back(orbit.p[i]);
  }
  double total = 0.0;
  for (double v : w.p) total += v;
  if (w.p.empty() || total <= 0.0) return inconclusive_with(orbit);
  for (double& v : w.p) v /= total;
  w.h_op = orbit.h_op;

  const double resid = witness_residual(source, group, w);
  const double povm = witness_povm_residual(source, group, w);
  if (resid > std::max(tol * (1.0 + gj.frobenius_norm()), 1e-8) ||
      povm > std::max(tol, 1e-8) ||
      is_trivial_target(w.h_op, gj, group, admissible, party, std::max(10.0 * tol, 1e-8)))
    return inconclusive_with(orbit);

  ConvertResult out;
  out.status = Status::kCertifiedYes;
  out.witness = std::move(w);
  out.residual = resid;
  out.povm_residual = povm;
  return out;
}

bool check_mes_convertible(const StateInClass& state, const StabilizerGroup& group,
                           double tol) {
  require_shapes(state, group);
  const auto table = commute_table(state, group, tol);
  const int n = state.parties();

  bool fully_commuting = false;
  for (std::size_t k = 0; k < group.size() && !fully_commuting; ++k) {
    if (k == group.identity_index) continue;
    bool all = true;
    for (int i = 0; i < n; ++i) all = all && table[k][i];
    fully_commuting = all;
  }
  if (!fully_commuting) return false;

  // A symmetry commuting everywhere but at exactly one party would make the
  // state reachable, which membership excludes.
  for (std::size_t k = 0; k < group.size(); ++k) {
    int bad_count = 0;
    for (int i = 0; i < n; ++i)
      if (!table[k][i]) ++bad_count;
    if (bad_count == 1) return false;
  }
  return true;
}

SimplexFeasibility sep_check(const StateInClass& source, const StateInClass& target,
                             const StabilizerGroup& group, double tol) {
  require_shapes(source, group);
  require_shapes(target, group);
  if (!source.class_id.empty() && !target.class_id.empty() &&
      source.class_id != target.class_id)
    throw std::invalid_argument("sep_check: states belong to different classes");

  const int n = source.parties();
  const std::size_t m = group.size();
  std::size_t total_dim = 1;
  for (const auto& op : source.ops) total_dim *= op.rows();

  // Conjugated target operators per element and party.
  std::vector<std::vector<CMatrix>> conj(m);
  for (std::size_t k = 0; k < m; ++k) {
    conj[k].reserve(n);
    for (int i = 0; i < n; ++i) {
      const CMatrix& f = group.elements[k].factors[i];
      conj[k].push_back(f.adjoint() * target.ops[i] * f);
    }
  }

  if (total_dim <= 22) {
    std::vector<CMatrix> cols_f;
    cols_f.reserve(m);
    for (std::size_t k = 0; k < m; ++k) cols_f.push_back(tensor(conj[k]));
    const CMatrix b_full = tensor(source.ops);
    std::vector<std::vector<double>> columns;
    columns.reserve(m);
    for (const auto& c : cols_f) columns.push_back(vectorize_hermitian(c));
    return simplex_solve(columns, vectorize_hermitian(b_full), tol);
  }

  // Beyond dense scale the problem is reduced through the Gram matrix of the
  // m+1 tensors; inner products factor over parties, and the reduced
  // coordinates reproduce every affine-combination norm exactly.
  auto pair_inner = [&](const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
    double prod = 1.0;
    for (int i = 0; i < n; ++i) prod *= frobenius_inner(a[i], b[i]).real();
    return prod;
  };
  const std::size_t dim = m + 1;  // slot 0 holds the source tensor
  CMatrix gram(dim, dim);
  for (std::size_t a = 0; a < dim; ++a)
    for (std::size_t b = a; b < dim; ++b) {
      const std::vector<CMatrix>& va = (a == 0) ? source.ops : conj[a - 1];
      const std::vector<CMatrix>& vb = (b == 0) ? source.ops : conj[b - 1];
      const double v = pair_inner(va, vb);
      gram(a, b) = Complex(v, 0.0);
      gram(b, a) = Complex(v, 0.0);
    }
  const EigenSys es = hermitian_eigen(gram);
  std::vector<std::vector<double>> coords(dim, std::vector<double>(dim, 0.0));
  for (std::size_t r = 0; r < dim; ++r) {
    const double lam = std::max(es.values[r], 0.0);
    const double s = std::sqrt(lam);
    for (std::size_t a = 0; a < dim; ++a)
      coords[a][r] = s * es.vectors(a, r).real();
  }
  std::vector<std::vector<double>> columns(coords.begin() + 1, coords.end());
  return simplex_solve(columns, coords[0], std::max(tol, 1e-7));
}

StateInClass sep_source_construct(const StateInClass& target, const LocalSymmetry& symmetry,
                                  int party, double p) {
  if (party < 0 || party >= target.parties())
    throw std::invalid_argument("sep_source_construct: party index out of range");
  if (symmetry.parties() != target.parties())
    throw std::invalid_argument("sep_source_construct: symmetry party count mismatch");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("sep_source_construct: p outside (0,1)");
  const CMatrix& f = symmetry.factors[party];
  const CMatrix& h = target.ops[party];
  const CMatrix mixed = h * Complex(p, 0.0) + f.adjoint() * h * f * Complex(1.0 - p, 0.0);
  return target.with_op(party, mixed);
}

double witness_residual(const StateInClass& source, const StabilizerGroup& group,
                        const Witness& w) {
  require_shapes(source, group);
  if (w.party < 0 || w.party >= source.parties())
    throw std::invalid_argument("witness: party index out of range");
  if (w.symmetries.size() != w.p.size() || w.symmetries.empty())
    throw std::invalid_argument("witness: symmetry and weight lists disagree");
  const CMatrix& gj = source.ops[w.party];
  CMatrix acc(gj.rows(), gj.cols());
  for (std::size_t k = 0; k < w.symmetries.size(); ++k) {
    const int idx = w.symmetries[k];
    if (idx < 0 || static_cast<std::size_t>(idx) >= group.size())
      throw std::invalid_argument("witness: symmetry index out of range");
    const CMatrix& f = group.elements[idx].factors[w.party];
    acc = acc + f.adjoint() * w.h_op * f * Complex(w.p[k], 0.0);
  }
  return (acc - gj).frobenius_norm();
}

double witness_povm_residual(const StateInClass& source, const StabilizerGroup& group,
                             const Witness& w) {
  require_shapes(source, group);
  if (w.party < 0 || w.party >= source.parties())
    throw std::invalid_argument("witness: party index out of range");
  const CMatrix& gj = source.ops[w.party];
  const CMatrix ginv = psd_inv_sqrt(gj, 1e-8, 1e-10);
  const CMatrix h = psd_sqrt(w.h_op, 1e-8);
  CMatrix acc(gj.rows(), gj.cols());
  for (std::size_t k = 0; k < w.symmetries.size(); ++k) {
    const int idx = w.symmetries[k];
    if (idx < 0 || static_cast<std::size_t>(idx) >= group.size())
      throw std::invalid_argument("witness: symmetry index out of range");
    const CMatrix a = h * group.elements[idx].factors[w.party] * ginv * Complex(std::sqrt(w.p[k]), 0.0);
    acc = acc + a.adjoint() * a;
  }
  return (acc - CMatrix::identity(gj.rows())).frobenius_norm();
}

LockReport lock_report(const StateInClass& state, const StabilizerGroup& group,
                       const Witness* step, double tol, int budget, std::uint64_t seed) {
  require_shapes(state, group);
  LockReport out;
  out.prop_commute = pairwise_prop_commute(group, tol);
  for (int j = 0; j < state.parties(); ++j)
    out.before.push_back(check_convertible(state, group, j, tol, budget, seed).status);
  if (step == nullptr) return out;

  const double resid = witness_residual(state, group, *step);
  if (resid > std::max(tol * 10.0, 1e-8))
    throw std::invalid_argument("lock_report: step witness does not reproduce the state");
  const StateInClass stepped = state.with_op(step->party, step->h_op);
  for (int j = 0; j < state.parties(); ++j)
    out.after.push_back(check_convertible(stepped, group, j, tol, budget, seed).status);

  for (int j = 0; j < state.parties(); ++j) {
    if (j == step->party) continue;  // locking concerns the non-acting parties
    if (out.before[j] == Status::kCertifiedYes && out.after[j] == Status::kCertifiedNo)
      out.locked.push_back(j);
    if (out.before[j] == Status::kCertifiedNo && out.after[j] == Status::kCertifiedYes)
      out.unlocked.push_back(j);
  }
  if (out.prop_commute && !out.unlocked.empty())
    throw std::runtime_error(
        "lock_report: unlocking observed under a pairwise proportional-commuting group");
  return out;
}

Classification classify(const StateInClass& state, const StabilizerGroup& group, double tol,
                        int budget, std::uint64_t seed) {
  require_shapes(state, group);
  Classification out;
  out.reach = check_reachable(state, group, tol);
  out.mes_member = !out.reach.reachable;
  out.mes_convertible = check_mes_convertible(state, group, tol);
  bool any_yes = false;
  bool all_no = true;
  for (int j = 0; j < state.parties(); ++j) {
    out.convertible.push_back(check_convertible(state, group, j, tol, budget, seed));
    const Status s = out.convertible.back().status;
    any_yes = any_yes || s == Status::kCertifiedYes;
    all_no = all_no && s == Status::kCertifiedNo;
  }
  if (out.reach.reachable || any_yes)
    out.isolated = Status::kCertifiedNo;
  else if (all_no)
    out.isolated = Status::kCertifiedYes;
  else
    out.isolated = Status::kInconclusive;
  return out;
}

}  // namespace loccn
