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

#include "loccn/protocol.hpp"

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace loccn {

namespace {

constexpr double kZeroWeight = 1e-12;

double branch_norm2(const std::vector<CMatrix>& ops, const StateVector& rep) {
  const double n = apply_local(ops, rep).norm();
  return n * n;
}

void check_tree(const StateInClass& state, const ProtocolTree& tree, const ClassSpec& spec) {
  const int n = spec.parties();
  if (state.parties() != n) throw std::invalid_argument("run_tree: party count mismatch");
  if (!state.class_id.empty() && !spec.name.empty() && state.class_id != spec.name)
    throw std::invalid_argument("run_tree: state class disagrees with the supplied class");
  for (int i = 0; i < n; ++i) {
    const auto d = static_cast<std::size_t>(spec.dims[i]);
    if (state.ops[i].rows() != d || state.ops[i].cols() != d)
      throw std::invalid_argument("run_tree: state operator dimension mismatch");
  }
  if (tree.nodes.empty()) throw std::invalid_argument("run_tree: tree has no nodes");
  for (std::size_t idx = 0; idx < tree.nodes.size(); ++idx) {
    const ProtocolNode& node = tree.nodes[idx];
    if (node.party < 0 || node.party >= n)
      throw std::invalid_argument("run_tree: acting party out of range");
    if (node.outcomes.empty()) throw std::invalid_argument("run_tree: node without outcomes");
    const auto d = static_cast<std::size_t>(spec.dims[node.party]);
    for (const ProtocolOutcome& out : node.outcomes) {
      if (out.measurement.rows() != d || out.measurement.cols() != d)
        throw std::invalid_argument("run_tree: measurement dimension mismatch");
      if (!out.unitaries.empty()) {
        if (static_cast<int>(out.unitaries.size()) != n)
          throw std::invalid_argument("run_tree: conditioned unitary count mismatch");
        for (int i = 0; i < n; ++i) {
          const auto di = static_cast<std::size_t>(spec.dims[i]);
          const CMatrix& u = out.unitaries[i];
          if (u.rows() != di || u.cols() != di)
            throw std::invalid_argument("run_tree: conditioned unitary dimension mismatch");
          if (!u.is_unitary(1e-8))
            throw std::invalid_argument("run_tree: conditioned operator is not unitary");
        }
      }
      if (out.child >= 0) {
        if (out.child <= static_cast<int>(idx) || out.child >= static_cast<int>(tree.nodes.size()))
          throw std::invalid_argument("run_tree: child indices must point forward in the node list");
        if (out.leaf.has_value())
          throw std::invalid_argument("run_tree: outcome carries both a child and a leaf");
      }
    }
  }
}

std::vector<double> to_vec(const BlochVec& v) { return {v.x, v.y, v.z}; }

BlochVec sigma3_reflect(const BlochVec& v) { return {-v.x, -v.y, v.z}; }

}  // namespace

double validate_povm(const std::vector<CMatrix>& ops) {
  if (ops.empty()) throw std::invalid_argument("validate_povm: no operators");
  const std::size_t d = ops.front().rows();
  for (const CMatrix& m : ops) {
    if (m.rows() != d || m.cols() != d || d == 0)
      throw std::invalid_argument("validate_povm: operators must be square with equal dims");
  }
  CMatrix acc(d, d);
  for (const CMatrix& m : ops) acc += m.adjoint() * m;
  return (acc - CMatrix::identity(d)).frobenius_norm();
}

RunReport run_tree(const StateInClass& state, const ProtocolTree& tree, const ClassSpec& spec,
                   double tol) {
  check_tree(state, tree, spec);
  const double node_tol = std::max(10.0 * tol, 1e-8);
  const double lu_tol = std::max(tol, 1e-8);

  RunReport report;
  std::vector<CMatrix> root_ops;
  root_ops.reserve(state.ops.size());
  for (const CMatrix& g : state.ops) root_ops.push_back(psd_sqrt(g, 1e-8));

  auto walk = [&](auto&& self, int node_idx, const std::vector<CMatrix>& ops, double prob,
                  std::vector<int>& path) -> void {
    const ProtocolNode& node = tree.nodes[node_idx];
    std::vector<CMatrix> ms;
    ms.reserve(node.outcomes.size());
    for (const ProtocolOutcome& out : node.outcomes) ms.push_back(out.measurement);
    report.max_povm_residual = std::max(report.max_povm_residual, validate_povm(ms));

    const double n_here = branch_norm2(ops, spec.representative);
    if (n_here <= 1e-300) throw std::runtime_error("run_tree: branch state vanished");

    double cond_sum = 0.0;
    for (std::size_t k = 0; k < node.outcomes.size(); ++k) {
      const ProtocolOutcome& out = node.outcomes[k];
      std::vector<CMatrix> next = ops;
      next[node.party] = out.measurement * next[node.party];
      if (!out.unitaries.empty()) {
        for (std::size_t i = 0; i < next.size(); ++i) next[i] = out.unitaries[i] * next[i];
      }
      const double cond = branch_norm2(next, spec.representative) / n_here;
      cond_sum += cond;
      if (cond <= kZeroWeight) continue;  // dead branch, carries no state
      path.push_back(static_cast<int>(k));
      if (out.child >= 0) {
        self(self, out.child, next, prob * cond, path);
      } else {
        BranchLeaf leaf;
        leaf.path = path;
        leaf.probability = prob * cond;
        std::vector<CMatrix> gs;
        gs.reserve(next.size());
        for (const CMatrix& c : next) {
          CMatrix a = c.adjoint() * c;
          const double tr = a.trace().real();
          if (tr <= 1e-300) throw std::runtime_error("run_tree: leaf operator lost its trace");
          gs.push_back(a * Complex(1.0 / tr, 0.0));
        }
        leaf.state = StateInClass::make(spec.name, std::move(gs), std::max(tol, 1e-7));
        if (out.leaf.has_value()) {
          leaf.matches_declared =
              lu_equiv_in_class(leaf.state, *out.leaf, spec.stabilizer, lu_tol).has_value();
          report.matches_declared = report.matches_declared && leaf.matches_declared;
        }
        report.total_probability += leaf.probability;
        report.leaves.push_back(std::move(leaf));
      }
      path.pop_back();
    }
    if (std::abs(cond_sum - 1.0) > node_tol)
      throw std::runtime_error("run_tree: outcome probabilities fail to sum to 1 at a node");
  };

  std::vector<int> path;
  walk(walk, 0, root_ops, 1.0, path);

  report.deterministic = !report.leaves.empty();
  for (std::size_t k = 1; k < report.leaves.size() && report.deterministic; ++k) {
    report.deterministic = lu_equiv_in_class(report.leaves[k].state, report.leaves.front().state,
                                             spec.stabilizer, lu_tol)
                               .has_value();
  }
  return report;
}

RunReport run_tree(const StateInClass& state, const ProtocolTree& tree, double tol) {
  const ClassSpec* spec = find_builtin_class(state.class_id);
  if (spec == nullptr)
    throw std::invalid_argument("run_tree: state class is not built in; supply a ClassSpec");
  return run_tree(state, tree, *spec, tol);
}

std::optional<int> lu_equiv_in_class(const StateInClass& a, const StateInClass& b,
                                     const StabilizerGroup& group, double tol) {
  if (group.size() == 0) throw std::invalid_argument("lu_equiv_in_class: empty group");
  const int n = group.parties();
  if (a.parties() != n || b.parties() != n)
    throw std::invalid_argument("lu_equiv_in_class: party count mismatch");
  for (int i = 0; i < n; ++i) {
    if (a.ops[i].rows() != b.ops[i].rows() ||
        a.ops[i].rows() != group.elements.front().factors[i].rows())
      throw std::invalid_argument("lu_equiv_in_class: operator dimension mismatch");
  }
  // Unit traces make the tensor comparison factor-wise exact: any scalar
  // split between parties is fixed to 1 by the traces.
  for (std::size_t k = 0; k < group.size(); ++k) {
    const LocalSymmetry& s = group.elements[k];
    bool match = true;
    for (int i = 0; i < n && match; ++i) {
      const CMatrix& f = s.factors[i];
      const CMatrix moved = f.adjoint() * a.ops[i] * f;
      match = (moved - b.ops[i]).frobenius_norm() <= tol * (1.0 + b.ops[i].frobenius_norm());
    }
    if (match) return static_cast<int>(k);
  }
  return std::nullopt;
}

ProtocolTree synth_locc1(const StateInClass& source, const StabilizerGroup& group,
                         const Witness& w, double tol) {
  const int n = source.parties();
  if (group.parties() != n)
    throw std::invalid_argument("synth_locc1: party count mismatch between state and group");
  if (w.party < 0 || w.party >= n)
    throw std::invalid_argument("synth_locc1: acting party out of range");
  if (w.symmetries.empty() || w.symmetries.size() != w.p.size())
    throw std::invalid_argument("synth_locc1: witness weights and symmetries misaligned");
  double psum = 0.0;
  for (double pk : w.p) {
    if (pk < -kZeroWeight) throw std::invalid_argument("synth_locc1: negative witness weight");
    psum += pk;
  }
  if (std::abs(psum - 1.0) > 1e-8)
    throw std::invalid_argument("synth_locc1: witness weights do not sum to 1");
  for (int k : w.symmetries) {
    if (k < 0 || k >= static_cast<int>(group.size()))
      throw std::invalid_argument("synth_locc1: symmetry index out of range");
  }
  const std::size_t dj = source.ops[w.party].rows();
  if (w.h_op.rows() != dj || w.h_op.cols() != dj)
    throw std::invalid_argument("synth_locc1: target operator dimension mismatch");

  const double scale = 1.0 + source.ops[w.party].frobenius_norm();
  if (witness_residual(source, group, w) > std::max(10.0 * tol, 1e-8) * scale)
    throw std::invalid_argument(
        "synth_locc1: witness does not reconstruct the acting party operator");

  const CMatrix h = psd_sqrt(w.h_op, 1e-8);
  const CMatrix gj_inv = psd_inv_sqrt(source.ops[w.party], 1e-8, 1e-10);
  std::vector<CMatrix> g_sqrt(n), g_inv(n);
  for (int i = 0; i < n; ++i) {
    if (i == w.party) continue;
    g_sqrt[i] = psd_sqrt(source.ops[i], 1e-8);
    g_inv[i] = psd_inv_sqrt(source.ops[i], 1e-8, 1e-10);
  }

  const StateInClass target = source.with_op(w.party, w.h_op, std::max(tol, 1e-7));

  ProtocolNode node;
  node.party = w.party;
  std::vector<CMatrix> ms;
  for (std::size_t k = 0; k < w.symmetries.size(); ++k) {
    if (w.p[k] <= kZeroWeight) continue;  // zero-weight outcomes dropped
    const LocalSymmetry& s = group.elements[static_cast<std::size_t>(w.symmetries[k])];
    ProtocolOutcome out;
    out.measurement = h * s.factors[w.party] * gj_inv * Complex(std::sqrt(w.p[k]), 0.0);
    out.unitaries.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      if (i == w.party) {
        out.unitaries[static_cast<std::size_t>(i)] = CMatrix::identity(dj);
        continue;
      }
      CMatrix u = g_sqrt[i] * s.factors[i] * g_inv[i];
      if (!u.is_unitary(1e-7)) {
        std::ostringstream msg;
        msg << "synth_locc1: conditioned operator at party " << i
            << " is not unitary; the witness symmetry does not commute there";
        throw std::invalid_argument(msg.str());
      }
      out.unitaries[static_cast<std::size_t>(i)] = std::move(u);
    }
    out.leaf = target;
    ms.push_back(out.measurement);
    node.outcomes.push_back(std::move(out));
  }
  if (node.outcomes.empty())
    throw std::invalid_argument("synth_locc1: every witness weight vanishes");
  if (validate_povm(ms) > std::max(10.0 * tol, 1e-8))
    throw std::invalid_argument("synth_locc1: synthesized measurement is incomplete");

  ProtocolTree tree;
  tree.nodes.push_back(std::move(node));
  return tree;
}

TwoStepSynthesis synth_two_step_L(const BlochVec& g1, const BlochVec& g2, const BlochVec& h2,
                                  double tol) {
  if (std::abs(g1.x - g1.y) > 1e-9)
    throw std::invalid_argument("synth_two_step_L: g1 first two components unequal");
  if (std::abs(g1.z) <= 1e-12)
    throw std::invalid_argument("synth_two_step_L: g1 z component vanishes");
  const double x = g1.z;
  const double p = 0.5 * (g1.x / x + 1.0);
  if (p <= 1e-9 || p >= 1.0 - 1e-9)
    throw std::invalid_argument("synth_two_step_L: first-round weight p outside (0,1)");
  const BlochVec h1{x, x, x};
  const double ball = 0.5 - 1e-8;
  if (g1.norm() >= ball) throw std::invalid_argument("synth_two_step_L: g1 outside the Bloch ball");
  if (g2.norm() >= ball) throw std::invalid_argument("synth_two_step_L: g2 outside the Bloch ball");
  if (h2.norm() >= ball) throw std::invalid_argument("synth_two_step_L: h2 outside the Bloch ball");
  if (h1.norm() >= ball)
    throw std::invalid_argument("synth_two_step_L: induced h1 outside the Bloch ball");
  if (std::abs(h2.x + h2.y + h2.z) > 1e-9)
    throw std::invalid_argument("synth_two_step_L: h2 components do not sum to zero");

  const ClassSpec& spec = *find_builtin_class("L");
  const CMatrix big_g1 = bloch_encode(g1);
  const CMatrix big_g2 = bloch_encode(g2);
  for (std::size_t k = 0; k < spec.stabilizer.size(); ++k) {
    if (k == spec.stabilizer.identity_index) continue;
    const CMatrix& f = spec.stabilizer.elements[k].factors[0];
    if (commutes(big_g1, f, 1e-9).first)
      throw std::invalid_argument(
          "synth_two_step_L: g1 commutes with a nontrivial symmetry (source not blocked)");
    if (commutes(big_g2, f, 1e-9).first)
      throw std::invalid_argument(
          "synth_two_step_L: g2 commutes with a nontrivial symmetry (source not blocked)");
  }

  const CMatrix& u = l_symmetry_u();
  const CMatrix h2_op = bloch_encode(h2);
  const std::vector<CMatrix> vlist = {CMatrix::identity(2), u, u.adjoint()};
  std::vector<std::vector<double>> cols;
  cols.reserve(vlist.size());
  for (const CMatrix& v : vlist) cols.push_back(to_vec(bloch_decode(v.adjoint() * h2_op * v)));

  const SimplexFeasibility lp1 = hull_membership(cols, to_vec(g2), 1e-9, true);
  if (lp1.status != Status::kCertifiedYes || !lp1.plane_ok.value_or(false))
    throw std::invalid_argument(
        "synth_two_step_L: branch-1 weights infeasible (g2 outside the h2 symmetry triangle)");
  const SimplexFeasibility lp2 = hull_membership(cols, to_vec(sigma3_reflect(g2)), 1e-9, true);
  if (lp2.status != Status::kCertifiedYes || !lp2.plane_ok.value_or(false))
    throw std::invalid_argument(
        "synth_two_step_L: branch-2 weights infeasible (reflected g2 outside the h2 symmetry "
        "triangle)");

  const CMatrix h1_op = bloch_encode(h1);
  const CMatrix h1_sqrt = psd_sqrt(h1_op, 1e-9);
  const CMatrix h1_inv = psd_inv_sqrt(h1_op, 1e-9, 1e-10);
  const CMatrix h2_sqrt = psd_sqrt(h2_op, 1e-9);
  const CMatrix g1_inv = psd_inv_sqrt(big_g1, 1e-9, 1e-10);
  const CMatrix g2_inv = psd_inv_sqrt(big_g2, 1e-9, 1e-10);
  const CMatrix& s3 = pauli(3);
  const CMatrix id2 = CMatrix::identity(2);

  const BlochVec origin{};
  const StateInClass final_state = StateInClass::from_bloch("L", {h1, h2, origin, origin});

  ProtocolTree tree;
  tree.nodes.resize(3);
  // Round 1 at party 0 applies no conditioned action elsewhere; the two
  // branches are then genuinely inequivalent intermediate states.
  ProtocolNode& root = tree.nodes[0];
  root.party = 0;
  {
    ProtocolOutcome keep;
    keep.measurement = h1_sqrt * g1_inv * Complex(std::sqrt(p), 0.0);
    keep.child = 1;
    root.outcomes.push_back(std::move(keep));
    ProtocolOutcome flip;
    flip.measurement = h1_sqrt * s3 * g1_inv * Complex(std::sqrt(1.0 - p), 0.0);
    flip.child = 2;
    root.outcomes.push_back(std::move(flip));
  }
  for (int b = 0; b < 2; ++b) {
    ProtocolNode& node = tree.nodes[static_cast<std::size_t>(1 + b)];
    node.party = 1;
    const std::vector<double>& weights = (b == 0) ? lp1.p : lp2.p;
    for (std::size_t i = 0; i < vlist.size(); ++i) {
      if (weights[i] <= kZeroWeight) continue;  // zero-weight outcomes dropped
      const CMatrix& v = vlist[i];
      const CMatrix vs = (b == 0) ? v : v * s3;  // branch 2 undoes the sigma3 shift
      ProtocolOutcome out;
      out.measurement = h2_sqrt * vs * g2_inv * Complex(std::sqrt(weights[i]), 0.0);
      CMatrix w0 = h1_sqrt * v * h1_inv;
      if (!w0.is_unitary(1e-8))
        throw std::runtime_error("synth_two_step_L: party-1 conditioned operator is not unitary");
      out.unitaries = {std::move(w0), id2, vs, vs};
      out.leaf = final_state;
      node.outcomes.push_back(std::move(out));
    }
  }

  const StateInClass inter1 = StateInClass::from_bloch("L", {h1, g2, origin, origin});
  const StateInClass inter2 =
      StateInClass::from_bloch("L", {sigma3_reflect(h1), g2, origin, origin});
  if (lu_equiv_in_class(inter1, inter2, spec.stabilizer, 1e-8).has_value())
    throw std::runtime_error(
        "synth_two_step_L: the two intermediate branches are locally equivalent");

  TwoStepSynthesis synth;
  synth.tree = std::move(tree);
  synth.p = p;
  synth.q = lp1.p;
  synth.q_tilde = lp2.p;
  synth.h1 = h1;

  const StateInClass source = StateInClass::from_bloch("L", {g1, g2, origin, origin});
  synth.verification = run_tree(source, synth.tree, spec, std::max(tol, 1e-9));
  if (!synth.verification.deterministic || !synth.verification.matches_declared)
    throw std::runtime_error("synth_two_step_L: synthesized tree failed its own verification");

  std::vector<double> expected;
  for (std::size_t i = 0; i < vlist.size(); ++i) {
    if (lp1.p[i] > kZeroWeight) expected.push_back(p * lp1.p[i]);
  }
  for (std::size_t i = 0; i < vlist.size(); ++i) {
    if (lp2.p[i] > kZeroWeight) expected.push_back((1.0 - p) * lp2.p[i]);
  }
  if (expected.size() != synth.verification.leaves.size())
    throw std::runtime_error("synth_two_step_L: leaf count disagrees with the nonzero weights");
  for (std::size_t k = 0; k < expected.size(); ++k) {
    if (std::abs(expected[k] - synth.verification.leaves[k].probability) > 1e-8)
      throw std::runtime_error(
          "synth_two_step_L: measured branch probabilities disagree with the declared weights");
  }
  return synth;
}

}  // namespace loccn
