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

#pragma once

#include <optional>
#include <vector>

#include "loccn/analysis.hpp"
#include "loccn/classes.hpp"
#include "loccn/groups.hpp"
#include "loccn/linalg.hpp"
#include "loccn/state.hpp"

namespace loccn {

/// One measurement outcome: the operator applied at the acting party, the
/// outcome-conditioned unitaries (one per party, empty meaning all identity),
/// and either a child node index or a declared leaf state.
struct ProtocolOutcome {
  CMatrix measurement;
  std::vector<CMatrix> unitaries;
  int child = -1;  // index into ProtocolTree::nodes; -1 marks a leaf
  std::optional<StateInClass> leaf;
};

struct ProtocolNode {
  int party = -1;
  std::vector<ProtocolOutcome> outcomes;
};

/// Finite-round protocol.  Node 0 is the root; children always come after
/// their parent in the node list, which keeps the tree acyclic by
/// construction.
struct ProtocolTree {
  std::vector<ProtocolNode> nodes;
};

/// Frobenius residual of the completeness relation sum_k M_k^dag M_k = 1.
double validate_povm(const std::vector<CMatrix>& ops);

struct BranchLeaf {
  std::vector<int> path;  // outcome indices from the root
  double probability = 0.0;
  StateInClass state;
  bool matches_declared = true;
};

struct RunReport {
  std::vector<BranchLeaf> leaves;
  bool deterministic = false;     // all leaves mutually LU-equivalent in class
  bool matches_declared = true;   // every declared leaf is reproduced
  double total_probability = 0.0;
  double max_povm_residual = 0.0;
};

/// Simulates every branch on the class representative: the acting party's
/// operator is multiplied by the measurement, every other party by its
/// conditioned unitary, and branch probabilities come from the statevector
/// norms.  Errors on shape mismatches, non-unitary conditioned operators and
/// per-node probability deficits.
RunReport run_tree(const StateInClass& state, const ProtocolTree& tree, const ClassSpec& spec,
                   double tol = kDefaultTol);

/// Same, resolving the class from the state's id among the built-in classes.
RunReport run_tree(const StateInClass& state, const ProtocolTree& tree, double tol = kDefaultTol);

/// Whether some group element conjugates a's operators party-wise into b's.
/// Unit traces make factor-wise comparison exact for the full tensor.
std::optional<int> lu_equiv_in_class(const StateInClass& a, const StateInClass& b,
                                     const StabilizerGroup& group, double tol = kDefaultTol);

/// One-round tree realizing a convertibility witness: measurement operators
/// sqrt(p_k) h S_k^(j) g_j^{-1} and bystander unitaries g_i S_k^(i) g_i^{-1}.
/// Errors when some bystander operator fails to be unitary (the symmetry does
/// not commute with that party's operator) or the measurement is incomplete.
ProtocolTree synth_locc1(const StateInClass& source, const StabilizerGroup& group,
                         const Witness& witness, double tol = kDefaultTol);

struct TwoStepSynthesis {
  ProtocolTree tree;
  double p = 0.0;              // first-round weight on the unshifted outcome
  std::vector<double> q;       // second-round weights, branch 1, column order 1/U/Udag
  std::vector<double> q_tilde; // second-round weights, branch 2, same order
  BlochVec h1;                 // forced intermediate target at party 1
  RunReport verification;      // simulation on the declared source
};

/// Two-round protocol in the four-qubit class with the twelve-element
/// stabilizer: a probabilistic first measurement at party 1 followed by
/// branch-dependent second measurements at party 2 that merge both branches
/// into one final state.  Inputs are the party-1 and party-2 Bloch vectors of
/// the source and the party-2 target; the party-1 target is forced to have
/// all components equal.  Every precondition failure throws with a named
/// message; the returned tree is re-simulated and its branch weights
/// cross-checked before returning.
TwoStepSynthesis synth_two_step_L(const BlochVec& g1, const BlochVec& g2, const BlochVec& h2,
                                  double tol = kDefaultTol);

}  // namespace loccn
