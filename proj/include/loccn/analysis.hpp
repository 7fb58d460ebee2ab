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

#include <cstdint>
#include <optional>
#include <vector>

#include "loccn/feasible.hpp"
#include "loccn/groups.hpp"
#include "loccn/linalg.hpp"
#include "loccn/state.hpp"

namespace loccn {

struct ReachResult {
  bool reachable = false;
  int symmetry = -1;  // witnessing group element when reachable
  int party = -1;     // the single party whose operator fails to commute
};

/// One-round convertibility certificate: the acting party measures, every
/// other party answers with a conditioned unitary.  The weights live on the
/// symmetry subset given by `symmetries` (indices into the group).
struct Witness {
  int party = -1;
  std::vector<int> symmetries;
  std::vector<double> p;
  CMatrix h_op;  // target operator at the acting party, positive definite
};

struct ConvertResult {
  Status status = Status::kInconclusive;
  std::optional<Witness> witness;
  double residual = 0.0;       // |sum_k p_k S_k^dag H S_k - G_j|
  double povm_residual = 0.0;  // |sum_k A_k^dag A_k - 1| of the induced POVM
};

struct LockReport {
  std::vector<Status> before;  // per-party one-round convertibility
  std::vector<Status> after;   // empty when no step was supplied
  std::vector<int> locked;     // parties that go convertible -> not
  std::vector<int> unlocked;   // parties that go not -> convertible
  bool prop_commute = false;   // pairwise proportional commutation of the group
};

struct Classification {
  ReachResult reach;
  std::vector<ConvertResult> convertible;  // indexed by acting party
  bool mes_member = false;                 // equivalent to not reachable
  bool mes_convertible = false;
  Status isolated = Status::kInconclusive;
};

/// Is the state reachable by a finite-round protocol from some inequivalent
/// state of the class?  True iff a non-identity symmetry commutes with the
/// state operators at every party except exactly one.  The witness is the
/// first hit in (element index, party index) order.
ReachResult check_reachable(const StateInClass& target, const StabilizerGroup& group,
                            double tol = kDefaultTol);

/// One-round convertibility with the given acting party.  Certified-no when
/// every admissible symmetry acts as a multiple of the identity there (only
/// the trivial target remains, which the nontriviality clause excludes).
/// When some admissible symmetry commutes with the acting party's operator,
/// a target is constructed directly by perturbing away from the commutant of
/// its cyclic subgroup; otherwise the bilinear search decides or reports
/// inconclusive.  Certified-yes witnesses always satisfy the nontriviality
/// clause: the target operator is no conjugate of the source operator by an
/// admissible symmetry.
ConvertResult check_convertible(const StateInClass& source, const StabilizerGroup& group,
                                int party, double tol = kDefaultTol, int budget = 64,
                                std::uint64_t seed = 0);

/// Membership in the maximally entangled set together with all-deterministic
/// convertibility: some non-identity symmetry commutes at every party, and no
/// symmetry commutes everywhere except exactly one party.
bool check_mes_convertible(const StateInClass& state, const StabilizerGroup& group,
                           double tol = kDefaultTol);

/// Exact separable-map feasibility between two states of the same class:
/// does a distribution p over the whole group satisfy
/// sum_k p_k S_k^dag (x)H_i S_k = (x)G_i?  Solved as a linear feasibility
/// problem; beyond small total dimensions the columns are reduced through
/// their Gram matrix (inner products factor over parties), which preserves
/// every residual.  The decision threshold is floored at 1e-7 on the reduced
/// path.
SimplexFeasibility sep_check(const StateInClass& source, const StateInClass& target,
                             const StabilizerGroup& group, double tol = kDefaultTol);

/// Source state that reaches `target` by construction: party j's operator is
/// replaced by p H_j + (1-p) S^(j)dag H_j S^(j).
StateInClass sep_source_construct(const StateInClass& target, const LocalSymmetry& symmetry,
                                  int party, double p);

/// Reconstruction residual of a witness against the source state.
double witness_residual(const StateInClass& source, const StabilizerGroup& group,
                        const Witness& w);

/// Completeness residual of the measurement induced by a witness,
/// A_k = sqrt(p_k) h S_k^(j) g_j^{-1}.
double witness_povm_residual(const StateInClass& source, const StabilizerGroup& group,
                             const Witness& w);

/// Per-party convertibility before and, when a step witness is supplied,
/// after replacing the acting party's operator by the witness target.
/// Errors if the group commutes pairwise up to phases yet some party turns
/// convertible, which no one-round step can cause then.
LockReport lock_report(const StateInClass& state, const StabilizerGroup& group,
                       const Witness* step = nullptr, double tol = kDefaultTol,
                       int budget = 64, std::uint64_t seed = 0);

/// Aggregate taxonomy: reachability, per-party convertibility, membership in
/// the maximally entangled set, and isolation.  Isolation is certified only
/// when reachability is false and every party's convertibility is certified
/// no; a single inconclusive party makes it inconclusive.
Classification classify(const StateInClass& state, const StabilizerGroup& group,
                        double tol = kDefaultTol, int budget = 64, std::uint64_t seed = 0);

}  // namespace loccn
