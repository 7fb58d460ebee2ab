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
#include <functional>
#include <string>
#include <vector>

#include "loccn/classes.hpp"
#include "loccn/feasible.hpp"
#include "loccn/groups.hpp"
#include "loccn/linalg.hpp"
#include "loccn/state.hpp"

namespace loccn {

/// Parameter slice a volume is measured on.  All sampled states satisfy the
/// state invariants (strict Bloch interior on qubit parties).
struct Slice {
  enum class Kind { kPartyBall, kSegment, kCustom };

  Kind kind = Kind::kPartyBall;
  StateInClass base;  // fixed operators; the varied party is replaced per draw
  int party = 0;
  CMatrix h_op;            // segment endpoint at t = 1
  LocalSymmetry symmetry;  // segment endpoint at t = 0 is S^dag h S
  std::string sampler;     // custom kind: registered sampler id
  int sample_dim = 0;
};

Slice party_ball_slice(StateInClass base, int party);
Slice segment_slice(StateInClass base, int party, CMatrix h_op, LocalSymmetry symmetry);
Slice custom_slice(StateInClass base, std::string sampler_id);

using SliceSampler =
    std::function<StateInClass(const Slice&, std::uint64_t seed, std::uint64_t index)>;

/// Registers a custom sampler under an id usable in Slice::sampler.
void register_slice_sampler(const std::string& id, SliceSampler fn);

/// Deterministic draw: the same (seed, index) always yields the same state,
/// independent of evaluation order.  Party-ball draws the Bloch vector
/// uniformly from the open ball of radius 1/2 - 1e-6; segment draws
/// t uniform in [0, 1) and interpolates t h + (1-t) S^dag h S.
StateInClass sample_state(const Slice& slice, std::uint64_t seed, std::uint64_t index);

/// One deterministic step at `party`: can the source reach the state whose
/// party operator is replaced by target_j?  Exact linear feasibility over the
/// admissible symmetries (those commuting with every bystander operator).
SimplexFeasibility all_det_step(const StateInClass& source, const CMatrix& target_j, int party,
                                const StabilizerGroup& group, double tol = kDefaultTol);

struct ChainStep {
  int party = -1;
  std::vector<std::size_t> symmetries;  // admissible group indices, aligned with p
  std::vector<double> p;
  double residual = 0.0;
};

/// Direct-chain search result.  A yes is a certified deterministic protocol
/// (each step realizable as a one-round tree); a no only exhausts this model,
/// which jumps every differing party straight to its target operator, and is
/// never a certificate of impossibility.
struct ChainResult {
  bool yes = false;
  std::vector<int> order;
  std::vector<ChainStep> steps;
};

/// Tries every ordering of the parties whose operators differ (at most 4 for
/// the factorial scan); already-processed parties sit at their target
/// operators while the rest stay at the source.
ChainResult all_det_chain(const StateInClass& source, const StateInClass& target,
                          const StabilizerGroup& group, double tol = kDefaultTol);

enum class VolumeKind { kAccessible, kSource };

struct VolumeEstimate {
  std::uint64_t hits = 0;
  std::uint64_t samples = 0;
  double fraction = 0.0;
  double half_width = 0.0;  // 95% normal approximation
  std::uint64_t seed = 0;
};

/// Monte-Carlo fraction of the slice reachable from the anchor (accessible)
/// or reaching the anchor (source), under the direct-chain model.  The result
/// is bit-identical for a fixed seed whatever the thread count.
VolumeEstimate estimate_volume(VolumeKind kind, const StateInClass& anchor, const Slice& slice,
                               const StabilizerGroup& group, std::uint64_t samples,
                               std::uint64_t seed, int threads = 1);

/// Accessible: V / v_sup.  Source: 1 - V / v_sup.
double entanglement_ratio(const VolumeEstimate& v, double v_sup, VolumeKind kind);

/// Fraction of states, all parties drawn uniformly from the Bloch ball, that
/// are reachable at all.  Zero in exact arithmetic: reachability needs an
/// operator aligned with one of finitely many symmetry axes.
VolumeEstimate corollary2_fraction(const ClassSpec& spec, std::uint64_t samples,
                                   std::uint64_t seed, int threads = 1);

}  // namespace loccn
