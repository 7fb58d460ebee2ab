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

#include "loccn/volumes.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "loccn/analysis.hpp"
#include "loccn/rng.hpp"

namespace loccn {

namespace {

constexpr double kBallRadius = 0.5 - 1e-6;

std::map<std::string, SliceSampler>& sampler_registry() {
  static std::map<std::string, SliceSampler> registry;
  return registry;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

void require_party(const StateInClass& base, int party, const char* who) {
  if (party < 0 || party >= base.parties())
    throw std::invalid_argument(std::string(who) + ": party out of range");
}

double binomial_half_width(double fraction, std::uint64_t n) {
  return 1.96 * std::sqrt(fraction * (1.0 - fraction) / static_cast<double>(n));
}

/// Runs fn(index) for every index in [0, n), summing the boolean hits.  The
/// partition into threads never changes the result: each index owns its RNG
/// substream and the reduction is a plain sum.
std::uint64_t parallel_hits(std::uint64_t n, int threads,
                            const std::function<bool(std::uint64_t)>& fn) {
  const int workers =
      std::max(1, std::min(threads, static_cast<int>(std::min<std::uint64_t>(n, 64))));
  if (workers == 1) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) hits += fn(i) ? 1 : 0;
    return hits;
  }
  std::vector<std::uint64_t> partial(static_cast<std::size_t>(workers), 0);
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&, t]() {
      try {
        std::uint64_t local = 0;
        for (std::uint64_t i = static_cast<std::uint64_t>(t); i < n;
             i += static_cast<std::uint64_t>(workers)) {
          local += fn(i) ? 1 : 0;
        }
        partial[static_cast<std::size_t>(t)] = local;
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  std::uint64_t hits = 0;
  for (std::uint64_t part : partial) hits += part;
  return hits;
}

}  // namespace

Slice party_ball_slice(StateInClass base, int party) {
  require_party(base, party, "party_ball_slice");
  if (base.ops[party].rows() != 2)
    throw std::invalid_argument("party_ball_slice: varied party must be a qubit");
  Slice s;
  s.kind = Slice::Kind::kPartyBall;
  s.base = std::move(base);
  s.party = party;
  s.sample_dim = 3;
  return s;
}

Slice segment_slice(StateInClass base, int party, CMatrix h_op, LocalSymmetry symmetry) {
  require_party(base, party, "segment_slice");
  const std::size_t d = base.ops[party].rows();
  if (h_op.rows() != d || h_op.cols() != d)
    throw std::invalid_argument("segment_slice: endpoint operator dimension mismatch");
  if (symmetry.parties() != base.parties())
    throw std::invalid_argument("segment_slice: symmetry party count mismatch");
  if (!h_op.is_hermitian(1e-8) || std::abs(h_op.trace().real() - 1.0) > 1e-8)
    throw std::invalid_argument("segment_slice: endpoint must be Hermitian with unit trace");
  Slice s;
  s.kind = Slice::Kind::kSegment;
  s.base = std::move(base);
  s.party = party;
  s.h_op = std::move(h_op);
  s.symmetry = std::move(symmetry);
  s.sample_dim = 1;
  return s;
}

Slice custom_slice(StateInClass base, std::string sampler_id) {
  Slice s;
  s.kind = Slice::Kind::kCustom;
  s.base = std::move(base);
  s.sampler = std::move(sampler_id);
  return s;
}

void register_slice_sampler(const std::string& id, SliceSampler fn) {
  const std::lock_guard<std::mutex> lock(registry_mutex());
  sampler_registry()[id] = std::move(fn);
}

StateInClass sample_state(const Slice& slice, std::uint64_t seed, std::uint64_t index) {
  switch (slice.kind) {
    case Slice::Kind::kPartyBall: {
      Rng rng(seed, index);
      return slice.base.with_op(slice.party, bloch_encode(rng.ball(kBallRadius)));
    }
    case Slice::Kind::kSegment: {
      Rng rng(seed, index);
      const double t = rng.uniform01();
      const CMatrix& f = slice.symmetry.factors[static_cast<std::size_t>(slice.party)];
      const CMatrix moved = f.adjoint() * slice.h_op * f;
      return slice.base.with_op(slice.party,
                                slice.h_op * Complex(t, 0.0) + moved * Complex(1.0 - t, 0.0));
    }
    case Slice::Kind::kCustom: {
      SliceSampler fn;
      {
        const std::lock_guard<std::mutex> lock(registry_mutex());
        auto it = sampler_registry().find(slice.sampler);
        if (it == sampler_registry().end())
          throw std::invalid_argument("sample_state: unknown custom sampler id");
        fn = it->second;
      }
      return fn(slice, seed, index);
    }
  }
  throw std::invalid_argument("sample_state: unknown slice kind");
}

SimplexFeasibility all_det_step(const StateInClass& source, const CMatrix& target_j, int party,
                                const StabilizerGroup& group, double tol) {
  require_party(source, party, "all_det_step");
  if (group.parties() != source.parties())
    throw std::invalid_argument("all_det_step: party count mismatch between state and group");
  const std::size_t d = source.ops[static_cast<std::size_t>(party)].rows();
  if (target_j.rows() != d || target_j.cols() != d)
    throw std::invalid_argument("all_det_step: target operator dimension mismatch");
  if (!target_j.is_hermitian(1e-8) || std::abs(target_j.trace().real() - 1.0) > 1e-8)
    throw std::invalid_argument("all_det_step: target must be Hermitian with unit trace");

  const std::vector<std::size_t> adm = admissible_set(source, group, party, tol);
  std::vector<std::vector<double>> columns;
  columns.reserve(adm.size());
  for (std::size_t k : adm) {
    const CMatrix& f = group.elements[k].factors[static_cast<std::size_t>(party)];
    columns.push_back(vectorize_hermitian(f.adjoint() * target_j * f));
  }
  return simplex_solve(columns, vectorize_hermitian(source.ops[static_cast<std::size_t>(party)]),
                       std::max(tol, 1e-9));
}

ChainResult all_det_chain(const StateInClass& source, const StateInClass& target,
                          const StabilizerGroup& group, double tol) {
  if (source.parties() != target.parties())
    throw std::invalid_argument("all_det_chain: party count mismatch");
  if (source.class_id != target.class_id)
    throw std::invalid_argument("all_det_chain: states belong to different classes");
  const double eps = std::max(tol, 1e-9);
  std::vector<int> differing;
  for (int i = 0; i < source.parties(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (source.ops[idx].rows() != target.ops[idx].rows())
      throw std::invalid_argument("all_det_chain: operator dimension mismatch");
    const double gap = (source.ops[idx] - target.ops[idx]).frobenius_norm();
    if (gap > eps * (1.0 + target.ops[idx].frobenius_norm())) differing.push_back(i);
  }

  ChainResult result;
  if (differing.empty()) {
    result.yes = true;
    return result;
  }
  if (differing.size() > 4)
    throw std::invalid_argument("all_det_chain: more than 4 differing parties in exhaustive mode");

  std::vector<int> order = differing;
  std::sort(order.begin(), order.end());
  do {
    StateInClass current = source;
    std::vector<ChainStep> steps;
    bool ok = true;
    for (int j : order) {
      const auto jdx = static_cast<std::size_t>(j);
      const SimplexFeasibility lp = all_det_step(current, target.ops[jdx], j, group, tol);
      if (lp.status != Status::kCertifiedYes) {
        ok = false;
        break;
      }
      ChainStep step;
      step.party = j;
      step.symmetries = admissible_set(current, group, j, tol);
      step.p = lp.p;
      step.residual = lp.residual;
      steps.push_back(std::move(step));
      current = current.with_op(j, target.ops[jdx]);
    }
    if (ok) {
      result.yes = true;
      result.order = order;
      result.steps = std::move(steps);
      return result;
    }
  } while (std::next_permutation(order.begin(), order.end()));

  return result;  // no within the direct-chain model
}

VolumeEstimate estimate_volume(VolumeKind kind, const StateInClass& anchor, const Slice& slice,
                               const StabilizerGroup& group, std::uint64_t samples,
                               std::uint64_t seed, int threads) {
  if (samples == 0) throw std::invalid_argument("estimate_volume: sample count must be positive");
  if (anchor.parties() != slice.base.parties())
    throw std::invalid_argument("estimate_volume: anchor and slice party counts differ");

  const auto probe = [&](std::uint64_t index) {
    const StateInClass drawn = sample_state(slice, seed, index);
    const ChainResult chain = (kind == VolumeKind::kAccessible)
                                  ? all_det_chain(anchor, drawn, group)
                                  : all_det_chain(drawn, anchor, group);
    return chain.yes;
  };

  VolumeEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.hits = parallel_hits(samples, threads, probe);
  est.fraction = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.half_width = binomial_half_width(est.fraction, samples);
  return est;
}

double entanglement_ratio(const VolumeEstimate& v, double v_sup, VolumeKind kind) {
  if (!(v_sup > 0.0)) throw std::invalid_argument("entanglement_ratio: v_sup must be positive");
  const double ratio = v.fraction / v_sup;
  return kind == VolumeKind::kAccessible ? ratio : 1.0 - ratio;
}

VolumeEstimate corollary2_fraction(const ClassSpec& spec, std::uint64_t samples,
                                   std::uint64_t seed, int threads) {
  if (samples == 0)
    throw std::invalid_argument("corollary2_fraction: sample count must be positive");
  for (int d : spec.dims) {
    if (d != 2) throw std::invalid_argument("corollary2_fraction: class must be all qubits");
  }

  const auto probe = [&](std::uint64_t index) {
    Rng rng(seed, index);
    std::vector<BlochVec> blochs;
    blochs.reserve(spec.dims.size());
    for (std::size_t i = 0; i < spec.dims.size(); ++i) blochs.push_back(rng.ball(kBallRadius));
    const StateInClass state = StateInClass::from_bloch(spec.name, blochs);
    return check_reachable(state, spec.stabilizer, 1e-9).reachable;
  };

  VolumeEstimate est;
  est.samples = samples;
  est.seed = seed;
  est.hits = parallel_hits(samples, threads, probe);
  est.fraction = static_cast<double>(est.hits) / static_cast<double>(samples);
  est.half_width = binomial_half_width(est.fraction, samples);
  return est;
}

}  // namespace loccn
