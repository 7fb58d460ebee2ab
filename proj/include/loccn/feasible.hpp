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

#include "loccn/linalg.hpp"

namespace loccn {

enum class Status { kCertifiedYes, kCertifiedNo, kInconclusive };

const char* to_string(Status s);

struct SimplexFeasibility {
  Status status = Status::kInconclusive;
  std::vector<double> p;  // convex weights; populated with the best point found
  double residual = 0.0;  // Euclidean residual of the extracted weights
  std::optional<bool> plane_ok;
};

/// Convex feasibility: does some p on the probability simplex satisfy
/// sum_k p_k columns[k] = target?  Phase-1 simplex with Bland's rule on
/// unit-scaled columns; feasibility threshold tol * (1 + |target|).
/// An empty column list is certified-no.  Zero columns are handled, not
/// an error.
SimplexFeasibility simplex_solve(const std::vector<std::vector<double>>& columns,
                                 const std::vector<double>& target, double tol = kDefaultTol);

/// Convex-hull membership of target among the points.  With check_plane set
/// (3-vectors only) also reports whether all points and the target share the
/// coordinate-sum plane of the first point.
SimplexFeasibility hull_membership(const std::vector<std::vector<double>>& points,
                                   const std::vector<double>& target, double tol = kDefaultTol,
                                   bool check_plane = false);

/// Real coordinates of a Hermitian matrix: diagonal entries, then sqrt(2)
/// times the real parts of the strict upper triangle (row-major), then
/// sqrt(2) times the imaginary parts.  Isometric for the Frobenius norm.
std::vector<double> vectorize_hermitian(const CMatrix& h);
CMatrix unvectorize_hermitian(const std::vector<double>& v, std::size_t d);

struct OrbitResult {
  Status status = Status::kInconclusive;
  CMatrix h_op;           // candidate target operator (best found)
  std::vector<double> p;  // weights aligned with the factor list
  double residual = 0.0;  // Frobenius residual of sum_k p_k S_k^dag H S_k - G1
};

/// Searches for a positive definite unit-trace H and weights p with
/// sum_k p_k S_k^dag H S_k = G1 such that H is not a conjugate S G1 S^dag of
/// the source by any listed factor (Frobenius distance above tol counts as
/// different).  Certified-yes results reconstruct G1 to 1e-8 and have
/// min eigenvalue of H at least 1e-6.
///
/// Certified-no is produced only when (a) every factor is proportional to the
/// identity, or (b) for qubit operators with at most three factors, where a
/// simplex grid of step 1e-3 with an interval bound on the linear solve pins
/// every solution to the trivial conjugates.  The grid certificate excludes
/// solutions outside a band of width ~ (grid step * |h|) / sigma_min around
/// the trivial set and verifies coincidence on the grid; instances whose only
/// nontrivial solutions hide inside that band are beyond its resolution.
/// Everything else is reported inconclusive, never certified.
OrbitResult orbit_search(const CMatrix& g1, const std::vector<CMatrix>& factors,
                         double tol = kDefaultTol, int budget = 64, std::uint64_t seed = 0);

}  // namespace loccn
