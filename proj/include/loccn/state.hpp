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

#include <string>
#include <vector>

#include "loccn/linalg.hpp"

namespace loccn {

/// A state inside a fixed class, encoded by one positive definite unit-trace
/// operator per party.  Construction validates: Hermitian (at tol), trace 1
/// within 1e-10, minimum eigenvalue >= 1e-8.
struct StateInClass {
  std::string class_id;
  std::vector<CMatrix> ops;

  static StateInClass make(std::string class_id, std::vector<CMatrix> ops,
                           double tol = kDefaultTol);
  static StateInClass from_bloch(std::string class_id, const std::vector<BlochVec>& blochs,
                                 double tol = kDefaultTol);

  int parties() const { return static_cast<int>(ops.size()); }

  /// Bloch vector of a qubit party; errors if the party is not 2-dimensional.
  BlochVec bloch(int party) const;

  /// Replaces one party operator, revalidating it.
  StateInClass with_op(int party, const CMatrix& op, double tol = kDefaultTol) const;
};

/// Frobenius distance between the operator tuples of two states in the same
/// class; errors on mismatched shapes.
double state_distance(const StateInClass& a, const StateInClass& b);

}  // namespace loccn
